//! Quantum states used by the game: Bell and Werner states on the shared
//! pair, and the referee's six qubit preparations.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{dot3, BlochVector, ComplexMatrix, C64};
use crate::tolerance;

/// A `±1` outcome or label. Orders as `Minus < Plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Argument(format!("expected +1 or -1, got {other}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Parses `+1`, `1` or `-1`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("expected +1 or -1, got {other:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// The referee's choice `k = (j, s)`: axis `j ∈ {1,2,3}` and eigenvalue `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefereeKey {
    j: u8,
    s: Sign,
}

impl RefereeKey {
    pub fn new(j: u8, s: Sign) -> Result<Self> {
        if !(1..=3).contains(&j) {
            return Err(Error::Argument(format!("axis {j} not in 1..=3")));
        }
        Ok(Self { j, s })
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    pub fn s(&self) -> Sign {
        self.s
    }

    /// All six keys in `(j, s)` order with `s = +1` first.
    pub fn all() -> [RefereeKey; 6] {
        let mut out = [RefereeKey { j: 1, s: Sign::Plus }; 6];
        for (idx, slot) in out.iter_mut().enumerate() {
            *slot = RefereeKey { j: (idx / 2) as u8 + 1, s: Sign::BOTH[idx % 2] };
        }
        out
    }

    /// Ideal preparation direction `s·e_j`.
    pub fn ideal_direction(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[usize::from(self.j - 1)] = self.s.value();
        v
    }
}

impl fmt::Display for RefereeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, s={})", self.j, self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellIndex {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellIndex {
    pub const ALL: [BellIndex; 4] =
        [BellIndex::PsiMinus, BellIndex::PsiPlus, BellIndex::PhiMinus, BellIndex::PhiPlus];

    pub const TRIPLETS: [BellIndex; 3] = [BellIndex::PsiPlus, BellIndex::PhiMinus, BellIndex::PhiPlus];

    /// State vector in the `|00⟩, |01⟩, |10⟩, |11⟩` basis.
    pub fn ket(self) -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            BellIndex::PsiMinus => [z, h, -h, z],
            BellIndex::PsiPlus => [z, h, h, z],
            BellIndex::PhiMinus => [h, z, z, -h],
            BellIndex::PhiPlus => [h, z, z, h],
        }
    }
}

pub fn bell_state(idx: BellIndex) -> ComplexMatrix {
    ComplexMatrix::outer(&idx.ket()).expect("Bell kets are four-dimensional")
}

/// `W|Ψ⁻⟩⟨Ψ⁻| + (1 − W)·1/4` for `0 ≤ W ≤ 1`.
pub fn werner_state(w: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Argument(format!("Werner parameter {w} not in [0, 1]")));
    }
    let noise = ComplexMatrix::identity(4)?.scale((1.0 - w) / 4.0);
    Ok(&bell_state(BellIndex::PsiMinus).scale(w) + &noise)
}

/// Mixes the singlet with weight `p` and each triplet with `(1 − p)/3`,
/// returning the mixture and its Werner parameter `(4p − 1)/3`.
pub fn werner_from_bell_weights(p_singlet: f64) -> Result<(ComplexMatrix, f64)> {
    if !(0.25..=1.0).contains(&p_singlet) {
        return Err(Error::Argument(format!(
            "singlet weight {p_singlet} not in [1/4, 1]"
        )));
    }
    let triplet = (1.0 - p_singlet) / 3.0;
    let rho = BellIndex::TRIPLETS
        .iter()
        .fold(bell_state(BellIndex::PsiMinus).scale(p_singlet), |acc, &b| {
            &acc + &bell_state(b).scale(triplet)
        });
    Ok((rho, (4.0 * p_singlet - 1.0) / 3.0))
}

/// A proper 3×3 rotation acting on Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3([[f64; 3]; 3]);

impl Rotation3 {
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > tolerance::ROTATION {
                    return Err(Error::Argument("matrix is not orthogonal".into()));
                }
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (det - 1.0).abs() > tolerance::ROTATION {
            return Err(Error::Argument(format!("rotation determinant {det} is not +1")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Rodrigues rotation by `angle` about `axis` (need not be normalised).
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = crate::qmath::norm3(axis);
        if n == 0.0 {
            return Err(Error::Argument("rotation axis is zero".into()));
        }
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Self::new([
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ])
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)]
    }
}

/// The six Bloch vectors the referee actually prepares.
#[derive(Clone, Debug, PartialEq)]
pub struct RefereeEnsemble {
    vectors: BTreeMap<RefereeKey, BlochVector>,
}

impl RefereeEnsemble {
    /// Requires each of the six keys exactly once.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (RefereeKey, BlochVector)>,
    ) -> Result<Self> {
        let mut vectors = BTreeMap::new();
        for (k, n) in entries {
            if vectors.insert(k, n).is_some() {
                return Err(Error::Argument(format!("duplicate referee key {k}")));
            }
        }
        if let Some(missing) = RefereeKey::all().into_iter().find(|k| !vectors.contains_key(k)) {
            return Err(Error::Argument(format!("referee key {missing} missing")));
        }
        Ok(Self { vectors })
    }

    pub fn ideal() -> Self {
        Self::from_entries(RefereeKey::all().map(|k| {
            (k, BlochVector::from_array(k.ideal_direction()).expect("unit vector"))
        }))
        .expect("all six keys")
    }

    pub fn vector(&self, key: RefereeKey) -> Result<BlochVector> {
        self.vectors
            .get(&key)
            .copied()
            .ok_or_else(|| Error::Argument(format!("referee key {key} missing")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (RefereeKey, BlochVector)> + '_ {
        self.vectors.iter().map(|(&k, &n)| (k, n))
    }

    /// Scales every Bloch vector by `eta ∈ [0, 1]`.
    pub fn depolarize(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Argument(format!("shrink factor {eta} not in [0, 1]")));
        }
        self.map(|n| n.scaled(eta))
    }

    pub fn rotate(&self, rot: &Rotation3) -> Result<Self> {
        self.map(|n| BlochVector::from_array(rot.apply(n.to_array())))
    }

    fn map(&self, f: impl Fn(&BlochVector) -> Result<BlochVector>) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|(&k, n)| Ok((k, f(n)?)))
            .collect::<Result<_>>()?;
        Ok(Self { vectors })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: EnsembleFile = serde_json::from_str(s)?;
        let entries = file
            .vectors
            .into_iter()
            .map(|rec| {
                let key = RefereeKey::new(rec.j, Sign::from_i64(rec.s)?)?;
                Ok((key, BlochVector::from_array(rec.n)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = EnsembleFile {
            vectors: self
                .iter()
                .map(|(k, n)| EnsembleRecord {
                    j: k.j(),
                    s: i64::from(k.s().as_i8()),
                    n: n.to_array(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    vectors: Vec<EnsembleRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleRecord {
    j: u8,
    s: i64,
    n: [f64; 3],
}

/// The state `½(1 + n·σ)` the referee sends for `key`.
pub fn referee_state(e: &RefereeEnsemble, key: RefereeKey) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::bloch_state(&e.vector(key)?))
}

/// `⟨ψ_m|ρ|ψ_m⟩ = (1 + n_ρ·m)/2` for a qubit state and a unit target `m`.
pub fn fidelity_pure(rho: &ComplexMatrix, target: &BlochVector) -> Result<f64> {
    if !crate::qmath::is_density_matrix(rho).is_valid || rho.dim() != 2 {
        return Err(Error::Argument("fidelity needs a qubit density matrix".into()));
    }
    if (target.norm() - 1.0).abs() > tolerance::BLOCH_NORM {
        return Err(Error::Argument(format!(
            "fidelity target must be a unit vector, norm is {}",
            target.norm()
        )));
    }
    let n = rho.bloch_vector()?;
    Ok(0.5 * (1.0 + dot3(n, target.to_array())))
}
