//! The game engine: specs, strategies, exact payoffs, Monte Carlo runs and
//! the plug-in payoff estimator.
//!
//! Alice answers `a = ±1`, Bob answers `b ∈ {0, 1}`. A spec assigns a weight
//! to every `(key, a, b = 1)` cell; the payoff is the weighted sum of the
//! per-key conditional probabilities of those cells. Keys are conditioned on
//! individually, so the referee's key distribution does not enter the exact
//! payoff.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    eig_hermitian, is_density_matrix, partial_trace, pauli, tensor, BlochVector, ComplexMatrix,
    Subsystem, SQRT_3,
};
use crate::states::{bell_state, referee_state, BellIndex, RefereeEnsemble, RefereeKey, Sign};
use crate::tolerance;
use crate::witness;

/// Alice's three answers `(a_1, a_2, a_3)`.
pub type SignTriple = [Sign; 3];

/// All eight sign triples in lexicographic order, `-1 < +1`.
pub fn sign_triples() -> [SignTriple; 8] {
    let mut out = [[Sign::Minus; 3]; 8];
    for (idx, t) in out.iter_mut().enumerate() {
        for (bit, s) in t.iter_mut().enumerate() {
            if idx >> (2 - bit) & 1 == 1 {
                *s = Sign::Plus;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AliceInputKind {
    /// Alice is told the label and returns a measured `±1`.
    Measured,
    /// A fixed real coefficient the referee substitutes for Alice's answer.
    Constant(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AliceInput {
    pub label: u8,
    pub kind: AliceInputKind,
}

/// A generic game `P_G = scale · Σ_{j,k} g_jk ⟨a_j b⟩_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    alice_inputs: Vec<AliceInput>,
    referee_keys: Vec<RefereeKey>,
    coefficients: BTreeMap<(u8, RefereeKey), f64>,
    r: f64,
    payoff_scale: f64,
}

impl GameSpec {
    pub fn new(
        alice_inputs: Vec<AliceInput>,
        referee_keys: Vec<RefereeKey>,
        coefficients: BTreeMap<(u8, RefereeKey), f64>,
        r: f64,
        payoff_scale: f64,
    ) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Argument(format!("calibration parameter r = {r} must be >= 0")));
        }
        if !payoff_scale.is_finite() {
            return Err(Error::Argument("payoff scale must be finite".into()));
        }
        for (i, input) in alice_inputs.iter().enumerate() {
            if alice_inputs[..i].iter().any(|o| o.label == input.label) {
                return Err(Error::Argument(format!("duplicate Alice label {}", input.label)));
            }
        }
        for (i, k) in referee_keys.iter().enumerate() {
            if referee_keys[..i].contains(k) {
                return Err(Error::Argument(format!("duplicate referee key {k}")));
            }
        }
        for (&(label, key), g) in &coefficients {
            if !g.is_finite() {
                return Err(Error::Argument(format!("coefficient for ({label}, {key}) is not finite")));
            }
            if !referee_keys.contains(&key) {
                return Err(Error::Argument(format!("coefficient references unknown key {key}")));
            }
            let input = alice_inputs
                .iter()
                .find(|i| i.label == label)
                .ok_or_else(|| Error::Argument(format!("coefficient references unknown label {label}")))?;
            // Alice only learns the axis of the key, so a measured row is
            // observable only on keys sharing its axis.
            if input.kind == AliceInputKind::Measured && label != key.j() {
                return Err(Error::Argument(format!(
                    "measured label {label} cannot be paired with key {key}"
                )));
            }
        }
        Ok(Self { alice_inputs, referee_keys, coefficients, r, payoff_scale })
    }

    pub fn alice_inputs(&self) -> &[AliceInput] {
        &self.alice_inputs
    }

    pub fn referee_keys(&self) -> &[RefereeKey] {
        &self.referee_keys
    }

    pub fn coefficients(&self) -> &BTreeMap<(u8, RefereeKey), f64> {
        &self.coefficients
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn payoff_scale(&self) -> f64 {
        self.payoff_scale
    }

    /// Payoff weights of the `(a = +1, b = 1)` and `(a = −1, b = 1)` cells of `key`.
    pub fn click_weights(&self, key: RefereeKey) -> [f64; 2] {
        let mut w = [0.0; 2];
        for input in &self.alice_inputs {
            let Some(&g) = self.coefficients.get(&(input.label, key)) else {
                continue;
            };
            match input.kind {
                AliceInputKind::Measured => {
                    w[0] += g;
                    w[1] -= g;
                }
                AliceInputKind::Constant(c) => {
                    w[0] += g * c;
                    w[1] += g * c;
                }
            }
        }
        w.map(|x| self.payoff_scale * x)
    }

    /// True when this is [`canonical_game`] at its own `r`.
    pub fn is_canonical(&self) -> bool {
        let reference = canonical_game(self.r).expect("r validated at construction");
        self.alice_inputs == reference.alice_inputs
            && self.referee_keys == reference.referee_keys
            && self.coefficients == reference.coefficients
            && self.payoff_scale == reference.payoff_scale
    }
}

/// The six-key game with rows `j = 1, 2, 3` (`g = s`) and the constant row
/// `j = 0` (`a_0 = −r/√3`, `g = 1`), scaled by 2.
pub fn canonical_game(r: f64) -> Result<GameSpec> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Argument(format!("calibration parameter r = {r} must be >= 0")));
    }
    let keys = RefereeKey::all().to_vec();
    let mut inputs = vec![AliceInput { label: 0, kind: AliceInputKind::Constant(-r / SQRT_3) }];
    inputs.extend((1..=3).map(|label| AliceInput { label, kind: AliceInputKind::Measured }));
    let mut g = BTreeMap::new();
    for &k in &keys {
        g.insert((k.j(), k), k.s().value());
        g.insert((0, k), 1.0);
    }
    GameSpec::new(inputs, keys, g, r, 2.0)
}

/// Bob's two-outcome measurement on `B ⊗ C`; `b1` is the `b = 1` effect.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    b1: ComplexMatrix,
}

impl Povm {
    pub fn new(b1: ComplexMatrix) -> Result<Self> {
        if b1.dim() != 4 {
            return Err(Error::Domain(format!("Bob's effect must be 4x4, got {0}x{0}", b1.dim())));
        }
        let eig = eig_hermitian(&b1)?;
        if eig[3] < -tolerance::PSD || eig[0] > 1.0 + tolerance::PSD {
            return Err(Error::Domain(format!(
                "effect spectrum [{}, {}] outside [0, 1]",
                eig[3], eig[0]
            )));
        }
        Ok(Self { b1 })
    }

    pub fn b1(&self) -> &ComplexMatrix {
        &self.b1
    }

    pub fn b0(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(4).expect("dim 4") - &self.b1
    }
}

/// Projection onto the singlet of `B ⊗ C` (`b = 1`) versus the triplet.
pub fn singlet_projector_bc() -> Povm {
    Povm { b1: bell_state(BellIndex::PsiMinus) }
}

/// Singlet projector degraded by two-photon visibility `V`:
/// `B_1 = V·|Ψ⁻⟩⟨Ψ⁻| + (1 − V)·1/2`. At `V = 0` the photons are fully
/// distinguishable and every input clicks with probability ½.
pub fn partial_bsm_povm(visibility: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::Argument(format!("visibility {visibility} not in [0, 1]")));
    }
    let singlet = bell_state(BellIndex::PsiMinus).scale(visibility);
    let flat = ComplexMatrix::identity(4)?.scale(0.5 * (1.0 - visibility));
    Ok(Povm { b1: &singlet + &flat })
}

/// A deterministic local-hidden-state strategy.
///
/// Alice answers `alice[j-1]` on label `j`. Bob holds the hidden qubit state
/// and applies `bob` to it together with the referee's qubit, so his click
/// probability on referee state `ω` is `Tr[M ω]` with
/// `M = Tr_B[(ρ_λ ⊗ 1) B_1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LhsStrategy {
    pub alice: SignTriple,
    pub hidden_state: BlochVector,
    pub bob: Povm,
}

impl LhsStrategy {
    /// Bob's effective effect on the referee's qubit.
    pub fn response_effect(&self) -> ComplexMatrix {
        let rho = ComplexMatrix::bloch_state(&self.hidden_state);
        let lifted = tensor(&rho, &ComplexMatrix::identity(2).expect("dim 2")).expect("2x2 ⊗ 2x2");
        partial_trace(&(&lifted * self.bob.b1()), Subsystem::First).expect("dim 4")
    }

    /// The strategy that clicks exactly on the pure state along `direction`.
    pub fn aligned(alice: SignTriple, direction: BlochVector) -> Result<Self> {
        let tau = ComplexMatrix::bloch_state(&direction);
        let b1 = tensor(&ComplexMatrix::identity(2)?, &tau)?;
        Ok(Self { alice, hidden_state: direction, bob: Povm::new(b1)? })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// Alice measures `σ_j` on her half of `shared_state`; Bob applies
    /// `bob` to his half and the referee's qubit.
    HonestQuantum { shared_state: ComplexMatrix, bob: Povm },
    LhsDeterministic(LhsStrategy),
    /// A convex mixture of deterministic LHS strategies.
    CustomLocal(Vec<(f64, LhsStrategy)>),
}

impl Strategy {
    pub fn honest(shared_state: ComplexMatrix, bob: Povm) -> Result<Self> {
        if shared_state.dim() != 4 || !is_density_matrix(&shared_state).is_valid {
            return Err(Error::Domain("shared state is not a two-qubit density matrix".into()));
        }
        Ok(Strategy::HonestQuantum { shared_state, bob })
    }

    pub fn custom_local(components: Vec<(f64, LhsStrategy)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("empty LHS mixture".into()));
        }
        if components.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Domain("LHS weights must be nonnegative".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("LHS weights sum to {total}, not 1")));
        }
        Ok(Strategy::CustomLocal(components))
    }

    /// Replaces every one of Bob's `b = 1` effects by `f(B_1)`.
    pub fn map_bob_effect(
        &self,
        f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let map_lhs = |l: &LhsStrategy| -> Result<LhsStrategy> {
            Ok(LhsStrategy { bob: Povm::new(f(l.bob.b1())?)?, ..l.clone() })
        };
        Ok(match self {
            Strategy::HonestQuantum { shared_state, bob } => Strategy::HonestQuantum {
                shared_state: shared_state.clone(),
                bob: Povm::new(f(bob.b1())?)?,
            },
            Strategy::LhsDeterministic(l) => Strategy::LhsDeterministic(map_lhs(l)?),
            Strategy::CustomLocal(parts) => Strategy::CustomLocal(
                parts.iter().map(|(w, l)| Ok((*w, map_lhs(l)?))).collect::<Result<_>>()?,
            ),
        })
    }
}

/// `p(a, b | j, s)` for one referee key.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution {
    /// Indexed `[a][b]` with `a = +1 → 0`, `a = −1 → 1`.
    p: [[f64; 2]; 2],
}

fn a_index(a: Sign) -> usize {
    match a {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl JointDistribution {
    pub fn prob(&self, a: Sign, b: u8) -> f64 {
        self.p[a_index(a)][usize::from(b)]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// Cells in the order `(+1,0), (+1,1), (−1,0), (−1,1)`.
    pub fn cells(&self) -> [(Sign, u8, f64); 4] {
        [
            (Sign::Plus, 0, self.p[0][0]),
            (Sign::Plus, 1, self.p[0][1]),
            (Sign::Minus, 0, self.p[1][0]),
            (Sign::Minus, 1, self.p[1][1]),
        ]
    }

    fn mix(parts: impl Iterator<Item = (f64, JointDistribution)>) -> Self {
        let mut p = [[0.0; 2]; 2];
        for (w, d) in parts {
            for (row, drow) in p.iter_mut().zip(d.p) {
                for (x, y) in row.iter_mut().zip(drow) {
                    *x += w * y;
                }
            }
        }
        Self { p }
    }

    fn validated(self) -> Result<Self> {
        if self.p.iter().flatten().any(|&x| !(-1e-9..=1.0 + 1e-9).contains(&x))
            || (self.total() - 1.0).abs() > 1e-9
        {
            return Err(Error::Domain(format!("inconsistent outcome distribution {:?}", self.p)));
        }
        Ok(self)
    }
}

fn lhs_joint(l: &LhsStrategy, omega: &ComplexMatrix, j: u8) -> JointDistribution {
    let click = l.response_effect().trace_product(omega).expect("dim 2").re;
    let mut p = [[0.0; 2]; 2];
    let a = a_index(l.alice[usize::from(j - 1)]);
    p[a] = [1.0 - click, click];
    JointDistribution { p }
}

pub fn joint_probabilities(
    strategy: &Strategy,
    ensemble: &RefereeEnsemble,
    key: RefereeKey,
) -> Result<JointDistribution> {
    let omega = referee_state(ensemble, key)?;
    let dist = match strategy {
        Strategy::HonestQuantum { shared_state, bob } => {
            let sigma = pauli(key.j())?;
            let one = ComplexMatrix::identity(2)?;
            let mut p = [[0.0; 2]; 2];
            for a in Sign::BOTH {
                let proj = (&one + &sigma.scale(a.value())).scale(0.5);
                // Bob's unnormalised conditional state given Alice's outcome.
                let steered = partial_trace(
                    &(&tensor(&proj, &one)? * shared_state),
                    Subsystem::First,
                )?;
                let p_a = steered.trace().re;
                let click = bob.b1().trace_product(&tensor(&steered, &omega)?)?.re;
                p[a_index(a)] = [p_a - click, click];
            }
            JointDistribution { p }
        }
        Strategy::LhsDeterministic(l) => lhs_joint(l, &omega, key.j()),
        Strategy::CustomLocal(parts) => {
            JointDistribution::mix(parts.iter().map(|(w, l)| (*w, lhs_joint(l, &omega, key.j()))))
        }
    };
    dist.validated()
}

/// Exact payoff from the strategy's outcome distributions.
pub fn exact_payoff(spec: &GameSpec, strategy: &Strategy, ensemble: &RefereeEnsemble) -> Result<f64> {
    spec.referee_keys().iter().try_fold(0.0, |acc, &key| {
        let d = joint_probabilities(strategy, ensemble, key)?;
        let [wp, wm] = spec.click_weights(key);
        Ok(acc + wp * d.prob(Sign::Plus, 1) + wm * d.prob(Sign::Minus, 1))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TallyCell {
    pub key: RefereeKey,
    pub a: Sign,
    pub b: u8,
}

/// Outcome counts `N(j, s, a, b)` aggregated over runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TallyTable {
    counts: BTreeMap<TallyCell, u64>,
}

#[derive(Serialize, Deserialize)]
struct TallyRow {
    j: u8,
    s: String,
    a: String,
    b: u8,
    count: u64,
}

impl TallyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: RefereeKey, a: Sign, b: u8, count: u64) -> Result<()> {
        if b > 1 {
            return Err(Error::Argument(format!("Bob's outcome must be 0 or 1, got {b}")));
        }
        if count > 0 {
            *self.counts.entry(TallyCell { key, a, b }).or_insert(0) += count;
        }
        Ok(())
    }

    pub fn count(&self, key: RefereeKey, a: Sign, b: u8) -> u64 {
        self.counts.get(&TallyCell { key, a, b }).copied().unwrap_or(0)
    }

    pub fn row_total(&self, key: RefereeKey) -> u64 {
        self.counts.iter().filter(|(c, _)| c.key == key).map(|(_, n)| n).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TallyCell, u64)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    /// Adds every count of `other` into `self`.
    pub fn merge(&mut self, other: &TallyTable) {
        for (&cell, &n) in &other.counts {
            *self.counts.entry(cell).or_insert(0) += n;
        }
    }

    /// Multiplies every count by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self { counts: self.counts.iter().map(|(&c, &n)| (c, n * factor)).collect() }
    }

    /// CSV with header `j,s,a,b,count`, one row per nonzero cell.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (c, n) in self.iter() {
            w.serialize(TallyRow {
                j: c.key.j(),
                s: c.key.s().to_string(),
                a: c.a.to_string(),
                b: c.b,
                count: n,
            })?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(s.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["j", "s", "a", "b", "count"] {
            return Err(Error::Parse(format!("unexpected tally header {headers:?}")));
        }
        let mut table = Self::new();
        for row in rdr.deserialize::<TallyRow>() {
            let row = row?;
            let key = RefereeKey::new(row.j, Sign::parse(&row.s)?)?;
            let cell = TallyCell { key, a: Sign::parse(&row.a)?, b: row.b };
            if table.counts.contains_key(&cell) {
                return Err(Error::Parse(format!("duplicate tally row for {key}, a={}, b={}", cell.a, cell.b)));
            }
            table.add(key, cell.a, cell.b, row.count)?;
        }
        Ok(table)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }
}

fn stream_id(key: RefereeKey) -> u64 {
    u64::from(key.j()) * 2 + u64::from(key.s() == Sign::Plus)
}

/// Draws `n_per_setting` runs for every referee key of `spec`.
///
/// Each key samples from its own ChaCha stream derived from `seed` and the
/// key, so the table does not depend on how settings are scheduled.
pub fn simulate_runs(
    spec: &GameSpec,
    strategy: &Strategy,
    ensemble: &RefereeEnsemble,
    n_per_setting: u64,
    seed: u64,
) -> Result<TallyTable> {
    if n_per_setting == 0 {
        return Err(Error::Argument("n_per_setting must be at least 1".into()));
    }
    let rows = spec
        .referee_keys()
        .par_iter()
        .map(|&key| {
            let dist = joint_probabilities(strategy, ensemble, key)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_id(key));
            let mut row = TallyTable::new();
            let mut remaining = n_per_setting;
            let mut mass = 1.0_f64;
            let cells = dist.cells();
            for (i, &(a, b, p)) in cells.iter().enumerate() {
                let draw = if i + 1 == cells.len() {
                    remaining
                } else if remaining == 0 || mass <= 0.0 {
                    0
                } else {
                    let q = (p.max(0.0) / mass).clamp(0.0, 1.0);
                    Binomial::new(remaining, q)
                        .map_err(|e| Error::Domain(e.to_string()))?
                        .sample(&mut rng)
                };
                row.add(key, a, b, draw)?;
                remaining -= draw;
                mass -= p.max(0.0);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.iter().fold(TallyTable::new(), |mut acc, r| {
        acc.merge(r);
        acc
    }))
}

/// Payoff estimate with its first-order standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_per_setting: BTreeMap<RefereeKey, u64>,
}

impl Serialize for PayoffEstimate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Setting {
            j: u8,
            s: i8,
            n: u64,
        }
        #[derive(Serialize)]
        struct Repr {
            value: f64,
            stderr: f64,
            n_per_setting: Vec<Setting>,
        }
        Repr {
            value: self.value,
            stderr: self.stderr,
            n_per_setting: self
                .n_per_setting
                .iter()
                .map(|(k, &n)| Setting { j: k.j(), s: k.s().as_i8(), n })
                .collect(),
        }
        .serialize(ser)
    }
}

/// Plug-in estimate of the payoff from tallies.
///
/// Each key contributes `Σ_cells w·N_cell/N`; its variance is the multinomial
/// variance of that linear combination with the row total held fixed, and
/// keys are independent.
pub fn estimate_payoff(spec: &GameSpec, t: &TallyTable) -> Result<PayoffEstimate> {
    let mut value = 0.0;
    let mut variance = 0.0;
    let mut n_per_setting = BTreeMap::new();
    for &key in spec.referee_keys() {
        let n = t.row_total(key);
        if n == 0 {
            return Err(Error::EmptySetting(key));
        }
        let nf = n as f64;
        let w = spec.click_weights(key);
        let (mut mean, mut second) = (0.0, 0.0);
        for (a, wa) in [(Sign::Plus, w[0]), (Sign::Minus, w[1])] {
            let p = t.count(key, a, 1) as f64 / nf;
            mean += wa * p;
            second += wa * wa * p;
        }
        value += mean;
        variance += ((second - mean * mean) / nf).max(0.0);
        n_per_setting.insert(key, n);
    }
    Ok(PayoffEstimate { value, stderr: variance.sqrt(), n_per_setting })
}

/// Best single-`λ` cheating strategy for the canonical game.
#[derive(Clone, Debug, PartialEq)]
pub struct LhsOptimum {
    pub assignment: SignTriple,
    pub hidden_state: BlochVector,
    /// `max_a λ_max(T_a(r))`, with Bob's normalisation at its maximum of 1.
    pub payoff: f64,
}

impl LhsOptimum {
    /// A concrete strategy attaining `payoff`.
    pub fn strategy(&self) -> Result<LhsStrategy> {
        LhsStrategy::aligned(self.assignment, self.hidden_state)
    }
}

pub fn lhs_best_deterministic(spec: &GameSpec, ensemble: &RefereeEnsemble) -> Result<LhsOptimum> {
    if !spec.is_canonical() {
        return Err(Error::Unsupported(
            "LHS optimisation is implemented for the canonical six-key game only".into(),
        ));
    }
    let mut best: Option<LhsOptimum> = None;
    for a in sign_triples() {
        let t = witness::t_operator(ensemble, a, spec.r())?;
        let top = eig_hermitian(&t)?[0];
        if best.as_ref().is_some_and(|b| top <= b.payoff + 1e-12) {
            continue;
        }
        let (_, v) = t.pauli_components()?;
        let hidden = BlochVector::direction(v).unwrap_or(BlochVector::new(0.0, 0.0, 1.0)?);
        best = Some(LhsOptimum { assignment: a, hidden_state: hidden, payoff: top });
    }
    Ok(best.expect("eight assignments"))
}

impl fmt::Display for PayoffEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.stderr)
    }
}
