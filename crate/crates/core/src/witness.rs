//! Soundness and calibration: the LHS bound operator `T_a(r)`, the
//! calibration threshold `r*`, referee tomography with bootstrap errors,
//! CHSH references and the channel covariance check.
//!
//! For a deterministic LHS strategy in which Alice answers `a = (a_1,a_2,a_3)`,
//! the canonical payoff is `Tr[M T_a(r)]` for some `0 ≤ M ≤ 1` on the
//! referee's qubit, with
//!
//! ```text
//! T_a(r) = (A(a) − r B)·σ − 2√3 r
//! A(a)   = Σ_j a_j (n(j,+) − n(j,−))
//! B      = Σ_j (n(j,+) + n(j,−)) / √3
//! ```
//!
//! so no local strategy wins once `max_a λ_max(T_a(r)) = max_a |A − rB| − 2√3 r ≤ 0`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{joint_probabilities, sign_triples, SignTriple, Strategy};
use crate::qmath::{
    dot3, eig_hermitian, hermitian_function_2x2, norm3, tensor, BlochVector, ComplexMatrix, C64, SQRT_3,
};
use crate::states::{referee_state, werner_state, RefereeEnsemble, RefereeKey, Sign};
use crate::tolerance;

/// Werner parameter above which the Vértesi inequality is violated.
pub const VERTESI_BOUND: f64 = 0.7056;
/// Werner parameter below which no Bell violation is possible.
pub const BELL_LOCAL_BOUND: f64 = 0.6595;
/// Werner parameter above which CHSH is violated.
pub const CHSH_BOUND: f64 = FRAC_1_SQRT_2;
/// Upper end of the `r*` bisection bracket.
pub const RSTAR_BRACKET: f64 = 4.0;

/// `A(a) = Σ_j a_j (n(j,+) − n(j,−))`.
pub fn a_vector(e: &RefereeEnsemble, a: SignTriple) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (idx, sign) in a.iter().enumerate() {
        let j = idx as u8 + 1;
        let plus = vector(e, j, Sign::Plus);
        let minus = vector(e, j, Sign::Minus);
        for i in 0..3 {
            out[i] += sign.value() * (plus[i] - minus[i]);
        }
    }
    out
}

/// `B = Σ_j (n(j,+) + n(j,−)) / √3`.
pub fn b_vector(e: &RefereeEnsemble) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (_, n) in e.iter() {
        for (o, x) in out.iter_mut().zip(n.to_array()) {
            *o += x / SQRT_3;
        }
    }
    out
}

fn vector(e: &RefereeEnsemble, j: u8, s: Sign) -> [f64; 3] {
    let key = RefereeKey::new(j, s).expect("axis in range");
    e.vector(key).expect("ensembles hold all six keys").to_array()
}

/// `T_a(r) = 2 Σ_j [a_j (ω(j,+) − ω(j,−)) − (r/√3)(ω(j,+) + ω(j,−))]`,
/// built from the referee's density matrices.
pub fn t_operator(e: &RefereeEnsemble, a: SignTriple, r: f64) -> Result<ComplexMatrix> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Argument(format!("calibration parameter r = {r} must be >= 0")));
    }
    let mut t = ComplexMatrix::zeros(2)?;
    for (idx, sign) in a.iter().enumerate() {
        let j = idx as u8 + 1;
        let plus = referee_state(e, RefereeKey::new(j, Sign::Plus)?)?;
        let minus = referee_state(e, RefereeKey::new(j, Sign::Minus)?)?;
        let diff = (&plus - &minus).scale(2.0 * sign.value());
        let sum = (&plus + &minus).scale(2.0 * r / SQRT_3);
        t = &(&t + &diff) - &sum;
    }
    Ok(t)
}

fn bound_for(e: &RefereeEnsemble, a: SignTriple, r: f64) -> f64 {
    let t = t_operator(e, a, r).expect("r validated by caller");
    eig_hermitian(&t).expect("T is Hermitian")[0]
}

/// `max_a λ_max(T_a(r))` and the first (lexicographically smallest)
/// assignment attaining it.
pub fn lhs_bound_argmax(e: &RefereeEnsemble, r: f64) -> Result<(f64, SignTriple)> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Argument(format!("calibration parameter r = {r} must be >= 0")));
    }
    let mut best = (f64::NEG_INFINITY, [Sign::Minus; 3]);
    for a in sign_triples() {
        let v = bound_for(e, a, r);
        if v > best.0 + 1e-12 {
            best = (v, a);
        }
    }
    Ok(best)
}

/// Largest payoff any single deterministic LHS strategy can reach at `r`.
/// The game is sound at `r` iff this is `≤ 0`.
pub fn lhs_bound(e: &RefereeEnsemble, r: f64) -> Result<f64> {
    Ok(lhs_bound_argmax(e, r)?.0)
}

/// Least `r ≥ 0` with `lhs_bound ≤ 0`, by bisection on `[0, 4]`.
///
/// `lhs_bound` is convex and nonincreasing in `r` (each `|A − rB|` has slope
/// at most `|B| ≤ 2√3`), so the sublevel set is `[r*, ∞)`. The returned
/// value is the upper end of the final bracket, so `lhs_bound(r*) ≤ 0`.
pub fn rstar_oracle(e: &RefereeEnsemble) -> Result<f64> {
    bisect_soundness(|r| lhs_bound(e, r).expect("r in bracket"), RSTAR_BRACKET)
}

fn bisect_soundness(f: impl Fn(f64) -> f64, bracket: f64) -> Result<f64> {
    if f(0.0) <= 0.0 {
        return Ok(0.0);
    }
    let hi_val = f(bracket);
    if hi_val > 0.0 {
        return Err(Error::Calibration(format!(
            "LHS bound is still {hi_val} at r = {bracket}; the ensemble cannot certify steering"
        )));
    }
    let (mut lo, mut hi) = (0.0, bracket);
    while hi - lo > tolerance::BISECTION {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Positive root of `|A − rB| = 2√3 r`, maximised over assignments:
/// `(−A·B + √((A·B)² + A·A (12 − B·B))) / (12 − B·B)`.
pub fn rstar_closed_form(e: &RefereeEnsemble) -> Result<f64> {
    rstar_quadratic(e, 12.0)
}

/// The alternative closed form with `3 − B·B` denominators. On the ideal
/// ensemble it evaluates to 2, not 1; it is kept for side-by-side reporting.
pub fn rstar_printed(e: &RefereeEnsemble) -> Result<f64> {
    rstar_quadratic(e, 3.0)
}

fn rstar_quadratic(e: &RefereeEnsemble, c: f64) -> Result<f64> {
    let b = b_vector(e);
    let bb = dot3(b, b);
    if bb >= c {
        return Err(Error::Domain(format!("B·B = {bb} must be below {c}")));
    }
    Ok(sign_triples()
        .into_iter()
        .map(|a| {
            let av = a_vector(e, a);
            let ab = dot3(av, b);
            ((ab * ab + dot3(av, av) * (c - bb)).sqrt() - ab) / (c - bb)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Game-legal calibration: the soundness boundary, but never below 1.
pub fn rstar_legal(rstar: f64) -> f64 {
    rstar.max(1.0)
}

/// Tomography counts `N(key, axis, outcome)` for the referee's six states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountRecord {
    counts: BTreeMap<(RefereeKey, u8, Sign), u64>,
}

#[derive(Serialize, Deserialize)]
struct CountRow {
    j: u8,
    s: String,
    axis: u8,
    outcome: String,
    count: u64,
}

impl CountRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: RefereeKey, axis: u8, outcome: Sign, count: u64) -> Result<()> {
        if !(1..=3).contains(&axis) {
            return Err(Error::Argument(format!("measurement axis {axis} not in 1..=3")));
        }
        *self.counts.entry((key, axis, outcome)).or_insert(0) += count;
        Ok(())
    }

    pub fn count(&self, key: RefereeKey, axis: u8, outcome: Sign) -> u64 {
        self.counts.get(&(key, axis, outcome)).copied().unwrap_or(0)
    }

    /// Noise-free counts for `e` with `total` shots per axis, rounded.
    pub fn from_ensemble(e: &RefereeEnsemble, total: u64) -> Self {
        let mut rec = Self::new();
        for (key, n) in e.iter() {
            for (i, x) in n.to_array().into_iter().enumerate() {
                let plus = ((1.0 + x) / 2.0 * total as f64).round() as u64;
                let axis = i as u8 + 1;
                rec.counts.insert((key, axis, Sign::Plus), plus);
                rec.counts.insert((key, axis, Sign::Minus), total - plus);
            }
        }
        rec
    }

    fn map_counts(&self, mut f: impl FnMut(u64) -> u64) -> Self {
        Self { counts: self.counts.iter().map(|(&k, &n)| (k, f(n))).collect() }
    }

    /// CSV with header `j,s,axis,outcome,count`.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (&(key, axis, outcome), &count) in &self.counts {
            w.serialize(CountRow {
                j: key.j(),
                s: key.s().to_string(),
                axis,
                outcome: outcome.to_string(),
                count,
            })?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(s.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["j", "s", "axis", "outcome", "count"] {
            return Err(Error::Parse(format!("unexpected counts header {headers:?}")));
        }
        let mut rec = Self::new();
        for row in rdr.deserialize::<CountRow>() {
            let row = row?;
            let key = RefereeKey::new(row.j, Sign::parse(&row.s)?)?;
            rec.add(key, row.axis, Sign::parse(&row.outcome)?, row.count)?;
        }
        Ok(rec)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }
}

/// A Bloch vector reconstructed by direct inversion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction {
    pub vector: BlochVector,
    /// The raw estimate had norm above 1 and was scaled back onto the sphere.
    pub clipped: bool,
}

/// `n_i = (N₊ − N₋)/(N₊ + N₋)` on each axis, radially clipped to `|n| ≤ 1`.
pub fn bloch_from_counts(rec: &CountRecord, key: RefereeKey) -> Result<Reconstruction> {
    let mut raw = [0.0; 3];
    for (i, slot) in raw.iter_mut().enumerate() {
        let axis = i as u8 + 1;
        let plus = rec.count(key, axis, Sign::Plus);
        let minus = rec.count(key, axis, Sign::Minus);
        if plus + minus == 0 {
            return Err(Error::Ingestion(format!("no counts on axis {axis} for {key}")));
        }
        *slot = (plus as f64 - minus as f64) / (plus + minus) as f64;
    }
    let norm = norm3(raw);
    if norm > 1.0 {
        let unit = raw.map(|x| x / norm);
        return Ok(Reconstruction { vector: BlochVector::from_array(unit)?, clipped: true });
    }
    Ok(Reconstruction { vector: BlochVector::from_array(raw)?, clipped: false })
}

/// Reconstructs all six states; also returns the keys that were clipped.
pub fn ensemble_from_counts(rec: &CountRecord) -> Result<(RefereeEnsemble, Vec<RefereeKey>)> {
    let mut clipped = Vec::new();
    let mut entries = Vec::with_capacity(6);
    for key in RefereeKey::all() {
        let r = bloch_from_counts(rec, key)?;
        if r.clipped {
            clipped.push(key);
        }
        entries.push((key, r.vector));
    }
    Ok((RefereeEnsemble::from_entries(entries)?, clipped))
}

/// Mean over the six keys of `(1 + n·s e_j)/2`.
pub fn average_fidelity(e: &RefereeEnsemble) -> f64 {
    e.iter()
        .map(|(k, n)| 0.5 * (1.0 + dot3(n.to_array(), k.ideal_direction())))
        .sum::<f64>()
        / 6.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub mean: f64,
    pub std: f64,
    pub failures: usize,
}

/// Poisson-resamples every count `trials` times and reports the mean and
/// sample standard deviation of `rstar_oracle` over the successful trials.
pub fn bootstrap_calibration(rec: &CountRecord, trials: usize, seed: u64) -> Result<BootstrapSummary> {
    if trials < 100 {
        return Err(Error::Argument(format!("bootstrap needs at least 100 trials, got {trials}")));
    }
    let outcomes: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let resampled = rec.map_counts(|n| {
                if n == 0 {
                    0
                } else {
                    Poisson::new(n as f64).expect("positive mean").sample(&mut rng) as u64
                }
            });
            ensemble_from_counts(&resampled)
                .and_then(|(e, _)| rstar_oracle(&e))
                .ok()
        })
        .collect();
    let values: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let failures = trials - values.len();
    if values.len() < 2 {
        return Err(Error::Calibration(format!("{failures} of {trials} bootstrap trials failed")));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Ok(BootstrapSummary { mean, std: var.sqrt(), failures })
}

fn spin_along_zx(theta: f64) -> ComplexMatrix {
    ComplexMatrix::from_pauli_components(0.0, [theta.sin(), 0.0, theta.cos()])
}

/// Werner-state CHSH value at Alice `{0, π/2}`, Bob `{π/4, −π/4}` in the
/// z–x plane, from correlators `Tr[ρ_W (a·σ ⊗ b·σ)]`.
pub fn chsh_werner(w: f64) -> Result<f64> {
    let rho = werner_state(w)?;
    let corr = |ta: f64, tb: f64| -> Result<f64> {
        let obs = tensor(&spin_along_zx(ta), &spin_along_zx(tb))?;
        Ok(rho.trace_product(&obs)?.re)
    };
    let (a0, a1, b0, b1) = (0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
    let s = (corr(a0, b0)? + corr(a0, b1)? + corr(a1, b0)? - corr(a1, b1)?).abs();
    debug_assert!((s - 2.0 * SQRT_2 * w).abs() < 1e-10);
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "unsteerable-by-this-game")]
    UnsteerableByGame,
    #[serde(rename = "steerable-no-known-Bell")]
    SteerableNoBell,
    #[serde(rename = "steerable-open-Bell-window")]
    SteerableOpenBellWindow,
    #[serde(rename = "Bell-violating")]
    BellViolating,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::UnsteerableByGame => "unsteerable-by-this-game",
            Regime::SteerableNoBell => "steerable-no-known-Bell",
            Regime::SteerableOpenBellWindow => "steerable-open-Bell-window",
            Regime::BellViolating => "Bell-violating",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Places a Werner state relative to the game threshold `r/√3` and the
/// known Bell thresholds.
pub fn regime_classify(w: f64, r: f64) -> Regime {
    if w > VERTESI_BOUND {
        Regime::BellViolating
    } else if w <= r / SQRT_3 {
        Regime::UnsteerableByGame
    } else if w > BELL_LOCAL_BOUND {
        Regime::SteerableOpenBellWindow
    } else {
        Regime::SteerableNoBell
    }
}

/// A qubit CPTP map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    kraus: Vec<ComplexMatrix>,
}

impl QubitChannel {
    /// Accepts one to four 2×2 Kraus operators with `Σ K†K = 1`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() || kraus.len() > 4 {
            return Err(Error::Argument(format!("expected 1..=4 Kraus operators, got {}", kraus.len())));
        }
        if kraus.iter().any(|k| k.dim() != 2) {
            return Err(Error::Argument("Kraus operators must be 2x2".into()));
        }
        let sum = kraus
            .iter()
            .fold(ComplexMatrix::zeros(2)?, |acc, k| &acc + &(&k.adjoint() * k));
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(2)?);
        if dev > tolerance::KRAUS {
            return Err(Error::Argument(format!("Kraus operators are not complete (deviation {dev:e})")));
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        Self { kraus: vec![ComplexMatrix::identity(2).expect("dim 2")] }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `ρ → (1 − p)ρ + p·1/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Argument(format!("depolarizing strength {p} not in [0, 1]")));
        }
        let mut kraus = vec![ComplexMatrix::identity(2)?.scale((1.0 - 0.75 * p).sqrt())];
        for j in 1..=3 {
            kraus.push(crate::qmath::pauli(j)?.scale((p / 4.0).sqrt()));
        }
        Self::new(kraus)
    }

    /// A random channel with four Kraus operators: Gaussian `G_i`, then
    /// `K_i = G_i S^{-1/2}` with `S = Σ G_i†G_i`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Result<Self> {
        let gs: Vec<ComplexMatrix> = (0..4)
            .map(|_| {
                let entries = (0..4)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                ComplexMatrix::from_entries(2, entries)
            })
            .collect::<Result<_>>()?;
        let s = gs.iter().fold(ComplexMatrix::zeros(2)?, |acc, g| &acc + &(&g.adjoint() * g));
        let inv_sqrt = hermitian_function_2x2(&s, |x| x.powf(-0.5))?;
        Self::new(gs.iter().map(|g| g * &inv_sqrt).collect())
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `φ(ρ) = Σ K ρ K†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(2).expect("dim 2"), |acc, k| &acc + &(&(k * rho) * &k.adjoint()))
    }

    /// `(1 ⊗ φ*)(E) = Σ (1 ⊗ K†) E (1 ⊗ K)` on a two-qubit operator.
    pub fn dual_on_second(&self, effect: &ComplexMatrix) -> Result<ComplexMatrix> {
        let one = ComplexMatrix::identity(2)?;
        self.kraus.iter().try_fold(ComplexMatrix::zeros(4)?, |acc, k| {
            let lifted = tensor(&one, k)?;
            Ok(&acc + &(&(&lifted.adjoint() * effect) * &lifted))
        })
    }
}

/// Checks that passing the referee's states through `channel` is the same
/// as leaving them alone and replacing Bob's effect by `(1 ⊗ φ*)(B_1)`,
/// comparing every joint probability.
pub fn channel_covariance_check(
    e: &RefereeEnsemble,
    channel: &QubitChannel,
    strategy: &Strategy,
) -> Result<bool> {
    let transformed = RefereeEnsemble::from_entries(
        e.iter()
            .map(|(k, _)| {
                let out = channel.apply(&referee_state(e, k)?);
                Ok((k, BlochVector::from_array(out.bloch_vector()?)?))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let dual_strategy = strategy.map_bob_effect(|b1| channel.dual_on_second(b1))?;
    for key in RefereeKey::all() {
        let sent = joint_probabilities(strategy, &transformed, key)?;
        let dual = joint_probabilities(&dual_strategy, e, key)?;
        for ((_, _, p), (_, _, q)) in sent.cells().iter().zip(dual.cells()) {
            if (p - q).abs() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyLabel {
    pub j: u8,
    pub s: i8,
}

impl From<RefereeKey> for KeyLabel {
    fn from(k: RefereeKey) -> Self {
        Self { j: k.j(), s: k.s().as_i8() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSample {
    pub r: f64,
    pub bound: f64,
}

/// Everything the referee needs to pick `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub r_star_oracle: f64,
    /// `None` when the alternative closed form is undefined (`B·B ≥ 3`).
    pub r_star_printed: Option<f64>,
    pub r_star_legal: f64,
    pub worst_assignment: [i8; 3],
    pub avg_fidelity: f64,
    pub clipped_keys: Vec<KeyLabel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bootstrap: Option<BootstrapSummary>,
    pub bound_at_r: Vec<BoundSample>,
}

impl CalibrationReport {
    pub fn build(
        e: &RefereeEnsemble,
        clipped: &[RefereeKey],
        bootstrap: Option<BootstrapSummary>,
    ) -> Result<Self> {
        let r_star_oracle = rstar_oracle(e)?;
        let (_, worst) = lhs_bound_argmax(e, r_star_oracle)?;
        let r_star_legal = rstar_legal(r_star_oracle);
        let mut grid = vec![0.0, 0.5, 1.0, 1.5, 2.0, r_star_oracle, r_star_legal];
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let bound_at_r = grid
            .into_iter()
            .map(|r| Ok(BoundSample { r, bound: lhs_bound(e, r)? }))
            .collect::<Result<_>>()?;
        Ok(Self {
            r_star_oracle,
            r_star_printed: rstar_printed(e).ok(),
            r_star_legal,
            worst_assignment: worst.map(Sign::as_i8),
            avg_fidelity: average_fidelity(e),
            clipped_keys: clipped.iter().map(|&k| k.into()).collect(),
            bootstrap,
            bound_at_r,
        })
    }
}
