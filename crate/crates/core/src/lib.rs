//! Simulator and verifier for the quantum-refereed steering (QRS) game.
//!
//! A referee (Charlie) sends Alice a classical axis label `j` and sends Bob a
//! qubit prepared in the `s = ±1` eigenstate of `σ_j`. Alice answers `a = ±1`,
//! Bob answers `b ∈ {0, 1}` from a joint measurement on his half of a shared
//! state and the referee's qubit. The referee scores
//!
//! ```text
//! P(r) = 2 Σ_{j,s} [ s⟨ab⟩_{j,s} − (r/√3)⟨b⟩_{j,s} ]
//! ```
//!
//! and a positive value certifies that Alice can steer Bob, with no trust in
//! either party. The calibration parameter `r` absorbs imperfect referee
//! state preparation.
//!
//! Modules:
//! - [`qmath`]: 2×2 / 4×4 complex Hermitian kernel.
//! - [`states`]: Bell and Werner states, referee ensembles, fidelity.
//! - [`game`]: game specs, strategies, exact payoff, Monte Carlo and estimation.
//! - [`witness`]: LHS bound, `r*` calibration, tomography, bootstrap, CHSH.
//! - [`cli`]: the `qrs` command-line front end.
//!
//! Basis convention shared by every module: the computational basis is the
//! `σ_3` eigenbasis (`|0⟩` has `σ_3 = +1`), two-qubit operators are ordered
//! `first ⊗ second`, and `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.

pub mod cli;
pub mod error;
pub mod game;
pub mod qmath;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
pub use game::{
    canonical_game, estimate_payoff, exact_payoff, joint_probabilities, lhs_best_deterministic,
    partial_bsm_povm, simulate_runs, singlet_projector_bc, GameSpec, JointDistribution,
    LhsStrategy, PayoffEstimate, Povm, Strategy, TallyTable,
};
pub use qmath::{BlochVector, ComplexMatrix};
pub use states::{BellIndex, RefereeEnsemble, RefereeKey, Sign};
pub use witness::{CalibrationReport, CountRecord, QubitChannel, Regime};
