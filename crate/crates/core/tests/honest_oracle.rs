//! Honest joint probabilities against a direct trace over `A ⊗ B ⊗ C`.

mod common;

use proptest::prelude::*;
use qrs::game::{joint_probabilities, partial_bsm_povm, singlet_projector_bc, Povm};
use qrs::qmath::{pauli, ComplexMatrix, C64};
use qrs::states::{bell_state, referee_state, werner_state};
use qrs::{BellIndex, RefereeEnsemble, RefereeKey, Sign, Strategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let d = da * db;
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + j * db + l] = a[i * da + j] * b[k * db + l];
                }
            }
        }
    }
    out
}

fn trace_of_product(x: &[C64], y: &[C64], d: usize) -> C64 {
    let mut t = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            t += x[i * d + k] * y[k * d + i];
        }
    }
    t
}

/// `Tr[(Π_a(j) ⊗ B_1)(ρ_AB ⊗ ω_C)]` with every factor written out in dim 8.
fn brute_force(rho_ab: &ComplexMatrix, b1: &ComplexMatrix, omega: &ComplexMatrix, j: u8, a: Sign) -> f64 {
    let sigma = pauli(j).unwrap();
    let id = ComplexMatrix::identity(2).unwrap();
    let proj = (&id + &sigma.scale(a.value())).scale(0.5);
    let op = kron(proj.entries(), 2, b1.entries(), 4);
    let state = kron(rho_ab.entries(), 4, omega.entries(), 2);
    let p = trace_of_product(&op, &state, 8);
    assert!(p.im.abs() < 1e-12);
    p.re
}

fn random_density4(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = common::random_complex_matrix(rng, 4);
    let h = &g * &g.adjoint();
    let tr = h.trace().re;
    h.scale(1.0 / tr)
}

fn check(rho: &ComplexMatrix, bob: &Povm, e: &RefereeEnsemble) {
    let strategy = Strategy::honest(rho.clone(), bob.clone()).unwrap();
    for key in RefereeKey::all() {
        let d = joint_probabilities(&strategy, e, key).unwrap();
        let omega = referee_state(e, key).unwrap();
        for a in [Sign::Plus, Sign::Minus] {
            let want = brute_force(rho, bob.b1(), &omega, key.j(), a);
            let got = d.prob(a, 1);
            assert!((got - want).abs() < 1e-12, "{key} a={a}: {got} vs {want}");
            let want0 = brute_force(rho, &bob.b0(), &omega, key.j(), a);
            assert!((d.prob(a, 0) - want0).abs() < 1e-12);
        }
    }
}

#[test]
fn singlet_with_ideal_referee() {
    let rho = bell_state(BellIndex::PsiMinus);
    let bob = singlet_projector_bc();
    let e = RefereeEnsemble::ideal();
    check(&rho, &bob, &e);
    let key = RefereeKey::new(3, Sign::Plus).unwrap();
    let omega = referee_state(&e, key).unwrap();
    assert!((brute_force(&rho, bob.b1(), &omega, 3, Sign::Plus) - 0.25).abs() < 1e-12);
    assert!(brute_force(&rho, bob.b1(), &omega, 3, Sign::Minus).abs() < 1e-12);
}

#[test]
fn werner_grid_with_partial_bsm() {
    let e = RefereeEnsemble::ideal();
    for i in 0..=10 {
        for v in [0.0, 0.5, 0.89, 1.0] {
            check(&werner_state(i as f64 / 10.0).unwrap(), &partial_bsm_povm(v).unwrap(), &e);
        }
    }
}

#[test]
fn every_bell_state() {
    let e = RefereeEnsemble::ideal();
    for idx in BellIndex::ALL {
        check(&bell_state(idx), &singlet_projector_bc(), &e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_states_effects_and_ensembles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density4(&mut rng);
        let bob = common::random_effect(&mut rng);
        let e = common::random_ensemble(&mut rng);
        check(&rho, &bob, &e);
    }
}
