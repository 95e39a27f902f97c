//! Shared generators for the integration tests.
#![allow(dead_code)]

use qrs::game::{sign_triples, LhsStrategy, Povm, SignTriple};
use qrs::qmath::{eig_hermitian, BlochVector, ComplexMatrix, C64};
use qrs::{RefereeEnsemble, RefereeKey, Strategy};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian3<R: Rng>(rng: &mut R) -> [f64; 3] {
    [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)]
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = gaussian3(rng);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

/// Ideal directions jittered by `spread` and shrunk to a random length in
/// `[min_len, 1]`.
pub fn perturbed_ensemble<R: Rng>(rng: &mut R, spread: f64, min_len: f64) -> RefereeEnsemble {
    let entries = RefereeKey::all().map(|k| {
        let d = k.ideal_direction();
        let g = gaussian3(rng);
        let v = [d[0] + spread * g[0], d[1] + spread * g[1], d[2] + spread * g[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let len = rng.random_range(min_len..=1.0);
        (k, BlochVector::from_array(v.map(|x| x * len / n)).unwrap())
    });
    RefereeEnsemble::from_entries(entries).unwrap()
}

/// Any six Bloch vectors inside the ball.
pub fn random_ensemble<R: Rng>(rng: &mut R) -> RefereeEnsemble {
    let entries = RefereeKey::all().map(|k| {
        let len: f64 = rng.random::<f64>().cbrt();
        (k, BlochVector::from_array(unit_vector(rng).map(|x| x * len)).unwrap())
    });
    RefereeEnsemble::from_entries(entries).unwrap()
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::from_entries(dim, entries).unwrap()
}

/// A random effect `0 ≤ E ≤ 1` on `B ⊗ C`.
pub fn random_effect<R: Rng>(rng: &mut R) -> Povm {
    let g = random_complex_matrix(rng, 4);
    let h = &g * &g.adjoint();
    let top = eig_hermitian(&h).unwrap()[0];
    let u: f64 = rng.random();
    Povm::new(h.scale(u / top)).unwrap()
}

pub fn random_triple<R: Rng>(rng: &mut R) -> SignTriple {
    sign_triples()[rng.random_range(0..8)]
}

pub fn random_lhs<R: Rng>(rng: &mut R) -> LhsStrategy {
    let len: f64 = rng.random();
    let hidden = BlochVector::from_array(unit_vector(rng).map(|x| x * len.sqrt())).unwrap();
    if rng.random_bool(0.3) {
        LhsStrategy::aligned(random_triple(rng), BlochVector::from_array(unit_vector(rng)).unwrap())
            .unwrap()
    } else {
        LhsStrategy { alice: random_triple(rng), hidden_state: hidden, bob: random_effect(rng) }
    }
}

/// A deterministic LHS strategy three times out of four, otherwise a
/// mixture of two to four of them.
pub fn random_local_strategy<R: Rng>(rng: &mut R) -> Strategy {
    if rng.random_bool(0.75) {
        return Strategy::LhsDeterministic(random_lhs(rng));
    }
    let m = rng.random_range(2..=4);
    let raw: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    Strategy::custom_local(raw.iter().map(|w| (w / total, random_lhs(rng))).collect()).unwrap()
}

/// `n` nearly uniform points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}
