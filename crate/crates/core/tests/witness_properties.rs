mod common;

use proptest::prelude::*;
use qrs::game::{canonical_game, lhs_best_deterministic};
use qrs::qmath::BlochVector;
use qrs::states::Rotation3;
use qrs::witness::{
    a_vector, b_vector, bootstrap_calibration, chsh_werner, lhs_bound, lhs_bound_argmax,
    rstar_closed_form, rstar_oracle, CountRecord,
};
use qrs::{RefereeEnsemble, RefereeKey};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// Every preparation tilted by `deg` degrees toward `(1, 1, 1)`.
fn skewed(deg: f64) -> RefereeEnsemble {
    let d = deg.to_radians();
    let u = 1.0 / sqrt3();
    RefereeEnsemble::from_entries(RefereeKey::all().map(|k| {
        let e = k.ideal_direction();
        let v = e.map(|x| d.cos() * x + d.sin() * u);
        (k, BlochVector::direction(v).unwrap())
    }))
    .unwrap()
}

#[test]
fn depolarized_ideal_calibrates_to_eta() {
    for i in 1..=10 {
        let eta = i as f64 / 10.0;
        let e = RefereeEnsemble::ideal().depolarize(eta).unwrap();
        assert!((rstar_oracle(&e).unwrap() - eta).abs() < 1e-9, "eta = {eta}");
        assert!((rstar_closed_form(&e).unwrap() - eta).abs() < 1e-9);
    }
}

#[test]
fn soundness_boundary_is_sharp() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for i in 0..50 {
        let e = if i % 2 == 0 {
            common::random_ensemble(&mut rng)
        } else {
            common::perturbed_ensemble(&mut rng, 0.2, 0.6)
        };
        let r = rstar_oracle(&e).unwrap();
        assert!(lhs_bound(&e, r + 1e-6).unwrap() <= 1e-9);
        if r > 1e-3 {
            assert!(lhs_bound(&e, r - 1e-3).unwrap() > 0.0);
        }
        assert!((rstar_closed_form(&e).unwrap() - r).abs() < 1e-9);
    }
}

#[test]
fn skewed_fixture_sits_near_one_point_zero_eight() {
    let r = rstar_oracle(&skewed(8.0)).unwrap();
    assert!((1.07..1.09).contains(&r), "r* = {r}");
}

#[test]
fn best_deterministic_strategy_attains_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let e = common::perturbed_ensemble(&mut rng, 0.2, 0.7);
        let r = rng.random_range(0.0..2.0);
        let best = lhs_best_deterministic(&canonical_game(r).unwrap(), &e).unwrap();
        assert!((best.payoff - lhs_bound(&e, r).unwrap()).abs() < 1e-10);
    }
    let ideal = RefereeEnsemble::ideal();
    let at = |r: f64| lhs_best_deterministic(&canonical_game(r).unwrap(), &ideal).unwrap().payoff;
    assert!(at(1.0).abs() < 1e-12);
    assert!((at(2.0) + 2.0 * sqrt3()).abs() < 1e-12);
    assert!((at(0.5) - sqrt3()).abs() < 1e-12);
}

#[test]
fn chsh_matches_closed_form_on_grid() {
    for i in 0..=100 {
        let w = i as f64 / 100.0;
        let s = chsh_werner(w).unwrap();
        assert!((s - 2.0 * 2f64.sqrt() * w).abs() < 1e-10);
    }
    assert!((chsh_werner(1.0 / 2f64.sqrt()).unwrap() - 2.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn calibration_is_rotation_invariant(seed in any::<u64>(), angle in -3.2..3.2f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::perturbed_ensemble(&mut rng, 0.2, 0.7);
        let rot = Rotation3::about_axis(common::unit_vector(&mut rng), angle).unwrap();
        let turned = e.rotate(&rot).unwrap();
        prop_assert!((rstar_oracle(&turned).unwrap() - rstar_oracle(&e).unwrap()).abs() < 1e-9);
        let ideal_turned = RefereeEnsemble::ideal().rotate(&rot).unwrap();
        prop_assert!((rstar_oracle(&ideal_turned).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bound_slope_follows_the_optimizing_direction(seed in any::<u64>(), r in 0.05..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::perturbed_ensemble(&mut rng, 0.3, 0.6);
        let h = 1e-6;
        let (f0, a) = lhs_bound_argmax(&e, r).unwrap();
        let f1 = lhs_bound(&e, r + h).unwrap();
        prop_assert!(f1 < f0);
        let av = a_vector(&e, a);
        let b = b_vector(&e);
        let v = [av[0] - r * b[0], av[1] - r * b[1], av[2] - r * b[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        prop_assume!(n > 1e-3);
        let along = (b[0] * v[0] + b[1] * v[1] + b[2] * v[2]) / n;
        let want = -(2.0 * sqrt3() + along);
        let got = (f1 - f0) / h;
        prop_assert!(((got - want) / want).abs() < 0.1, "slope {} vs {}", got, want);
    }
}

#[test]
fn bootstrap_concentrates_on_ideal_counts() {
    let rec = CountRecord::from_ensemble(&RefereeEnsemble::ideal(), 1_000_000);
    let s = bootstrap_calibration(&rec, 200, 1).unwrap();
    assert_eq!(s.failures, 0);
    assert!((s.mean - 1.0).abs() < 0.01, "mean {}", s.mean);
    assert!(s.std < 0.01, "std {}", s.std);
}

#[test]
fn bootstrap_on_balanced_counts_stays_near_zero() {
    let flat = RefereeEnsemble::ideal().depolarize(0.0).unwrap();
    let s = bootstrap_calibration(&CountRecord::from_ensemble(&flat, 1_000_000), 100, 2).unwrap();
    assert!(s.mean < 0.01 && s.std < 0.01, "{s:?}");
}

#[test]
fn bootstrap_spread_scales_with_counts() {
    let e = skewed(8.0);
    let stds: Vec<f64> = [1_000, 10_000, 100_000]
        .into_iter()
        .map(|total| bootstrap_calibration(&CountRecord::from_ensemble(&e, total), 300, 7).unwrap().std)
        .collect();
    assert!((0.002..0.05).contains(&stds[1]), "std at 1e4 = {}", stds[1]);
    for pair in stds.windows(2) {
        let ratio = pair[0] / pair[1];
        let ideal = 10f64.sqrt();
        assert!(ratio > ideal / 2.0 && ratio < ideal * 2.0, "ratio {ratio} from {stds:?}");
    }
    let again = bootstrap_calibration(&CountRecord::from_ensemble(&e, 10_000), 300, 7).unwrap();
    assert_eq!(again.std, stds[1]);
}
