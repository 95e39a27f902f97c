// A local-hidden-state cheater against a miscalibrated referee.
//
// The best deterministic strategy wins whenever `r < r*`; random local
// strategies never beat it.
//
// ```text
// cargo run --example lhs_adversary
// ```

use qrs::game::{canonical_game, exact_payoff, lhs_best_deterministic, LhsStrategy, Povm};
use qrs::qmath::{BlochVector, ComplexMatrix};
use qrs::witness::rstar_oracle;
use qrs::{RefereeEnsemble, Sign, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cheater(rng: &mut ChaCha8Rng) -> qrs::Result<Strategy> {
    let alice = [0; 3].map(|_| if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus });
    let v = [0; 3].map(|_| rng.random_range(-1.0..1.0));
    let Some(dir) = BlochVector::direction(v) else {
        return random_cheater(rng);
    };
    // Bob clicks when the referee's qubit looks like `dir`, with some slack.
    let slack = rng.random_range(0.0..0.5);
    let tau = ComplexMatrix::bloch_state(&dir).scale(1.0 - slack);
    let id = ComplexMatrix::identity(2)?;
    let effect = qrs::qmath::tensor(&id, &(&tau + &id.scale(slack / 2.0)))?;
    Ok(Strategy::LhsDeterministic(LhsStrategy { alice, hidden_state: dir, bob: Povm::new(effect)? }))
}

pub fn run_example() -> qrs::Result<()> {
    let e = RefereeEnsemble::ideal().depolarize(0.9)?;
    let r_star = rstar_oracle(&e)?;
    println!("referee ensemble: ideal shrunk to 0.9, r* = {r_star:.6}");

    for r in [0.5, 0.8, r_star, 1.0, 1.2] {
        let spec = canonical_game(r)?;
        let best = lhs_best_deterministic(&spec, &e)?;
        let answers: Vec<i8> = best.assignment.iter().map(|s| s.as_i8()).collect();
        println!(
            "r = {r:.3}: best LHS payoff {:+.6} with a = {answers:?}, hidden state {:?}",
            best.payoff,
            best.hidden_state.to_array().map(|x| (x * 1e4).round() / 1e4),
        );
    }

    let spec = canonical_game(r_star)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut top = f64::NEG_INFINITY;
    for _ in 0..2000 {
        top = top.max(exact_payoff(&spec, &random_cheater(&mut rng)?, &e)?);
    }
    println!("\nbest of 2000 random cheaters at r*: {top:+.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
