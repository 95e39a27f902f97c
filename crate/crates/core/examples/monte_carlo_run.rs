// Finite-statistics runs of the game and the payoff estimator.
//
// ```text
// cargo run --example monte_carlo_run
// ```

use qrs::game::{canonical_game, estimate_payoff, exact_payoff, partial_bsm_povm, simulate_runs};
use qrs::states::werner_state;
use qrs::{RefereeEnsemble, Strategy, TallyTable};

pub fn run_example() -> qrs::Result<()> {
    let ideal = RefereeEnsemble::ideal();
    let spec = canonical_game(1.081)?;

    for (w, v) in [(0.98, 1.0), (0.698, 1.0), (0.698, 0.89)] {
        let s = Strategy::honest(werner_state(w)?, partial_bsm_povm(v)?)?;
        let exact = exact_payoff(&spec, &s, &ideal)?;
        println!("W = {w}, V = {v}: exact {exact:+.5}");
        for n in [1_000, 10_000, 100_000] {
            let est = estimate_payoff(&spec, &simulate_runs(&spec, &s, &ideal, n, 7)?)?;
            println!("  n = {n:>6} per setting: {:+.5} +- {:.5}", est.value, est.stderr);
        }
    }

    let s = Strategy::honest(werner_state(0.698)?, partial_bsm_povm(1.0)?)?;
    let tally = simulate_runs(&spec, &s, &ideal, 5_000, 1)?;
    let csv = tally.to_csv_string()?;
    println!("\ntally for 5000 runs per setting:\n{csv}");
    let reread = TallyTable::from_csv_str(&csv)?;
    assert_eq!(reread, tally);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
