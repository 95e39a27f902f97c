// Exact payoff of the honest Werner strategy against the ideal referee,
// with and without a lossy Bell-state measurement.
//
// ```text
// cargo run --example werner_payoff
// ```

use qrs::game::{canonical_game, exact_payoff, partial_bsm_povm};
use qrs::states::werner_state;
use qrs::witness::regime_classify;
use qrs::{RefereeEnsemble, Strategy};

pub fn run_example() -> qrs::Result<()> {
    let ideal = RefereeEnsemble::ideal();
    let r = 1.081;
    let spec = canonical_game(r)?;

    println!("r = {r}");
    println!("{:>6} {:>12} {:>12} {:>12}  regime", "W", "P(V=1)", "3W-sqrt3 r", "P(V=0.89)");
    for i in 0..=10 {
        let w = 0.5 + 0.05 * i as f64;
        let perfect = Strategy::honest(werner_state(w)?, partial_bsm_povm(1.0)?)?;
        let lossy = Strategy::honest(werner_state(w)?, partial_bsm_povm(0.89)?)?;
        println!(
            "{w:>6.3} {:>12.6} {:>12.6} {:>12.6}  {}",
            exact_payoff(&spec, &perfect, &ideal)?,
            3.0 * w - 3f64.sqrt() * r,
            exact_payoff(&spec, &lossy, &ideal)?,
            regime_classify(w, r),
        );
    }

    let w = 0.698;
    let honest = Strategy::honest(werner_state(w)?, partial_bsm_povm(1.0)?)?;
    println!("\nP(W = {w}, r = {r}) = {:.4}", exact_payoff(&spec, &honest, &ideal)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
