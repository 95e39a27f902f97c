// From referee tomography counts to `r*` with a Poisson bootstrap error.
//
// ```text
// cargo run --example tomography_bootstrap
// ```

use qrs::witness::{average_fidelity, bootstrap_calibration, ensemble_from_counts, rstar_oracle};
use qrs::{CountRecord, RefereeEnsemble};

pub fn run_example() -> qrs::Result<()> {
    let truth = RefereeEnsemble::ideal().depolarize(0.974)?;
    println!("true ensemble: ideal shrunk to 0.974, avg fidelity {:.4}", average_fidelity(&truth));

    for total in [1_000, 10_000, 100_000] {
        let counts = CountRecord::from_ensemble(&truth, total);
        let (measured, clipped) = ensemble_from_counts(&counts)?;
        let boot = bootstrap_calibration(&counts, 200, 11)?;
        println!(
            "{total:>7} shots/axis: r* = {:.5}, bootstrap {:.5} +- {:.5} ({} failed, {} clipped)",
            rstar_oracle(&measured)?,
            boot.mean,
            boot.std,
            boot.failures,
            clipped.len(),
        );
    }

    let csv = CountRecord::from_ensemble(&truth, 10).to_csv_string()?;
    println!("\ncount file format:\n{}", csv.lines().take(5).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
