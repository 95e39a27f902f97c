// Calibrating `r` from the referee's (imperfect) preparations.
//
// ```text
// cargo run --example calibrate_referee
// ```

use qrs::qmath::BlochVector;
use qrs::states::Rotation3;
use qrs::witness::{lhs_bound, rstar_closed_form, rstar_oracle, rstar_printed};
use qrs::{CalibrationReport, RefereeEnsemble, RefereeKey};

/// Every preparation tilted by `deg` degrees toward `(1, 1, 1)`.
fn tilted(deg: f64) -> qrs::Result<RefereeEnsemble> {
    let (s, c) = deg.to_radians().sin_cos();
    let u = 1.0 / 3f64.sqrt();
    RefereeEnsemble::from_entries(RefereeKey::all().map(|k| {
        let v = k.ideal_direction().map(|x| c * x + s * u);
        (k, BlochVector::direction(v).expect("nonzero"))
    }))
}

pub fn run_example() -> qrs::Result<()> {
    let ideal = RefereeEnsemble::ideal();
    let cases = [
        ("ideal", ideal.clone()),
        ("depolarized 0.95", ideal.depolarize(0.95)?),
        ("rotated", ideal.rotate(&Rotation3::about_axis([1.0, 2.0, 0.5], 0.7)?)?),
        ("tilted 8 deg", tilted(8.0)?),
    ];

    println!("{:<18} {:>10} {:>12} {:>10}", "ensemble", "r* oracle", "closed form", "printed");
    for (name, e) in &cases {
        let printed = rstar_printed(e).map(|x| format!("{x:.6}")).unwrap_or_else(|_| "n/a".into());
        println!(
            "{name:<18} {:>10.6} {:>12.6} {:>10}",
            rstar_oracle(e)?,
            rstar_closed_form(e)?,
            printed
        );
    }

    let e = tilted(8.0)?;
    let r_star = rstar_oracle(&e)?;
    println!("\nLHS bound around r* = {r_star:.6} for the tilted ensemble:");
    for dr in [-0.05, -0.01, 0.0, 0.01, 0.05] {
        println!("  r = {:.4}  bound = {:+.6}", r_star + dr, lhs_bound(&e, r_star + dr)?);
    }

    let report = CalibrationReport::build(&e, &[], None)?;
    println!("\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
