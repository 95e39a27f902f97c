// Where Werner states sit relative to the game threshold and Bell bounds.
//
// ```text
// cargo run --example bell_regimes
// ```

use qrs::witness::{chsh_werner, regime_classify, BELL_LOCAL_BOUND, CHSH_BOUND, VERTESI_BOUND};

pub fn run_example() -> qrs::Result<()> {
    let r = 1.081;
    println!(
        "thresholds: game r/sqrt3 = {:.4}, Bell-local {BELL_LOCAL_BOUND}, Vertesi {VERTESI_BOUND}, CHSH {:.4}",
        r / 3f64.sqrt(),
        CHSH_BOUND
    );
    let mut last = None;
    for i in 0..=100 {
        let w = i as f64 / 100.0;
        let regime = regime_classify(w, r);
        if last != Some(regime) {
            println!("W >= {w:.2}: {regime} (CHSH {:.4})", chsh_werner(w)?);
            last = Some(regime);
        }
    }
    let w = 0.698;
    println!("\nW = {w}: CHSH {:.4}, {}", chsh_werner(w)?, regime_classify(w, r));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
