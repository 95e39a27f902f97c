//! Every cargo example must run to completion.

mod werner_payoff {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/werner_payoff.rs"));
}

#[test]
fn werner_payoff_runs() {
    werner_payoff::run_example().expect("werner_payoff example should run");
}

mod calibrate_referee {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/calibrate_referee.rs"));
}

#[test]
fn calibrate_referee_runs() {
    calibrate_referee::run_example().expect("calibrate_referee example should run");
}

mod lhs_adversary {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lhs_adversary.rs"));
}

#[test]
fn lhs_adversary_runs() {
    lhs_adversary::run_example().expect("lhs_adversary example should run");
}

mod monte_carlo_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monte_carlo_run.rs"));
}

#[test]
fn monte_carlo_run_runs() {
    monte_carlo_run::run_example().expect("monte_carlo_run example should run");
}

mod tomography_bootstrap {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tomography_bootstrap.rs"));
}

#[test]
fn tomography_bootstrap_runs() {
    tomography_bootstrap::run_example().expect("tomography_bootstrap example should run");
}

mod bell_regimes {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bell_regimes.rs"));
}

#[test]
fn bell_regimes_runs() {
    bell_regimes::run_example().expect("bell_regimes example should run");
}

mod channel_invariance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/channel_invariance.rs"));
}

#[test]
fn channel_invariance_runs() {
    channel_invariance::run_example().expect("channel_invariance example should run");
}
