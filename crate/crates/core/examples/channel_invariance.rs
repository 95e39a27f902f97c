// Noise on the referee's qubits is equivalent to noise in Bob's measurement.
//
// ```text
// cargo run --example channel_invariance
// ```

use qrs::game::{canonical_game, exact_payoff, singlet_projector_bc};
use qrs::qmath::{pauli, ComplexMatrix};
use qrs::states::werner_state;
use qrs::witness::channel_covariance_check;
use qrs::{QubitChannel, RefereeEnsemble, Strategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> qrs::Result<()> {
    let e = RefereeEnsemble::ideal();
    let s = Strategy::honest(werner_state(1.0)?, singlet_projector_bc())?;
    let spec = canonical_game(1.0)?;

    let half_turn = (0.3f64).sin_cos();
    let u = &ComplexMatrix::identity(2)?.scale(half_turn.1)
        - &pauli(2)?.scale_complex(qrs::qmath::C64::new(0.0, half_turn.0));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let channels = [
        ("identity", QubitChannel::identity()),
        ("depolarizing 0.3", QubitChannel::depolarizing(0.3)?),
        ("rotation about y", QubitChannel::unitary(u)?),
        ("random CP map", QubitChannel::random(&mut rng)?),
    ];

    for (name, channel) in &channels {
        let noisy = e.iter().map(|(k, _)| {
            let out = channel.apply(&qrs::states::referee_state(&e, k)?);
            Ok((k, qrs::BlochVector::from_array(out.bloch_vector()?)?))
        });
        let noisy = RefereeEnsemble::from_entries(noisy.collect::<qrs::Result<Vec<_>>>()?)?;
        println!(
            "{name:<18} covariance holds: {:<5}  payoff through channel {:+.6}",
            channel_covariance_check(&e, channel, &s)?,
            exact_payoff(&spec, &s, &noisy)?,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qrs::Result<()> {
    run_example()
}
