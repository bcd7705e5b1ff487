// Finite-difference derivatives of survival probabilities as an independent oracle.

use kaon_decay::numerics::{finite_diff_mixed, richardson_mixed, ridders_mixed, DEFAULT_STEP};
use kaon_decay::{joint_density, joint_survival, ApproachKind, EntangledStateSpec, KaonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();
    let state = EntangledStateSpec::singlet();
    let channel = "11".parse()?;
    let norm = state.norm_sq(&p)?;
    let survival = |a: f64, b: f64| joint_survival(&state, &p, channel, a, b).map(|v| v * norm).unwrap_or(f64::NAN);
    let exact = joint_density(ApproachKind::StandardNew, &state, &p, channel)?;

    for (tl, tr) in [(1.0, 2.0), (0.0, 0.0), (0.3, 4.0)] {
        let e = exact.eval_unnormalized(tl, tr);
        let fd = finite_diff_mixed(survival, tl, tr, DEFAULT_STEP);
        let rich = richardson_mixed(survival, tl, tr, 1e-2);
        let ridders = ridders_mixed(survival, tl, tr, 0.1);
        println!(
            "({tl}, {tr}): exact {e:+.10e}  fd {:.1e}  richardson {:.1e}  ridders {:.1e} (estimate {:.1e})",
            (fd - e).abs() / e.abs(),
            (rich - e).abs() / e.abs(),
            (ridders.value - e).abs() / e.abs(),
            ridders.error / e.abs()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
