// Leading-order expansions in epsilon set against the exact engine.

use kaon_decay::leading::{leading_order_density, StateClass};
use kaon_decay::{joint_density, ApproachKind, EntangledStateSpec, KaonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();
    let cases = [
        (ApproachKind::StandardNew, StateClass::AlphaClass(0.0), EntangledStateSpec::singlet(), "11"),
        (ApproachKind::Hybrid, StateClass::AlphaClass(0.0), EntangledStateSpec::singlet(), "12"),
        (ApproachKind::Hybrid, StateClass::BetaClass(0.0), EntangledStateSpec::Beta(0.0), "12"),
        (ApproachKind::TimeOperator, StateClass::BetaClass(0.0), EntangledStateSpec::Beta(0.0), "12"),
    ];
    for (approach, class, state, channel) in cases {
        let exact = joint_density(approach, &state, &p, channel.parse()?)?;
        print!("{approach} {state} ch {channel}: expansion/exact =");
        for (tl, tr) in [(0.5, 1.0), (1.0, 2.0), (3.0, 0.2)] {
            let lo = leading_order_density(approach, class, channel.parse()?, &p, tl, tr)?;
            print!(" {:.6}", lo / exact.eval_unnormalized(tl, tr));
        }
        println!();
    }
    let origin = leading_order_density(ApproachKind::StandardNew, StateClass::AlphaClass(0.0), "11".parse()?, &p, 0.0, 0.0)?;
    let exact = joint_density(ApproachKind::StandardNew, &EntangledStateSpec::singlet(), &p, "11".parse()?)?;
    println!("standard-new singlet 11 at the origin: expansion {origin:.6e}, exact {:.6e}", exact.eval_unnormalized(0.0, 0.0));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
