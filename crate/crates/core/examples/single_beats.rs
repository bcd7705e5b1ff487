// Quantum beats of one particle in a superposition of two decaying levels.

use kaon_decay::single::{beat_polar, survival_single};
use kaon_decay::{density_single, ApproachKind, SuperpositionSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SuperpositionSpec::balanced(0.5, 1.0, 1.7253e-3)?;
    let polar = beat_polar(&spec);
    println!("beat polar form: R = {:.6}, theta = {:.6} rad", polar.r, polar.theta);

    let approaches = [ApproachKind::StandardNew, ApproachKind::Hybrid, ApproachKind::TimeOperator];
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "t", "standard", "hybrid", "time-op", "survival");
    for k in 0..=10 {
        let t = k as f64;
        let mut row = format!("{t:>6.1}");
        for a in approaches {
            let v = density_single(a, &spec, t)?;
            row.push_str(&format!(" {:>12.6}", v.value));
        }
        row.push_str(&format!(" {:>10.6}", survival_single(&spec, t)?));
        println!("{row}");
    }

    // equal rates and no splitting: every prescription is the same exponential
    let flat = SuperpositionSpec::balanced(0.0, 0.8, 0.8)?;
    let v: Vec<f64> = approaches
        .iter()
        .map(|a| density_single(*a, &flat, 1.5).map(|d| d.value))
        .collect::<Result<_, _>>()?;
    println!("equal rates at t = 1.5: {v:?}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
