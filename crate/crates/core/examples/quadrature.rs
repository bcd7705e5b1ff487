// Adaptive quadrature on the half line and the quadrant, checked against closed forms.

use kaon_decay::numerics::{quad_semiinf_1d, quad_semiinf_2d};
use kaon_decay::single::{density_single_unnormalized, normalization_single};
use kaon_decay::{joint_densities, ApproachKind, DensityOptions, EntangledStateSpec, KaonParams, SuperpositionSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = quad_semiinf_1d(|t| (-0.8 * t).exp() * (2.0 * t).cos(), 0.8)?;
    println!("int e^(-0.8t) cos 2t = {:.15} (exact {:.15}), {} evaluations", r.value, 0.8 / (0.64 + 4.0), r.evaluations);

    let spec = SuperpositionSpec::balanced(0.5, 1.0, 1.7253e-3)?;
    let n = normalization_single(ApproachKind::StandardNew, &spec)?;
    let r = quad_semiinf_1d(|t| n * density_single_unnormalized(ApproachKind::StandardNew, &spec, t), spec.gamma2)?;
    println!("normalized single-particle density integrates to {:.12}", r.value);

    let p = KaonParams::default();
    let all = joint_densities(ApproachKind::StandardNew, &EntangledStateSpec::singlet(), &p, &DensityOptions::default())?;
    let mut quad = 0.0;
    let mut closed = 0.0;
    for d in all.iter().filter(|d| !d.is_zero()) {
        quad += quad_semiinf_2d(|a, b| d.eval(a, b), d.carrier.slowest_rates())?.value;
        closed += d.channel_mass()?;
    }
    println!("singlet, four channels: quadrature {quad:.12}, closed form {closed:.12}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
