// Joint decay-time densities of the singlet pair in the four CP channels.

use kaon_decay::{joint_densities, ApproachKind, DensityOptions, EntangledStateSpec, KaonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();
    let singlet = EntangledStateSpec::singlet();
    for approach in ApproachKind::ALL {
        let all = joint_densities(approach, &singlet, &p, &DensityOptions::default())?;
        println!("{approach}:");
        let mut total = 0.0;
        for d in &all {
            let mass = d.channel_mass()?;
            total += mass;
            println!(
                "  channel {}  mass {:.6e}  p(1,1) = {:+.4e}  p(1,2) = {:+.4e}  negative: {}",
                d.channel,
                mass,
                d.eval(1.0, 1.0),
                d.eval(1.0, 2.0),
                d.negativity.is_present()
            );
        }
        println!("  total mass {total:.12}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
