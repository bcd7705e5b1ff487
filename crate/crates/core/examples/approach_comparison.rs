// Which prescriptions agree in shape: alpha-class states versus beta-class states.

use std::f64::consts::FRAC_PI_2;

use kaon_decay::{approach_comparison, DensityOptions, EntangledStateSpec, GridSpec, KaonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();
    let grid = GridSpec::uniform(10.0, 21)?;
    let options = DensityOptions::default();
    let cases = [
        (EntangledStateSpec::Alpha(0.0), "11"),
        (EntangledStateSpec::Alpha(FRAC_PI_2), "12"),
        (EntangledStateSpec::Beta(0.0), "12"),
        (EntangledStateSpec::Beta(FRAC_PI_2), "12"),
    ];
    for (state, channel) in cases {
        let cmp = approach_comparison(&state, &p, channel.parse()?, &grid, &options)?;
        println!("{state}, channel {channel}");
        for pair in &cmp.pairs {
            println!(
                "  {:<14} vs {:<14} max deviation {:.3e}  {}",
                pair.first.name(),
                pair.second.name(),
                pair.max_relative_deviation,
                pair.label()
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
