// Default kaon parameters, their provenance and the CP mixing matrix.

use kaon_decay::cli::{cmd_constants, OutputFormat};
use kaon_decay::model::{mixing_matrix, DecayMode};
use kaon_decay::{CpSector, KaonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", cmd_constants(OutputFormat::Csv));

    let p = KaonParams::default();
    println!("internal units: Gamma_S = {}, Gamma_L = {:.6e}, delta_m = {}", p.gamma_s, p.gamma_l, p.delta_m);
    println!("epsilon = {:.6e} {:+.6e}i", p.epsilon.re, p.epsilon.im);

    let m = mixing_matrix(&p)?;
    for sector in CpSector::ALL {
        for mode in DecayMode::ALL {
            let z = m.get(sector, mode);
            println!("<K_{}|K_{:?}> = {:.8} {:+.8}i", sector.label(), mode, z.re, z.im);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
