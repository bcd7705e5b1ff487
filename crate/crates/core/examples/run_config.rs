// Driving the command layer from a `key = value` configuration in SI units.

use kaon_decay::cli::{cmd_compare, cmd_density, RunConfig};

const CONFIG: &str = "
# tabulate the singlet in seconds
units = si_seconds
mode = joint
state = singlet
channel = 12
approach = hybrid, time-operator
grid = 0:2e-10:3
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::resolve(Some(CONFIG), &[])?;
    print!("{}", cmd_density(&cfg)?);

    let cfg = RunConfig::resolve(Some(CONFIG), &[("state".into(), "beta:0".into()), ("approach".into(), "all".into())])?;
    print!("{}", cmd_compare(&cfg)?);

    let text = cfg.to_text();
    let back = RunConfig::resolve(Some(&text), &[])?;
    println!("written config reads back unchanged: {}", back == cfg);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
