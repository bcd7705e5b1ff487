use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kaon_decay::cli::{self, CliError, RunConfig, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "kaon-decay", version, about = "Decay-time densities of single and entangled neutral kaons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the default parameter set and where each value comes from.
    Constants(Keys),
    /// Tabulate densities on a grid.
    Density(Keys),
    /// Compare the shapes of the prescriptions pairwise.
    Compare(Keys),
    /// Draw events and write them with a JSON sidecar.
    Sample(Keys),
    /// KL divergences, sample size and optional goodness of fit for two models.
    Discriminate(Keys),
}

/// Every config key, settable as a flag of the same name.
#[derive(Args, Default)]
struct Keys {
    /// Config file (`key = value` lines); defaults to $KAON_DECAY_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    units: Option<String>,
    #[arg(long)]
    gamma_s: Option<String>,
    #[arg(long)]
    gamma_l: Option<String>,
    #[arg(long)]
    delta_m: Option<String>,
    #[arg(long)]
    epsilon_abs: Option<String>,
    #[arg(long)]
    epsilon_arg_deg: Option<String>,
    #[arg(long)]
    cp_rate_1: Option<String>,
    #[arg(long)]
    cp_rate_2: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    gamma1: Option<String>,
    #[arg(long)]
    gamma2: Option<String>,
    #[arg(long)]
    delta_e: Option<String>,
    #[arg(long)]
    alpha1: Option<String>,
    #[arg(long)]
    alpha2: Option<String>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    approach: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    events: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl Keys {
    fn overrides(&self) -> Vec<(String, String)> {
        let fields = [
            ("units", &self.units),
            ("gamma_s", &self.gamma_s),
            ("gamma_l", &self.gamma_l),
            ("delta_m", &self.delta_m),
            ("epsilon_abs", &self.epsilon_abs),
            ("epsilon_arg_deg", &self.epsilon_arg_deg),
            ("cp_rate_1", &self.cp_rate_1),
            ("cp_rate_2", &self.cp_rate_2),
            ("mode", &self.mode),
            ("gamma1", &self.gamma1),
            ("gamma2", &self.gamma2),
            ("delta_e", &self.delta_e),
            ("alpha1", &self.alpha1),
            ("alpha2", &self.alpha2),
            ("state", &self.state),
            ("channel", &self.channel),
            ("approach", &self.approach),
            ("grid", &self.grid),
            ("bins", &self.bins),
            ("seed", &self.seed),
            ("output", &self.output),
            ("normalization", &self.normalization),
            ("n", &self.n),
            ("z", &self.z),
            ("p", &self.p),
            ("q", &self.q),
            ("events", &self.events),
            ("out", &self.out),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let path = self.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let text = match &path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::Io {
                path: p.clone(),
                source: e,
            })?),
            None => None,
        };
        RunConfig::resolve(text.as_deref(), &self.overrides())
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Constants(k) => {
            let cfg = k.resolve()?;
            Ok(cli::cmd_constants(cfg.output))
        }
        Command::Density(k) => cli::cmd_density(&k.resolve()?),
        Command::Compare(k) => cli::cmd_compare(&k.resolve()?),
        Command::Sample(k) => {
            let cfg = k.resolve()?;
            if cfg.out.is_some() {
                let (csv, side) = cli::write_sample(&cfg)?;
                Ok(format!("wrote {} and {}\n", csv.display(), side.display()))
            } else {
                Ok(cli::cmd_sample(&cfg)?.csv)
            }
        }
        Command::Discriminate(k) => cli::cmd_discriminate(&k.resolve()?),
    }
}

fn main() -> ExitCode {
    // `--delta_e` and `--delta-e` name the same flag
    let args = std::env::args().map(|a| match a.strip_prefix("--") {
        Some(rest) => {
            let (name, value) = rest.split_once('=').map_or((rest, None), |(n, v)| (n, Some(v)));
            let name = name.replace('_', "-");
            match value {
                Some(v) => format!("--{name}={v}"),
                None => format!("--{name}"),
            }
        }
        None => a,
    });
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
