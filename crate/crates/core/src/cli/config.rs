//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::joint::{DensityOptions, GridSpec, NormalizationPolicy};
use crate::model::{ApproachKind, Channel, EntangledStateSpec};
use crate::params::{KaonParams, EPSILON_ABS, EPSILON_ARG_DEG, TAU_L_SECONDS, TAU_S_SECONDS};
use crate::single::SuperpositionSpec;

use super::CliError;

/// Environment variable naming a config file read when none is given.
pub const CONFIG_ENV: &str = "KAON_DECAY_CONFIG";

/// Every recognised key, in the order they are written out.
pub const KEYS: [&str; 28] = [
    "units",
    "gamma_s",
    "gamma_l",
    "delta_m",
    "epsilon_abs",
    "epsilon_arg_deg",
    "cp_rate_1",
    "cp_rate_2",
    "mode",
    "gamma1",
    "gamma2",
    "delta_e",
    "alpha1",
    "alpha2",
    "state",
    "channel",
    "approach",
    "grid",
    "bins",
    "seed",
    "output",
    "normalization",
    "n",
    "z",
    "p",
    "q",
    "events",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Rates in 1/s, times in s.
    SiSeconds,
    /// Rates in units of Γ_S, times in units of τ_S.
    TauSUnits,
}

impl Units {
    /// Seconds per time unit.
    pub fn time_unit(self) -> f64 {
        match self {
            Units::SiSeconds => TAU_S_SECONDS,
            Units::TauSUnits => 1.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Units::SiSeconds => "si_seconds",
            Units::TauSUnits => "tau_s_units",
        }
    }
}

impl FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "si_seconds" | "si" => Ok(Units::SiSeconds),
            "tau_s_units" | "tau_s" | "internal" => Ok(Units::TauSUnits),
            _ => Err(format!("expected si_seconds or tau_s_units, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A fully resolved run configuration. Rates, times and grids are in `units`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub gamma_s: f64,
    pub gamma_l: f64,
    pub delta_m: f64,
    pub epsilon_abs: f64,
    pub epsilon_arg_deg: f64,
    pub cp_rates: Option<[f64; 2]>,
    pub mode: Mode,
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta_e: f64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub state: EntangledStateSpec,
    pub channels: Vec<Channel>,
    pub approaches: Vec<ApproachKind>,
    pub grid: GridSpec,
    /// Bin edges for goodness-of-fit tests.
    pub bins: GridSpec,
    pub seed: u64,
    pub output: OutputFormat,
    pub normalization: NormalizationPolicy,
    /// Event count for `sample`.
    pub n: Option<usize>,
    /// Significance in sigmas for `discriminate`.
    pub z: f64,
    pub p: ApproachKind,
    pub q: ApproachKind,
    /// Event file tested by `discriminate`.
    pub events: Option<PathBuf>,
    /// Destination of `sample`.
    pub out: Option<PathBuf>,
}

/// Canonical form of a key: lower case, dashes as underscores.
pub fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").to_ascii_lowercase().replace('-', "_")
}

/// A value together with where it came from, for diagnostics.
#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: Option<usize>,
}

fn is_known(key: &str) -> bool {
    KEYS.contains(&key)
}

/// Parse config text into raw entries.
fn parse_text(text: &str, into: &mut BTreeMap<String, Entry>) -> Result<(), CliError> {
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(CliError::config(Some(line), "", format!("expected `key = value`, got `{content}`")));
        };
        let key = normalize_key(k);
        if !is_known(&key) {
            return Err(CliError::config(Some(line), &key, "unknown key"));
        }
        into.insert(
            key,
            Entry {
                value: v.trim().to_string(),
                line: Some(line),
            },
        );
    }
    Ok(())
}

struct Resolver {
    entries: BTreeMap<String, Entry>,
}

impl Resolver {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn get<T, E>(&self, key: &'static str, default: T) -> Result<T, CliError>
    where
        T: FromStr<Err = E>,
        E: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => e.value.parse().map_err(|err: E| CliError::config(e.line, key, err.to_string())),
        }
    }

    fn get_with<T>(&self, key: &'static str, default: T, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => parse(&e.value).map_err(|err| CliError::config(e.line, key, err)),
        }
    }

    fn fail(&self, key: &'static str, message: impl Into<String>) -> CliError {
        CliError::config(self.raw(key).and_then(|e| e.line), key, message)
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

fn parse_list<T>(s: &str, all: &[T]) -> Result<Vec<T>, String>
where
    T: FromStr + Clone,
    T::Err: std::fmt::Display,
{
    if s.trim() == "all" {
        return Ok(all.to_vec());
    }
    let items: Result<Vec<T>, String> = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| e.to_string()))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "single" => Ok(Mode::Single),
            "joint" => Ok(Mode::Joint),
            _ => Err(format!("expected single or joint, got `{s}`")),
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("expected csv or json, got `{s}`")),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else {
        format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
    }
}

impl RunConfig {
    /// Resolve config text plus `(key, value)` overrides, which win.
    pub fn resolve(text: Option<&str>, overrides: &[(String, String)]) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        if let Some(t) = text {
            parse_text(t, &mut entries)?;
        }
        for (k, v) in overrides {
            let key = normalize_key(k);
            if !is_known(&key) {
                return Err(CliError::config(None, &key, "unknown key"));
            }
            entries.insert(
                key,
                Entry {
                    value: v.trim().to_string(),
                    line: None,
                },
            );
        }
        let r = Resolver { entries };

        let units: Units = r.get("units", Units::TauSUnits)?;
        let tu = units.time_unit();
        let gamma_s = r.get("gamma_s", 1.0 / tu)?;
        let gamma_l = r.get("gamma_l", TAU_S_SECONDS / TAU_L_SECONDS / tu)?;
        let delta_m = r.get("delta_m", 0.5 / tu)?;
        let epsilon_abs = r.get("epsilon_abs", EPSILON_ABS)?;
        let epsilon_arg_deg = r.get("epsilon_arg_deg", EPSILON_ARG_DEG)?;
        let cp_rates = match (r.raw("cp_rate_1"), r.raw("cp_rate_2")) {
            (None, None) => None,
            (Some(_), Some(_)) => Some([r.get("cp_rate_1", 0.0)?, r.get("cp_rate_2", 0.0)?]),
            (Some(_), None) => return Err(r.fail("cp_rate_1", "cp_rate_2 must be given as well")),
            (None, Some(_)) => return Err(r.fail("cp_rate_2", "cp_rate_1 must be given as well")),
        };
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let default_grid = GridSpec::uniform(10.0 * tu, 21).map_err(CliError::from)?;
        let channel_default = Channel::ALL.to_vec();
        let cfg = RunConfig {
            units,
            gamma_s,
            gamma_l,
            delta_m,
            epsilon_abs,
            epsilon_arg_deg,
            cp_rates,
            mode: r.get("mode", Mode::Joint)?,
            gamma1: r.get("gamma1", gamma_s)?,
            gamma2: r.get("gamma2", gamma_l)?,
            delta_e: r.get("delta_e", delta_m)?,
            alpha1: r.get_with("alpha1", half, parse_complex)?,
            alpha2: r.get_with("alpha2", half, parse_complex)?,
            state: r.get("state", EntangledStateSpec::singlet())?,
            channels: r.get_with("channel", channel_default, |s| parse_list(s, &Channel::ALL))?,
            approaches: r.get_with("approach", ApproachKind::ALL.to_vec(), |s| parse_list(s, &ApproachKind::ALL))?,
            grid: r.get("grid", default_grid)?,
            bins: r.get("bins", default_grid)?,
            seed: r.get("seed", 42u64)?,
            output: r.get("output", OutputFormat::Csv)?,
            normalization: r.get("normalization", NormalizationPolicy::Global)?,
            n: match r.raw("n") {
                None => None,
                Some(_) => Some(r.get("n", 0usize)?),
            },
            z: r.get("z", 5.0)?,
            p: r.get("p", ApproachKind::Hybrid)?,
            q: r.get("q", ApproachKind::TimeOperator)?,
            events: r.raw("events").map(|e| PathBuf::from(&e.value)),
            out: r.raw("out").map(|e| PathBuf::from(&e.value)),
        };
        cfg.validate_with(&r)?;
        Ok(cfg)
    }

    fn validate_with(&self, r: &Resolver) -> Result<(), CliError> {
        let wrap = |key: &'static str, res: crate::Result<()>| res.map_err(|e| r.fail(key, e.to_string()));
        wrap("gamma_s", self.params().map(|_| ()))?;
        if self.mode == Mode::Single {
            wrap("alpha1", self.superposition().map(|_| ()))?;
        }
        wrap("state", self.state.validate())?;
        wrap("grid", self.grid.validate())?;
        wrap("bins", self.bins.validate())?;
        if self.n == Some(0) {
            return Err(r.fail("n", "at least one event is required"));
        }
        if !(self.z > 0.0 && self.z.is_finite()) {
            return Err(r.fail("z", "significance must be > 0"));
        }
        Ok(())
    }

    /// Parameters in internal units.
    pub fn params(&self) -> crate::Result<KaonParams> {
        let tu = self.units.time_unit();
        let mut p = KaonParams::new(
            self.gamma_s * tu,
            self.gamma_l * tu,
            self.delta_m * tu,
            Complex64::from_polar(self.epsilon_abs, self.epsilon_arg_deg.to_radians()),
        )?;
        p.cp_rates = self.cp_rates.map(|[a, b]| [a * tu, b * tu]);
        p.validate()?;
        Ok(p)
    }

    /// Single-particle superposition in internal units.
    pub fn superposition(&self) -> crate::Result<SuperpositionSpec> {
        let tu = self.units.time_unit();
        SuperpositionSpec::new(self.alpha1, self.alpha2, self.delta_e * tu, self.gamma1 * tu, self.gamma2 * tu)
    }

    pub fn density_options(&self) -> DensityOptions {
        DensityOptions {
            policy: self.normalization,
            ..DensityOptions::default()
        }
    }

    /// Serialize to the config file format; [`RunConfig::resolve`] reads it back.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let list = |items: Vec<String>| items.join(",");
        kv("units", self.units.name().into());
        kv("gamma_s", fmt_f64(self.gamma_s));
        kv("gamma_l", fmt_f64(self.gamma_l));
        kv("delta_m", fmt_f64(self.delta_m));
        kv("epsilon_abs", fmt_f64(self.epsilon_abs));
        kv("epsilon_arg_deg", fmt_f64(self.epsilon_arg_deg));
        if let Some([a, b]) = self.cp_rates {
            kv("cp_rate_1", fmt_f64(a));
            kv("cp_rate_2", fmt_f64(b));
        }
        kv(
            "mode",
            match self.mode {
                Mode::Single => "single",
                Mode::Joint => "joint",
            }
            .into(),
        );
        kv("gamma1", fmt_f64(self.gamma1));
        kv("gamma2", fmt_f64(self.gamma2));
        kv("delta_e", fmt_f64(self.delta_e));
        kv("alpha1", fmt_complex(self.alpha1));
        kv("alpha2", fmt_complex(self.alpha2));
        kv("state", self.state.to_string());
        kv("channel", list(self.channels.iter().map(|c| c.to_string()).collect()));
        kv("approach", list(self.approaches.iter().map(|a| a.name().to_string()).collect()));
        kv("grid", self.grid.to_string());
        kv("bins", self.bins.to_string());
        kv("seed", self.seed.to_string());
        kv(
            "output",
            match self.output {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
            .into(),
        );
        kv("normalization", self.normalization.to_string());
        if let Some(n) = self.n {
            kv("n", n.to_string());
        }
        kv("z", fmt_f64(self.z));
        kv("p", self.p.name().into());
        kv("q", self.q.name().into());
        if let Some(e) = &self.events {
            kv("events", e.display().to_string());
        }
        if let Some(o) = &self.out {
            kv("out", o.display().to_string());
        }
        s
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(None, &[]).expect("built-in defaults are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults_are_kaon_values() {
        let c = RunConfig::default();
        let p = c.params().unwrap();
        assert_eq!(p, KaonParams::default());
        assert_eq!(c.approaches, ApproachKind::ALL.to_vec());
        assert_eq!(c.channels.len(), 4);
    }

    #[test]
    fn si_defaults_convert_to_the_same_params() {
        let c = RunConfig::resolve(Some("units = si_seconds\n"), &[]).unwrap();
        let p = c.params().unwrap();
        let d = KaonParams::default();
        assert!((p.gamma_s - 1.0).abs() < 1e-15);
        assert!((p.gamma_l - d.gamma_l).abs() < 1e-15);
        assert!((p.delta_m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flags_override_file_and_dashes_match() {
        let text = "# comment\ndelta_m = 0.4 # trailing\nstate = beta:0\n";
        let c = RunConfig::resolve(Some(text), &ov(&[("delta-m", "0.3")])).unwrap();
        assert_eq!(c.delta_m, 0.3);
        assert_eq!(c.state, EntangledStateSpec::Beta(0.0));
    }

    #[test]
    fn diagnostics_carry_line_and_key() {
        let err = RunConfig::resolve(Some("units = si\n\ngamma_s = fast\n"), &[]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3") && msg.contains("gamma_s"), "{msg}");
        let err = RunConfig::resolve(Some("colour = red\n"), &[]).unwrap_err();
        assert!(err.to_string().contains("unknown key"));
        let err = RunConfig::resolve(Some("just text\n"), &[]).unwrap_err();
        assert!(err.to_string().contains("line 1"));
        assert!(RunConfig::resolve(None, &ov(&[("n", "0")])).is_err());
        assert!(RunConfig::resolve(None, &ov(&[("gamma_s", "-1")])).is_err());
        assert!(RunConfig::resolve(None, &ov(&[("cp_rate_1", "1")])).is_err());
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::resolve(
            None,
            &ov(&[
                ("units", "si_seconds"),
                ("state", "general:0.1,0,0.7,0.2,-0.6,0,0.3,0.1"),
                ("channel", "12,21"),
                ("approach", "hybrid,time-operator"),
                ("grid", "1e-12:1e-9:7:log"),
                ("alpha1", "0.6,0.0"),
                ("alpha2", "0,0.8"),
                ("cp_rate_1", "1e10"),
                ("cp_rate_2", "2e7"),
                ("n", "10"),
                ("out", "ev.csv"),
            ]),
        )
        .unwrap();
        let back = RunConfig::resolve(Some(&c.to_text()), &[]).unwrap();
        assert_eq!(c, back);
    }
}
