use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::discrimination::discriminate;
use crate::joint::{approach_comparison, joint_density_with, GridSpec, JointDensity};
use crate::model::{ApproachKind, Channel};
use crate::numerics::{sample_events, Event, EventBatch, ModelDescriptor, RNG_ALGORITHM};
use crate::params::{EPSILON_ABS, EPSILON_ARG_DEG, TAU_L_SECONDS, TAU_S_SECONDS};
use crate::single::density_single;

use super::config::{Mode, OutputFormat, RunConfig};
use super::CliError;

fn num(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

/// One line of the `constants` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEntry {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    /// `input`, `derived` or `approximation`.
    pub provenance: &'static str,
    pub note: &'static str,
}

fn constant_entries() -> Vec<ConstantEntry> {
    vec![
        ConstantEntry {
            name: "tau_S",
            value: TAU_S_SECONDS,
            unit: "s",
            provenance: "input",
            note: "short lifetime; defines the internal time unit",
        },
        ConstantEntry {
            name: "tau_L",
            value: TAU_L_SECONDS,
            unit: "s",
            provenance: "input",
            note: "long lifetime",
        },
        ConstantEntry {
            name: "|epsilon|",
            value: EPSILON_ABS,
            unit: "",
            provenance: "input",
            note: "CP-violation parameter modulus",
        },
        ConstantEntry {
            name: "arg epsilon",
            value: EPSILON_ARG_DEG,
            unit: "deg",
            provenance: "input",
            note: "CP-violation parameter phase",
        },
        ConstantEntry {
            name: "Gamma_L/Gamma_S",
            value: TAU_S_SECONDS / TAU_L_SECONDS,
            unit: "",
            provenance: "derived",
            note: "lifetime ratio tau_S/tau_L",
        },
        ConstantEntry {
            name: "delta_m",
            value: 0.5,
            unit: "Gamma_S",
            provenance: "approximation",
            note: "delta_m = Gamma_S/2, the usual kaon approximation",
        },
    ]
}

/// Default parameter set with provenance, as text or JSON.
pub fn cmd_constants(format: OutputFormat) -> String {
    let entries = constant_entries();
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&entries).expect("plain data serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::new();
            for e in &entries {
                let value = match e.name {
                    "arg epsilon" => format!("{}", e.value),
                    "Gamma_L/Gamma_S" => format!("{:.4e}", e.value),
                    "delta_m" => "Gamma_S/2".to_string(),
                    _ => format!("{:e}", e.value),
                };
                let unit = if e.unit.is_empty() || e.name == "delta_m" {
                    String::new()
                } else {
                    format!(" {}", e.unit)
                };
                let _ = writeln!(s, "{:<16} = {:<14} [{}] {}", e.name, format!("{value}{unit}"), e.provenance, e.note);
            }
            s
        }
    }
}

fn check_negative_times(points: &[f64]) -> Result<(), CliError> {
    if points.iter().any(|t| *t < 0.0) {
        return Err(CliError::config(None, "grid", "grid times must be >= 0"));
    }
    Ok(())
}

/// Density table on the configured grid.
///
/// Joint mode: `t_l,t_r,approach,channel,density,normalized`, where `density`
/// is the normalized value and `normalized` names the normalization policy.
/// Single mode: `t,approach,density`.
pub fn cmd_density(cfg: &RunConfig) -> Result<String, CliError> {
    let tu = cfg.units.time_unit();
    let points = cfg.grid.points();
    check_negative_times(&points)?;
    match cfg.mode {
        Mode::Joint => {
            let params = cfg.params()?;
            let options = cfg.density_options();
            let policy = cfg.normalization.to_string();
            let mut rows = Vec::new();
            for &approach in &cfg.approaches {
                for &channel in &cfg.channels {
                    let d = joint_density_with(approach, &cfg.state, &params, channel, &options)?;
                    for &tl in &points {
                        for &tr in &points {
                            let v = d.eval(tl / tu, tr / tu) / (tu * tu);
                            rows.push((tl, tr, approach, channel, v));
                        }
                    }
                }
            }
            Ok(match cfg.output {
                OutputFormat::Csv => {
                    let mut s = String::from("t_l,t_r,approach,channel,density,normalized\n");
                    for (tl, tr, a, c, v) in rows {
                        let _ = writeln!(s, "{},{},{},{},{},{}", num(tl), num(tr), a.name(), c, num(v), policy);
                    }
                    s
                }
                OutputFormat::Json => {
                    let rows: Vec<_> = rows
                        .into_iter()
                        .map(|(tl, tr, a, c, v)| {
                            json!({"t_l": tl, "t_r": tr, "approach": a.name(), "channel": c.to_string(),
                                   "density": v, "normalized": policy})
                        })
                        .collect();
                    json_text(&rows)
                }
            })
        }
        Mode::Single => {
            let spec = cfg.superposition()?;
            let approaches: Vec<ApproachKind> = cfg
                .approaches
                .iter()
                .copied()
                .filter(|a| *a != ApproachKind::StandardOld)
                .collect();
            if approaches.is_empty() {
                return Err(CliError::config(
                    None,
                    "approach",
                    "standard-old has no separate single-particle form; use standard-new",
                ));
            }
            let mut rows = Vec::new();
            for &approach in &approaches {
                for &t in &points {
                    let v = density_single(approach, &spec, t / tu)?.value / tu;
                    rows.push((t, approach, v));
                }
            }
            Ok(match cfg.output {
                OutputFormat::Csv => {
                    let mut s = String::from("t,approach,density\n");
                    for (t, a, v) in rows {
                        let _ = writeln!(s, "{},{},{}", num(t), a.name(), num(v));
                    }
                    s
                }
                OutputFormat::Json => {
                    let rows: Vec<_> = rows
                        .into_iter()
                        .map(|(t, a, v)| json!({"t": t, "approach": a.name(), "density": v}))
                        .collect();
                    json_text(&rows)
                }
            })
        }
    }
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn internal_grid(grid: &GridSpec, tu: f64) -> GridSpec {
    GridSpec {
        t_min: grid.t_min / tu,
        t_max: grid.t_max / tu,
        ..*grid
    }
}

/// Pairwise proportionality verdicts for the configured approaches.
pub fn cmd_compare(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.params()?;
    let options = cfg.density_options();
    let grid = internal_grid(&cfg.grid, cfg.units.time_unit());
    check_negative_times(&grid.points())?;
    let mut rows = Vec::new();
    for &channel in &cfg.channels {
        let cmp = approach_comparison(&cfg.state, &params, channel, &grid, &options)?;
        for pair in &cmp.pairs {
            if cfg.approaches.contains(&pair.first) && cfg.approaches.contains(&pair.second) {
                rows.push((channel, pair.clone()));
            }
        }
    }
    Ok(match cfg.output {
        OutputFormat::Csv => {
            let mut s = String::from("channel,first,second,max_relative_deviation,ratio_spread,verdict\n");
            for (c, p) in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    c,
                    p.first.name(),
                    p.second.name(),
                    num(p.max_relative_deviation),
                    num(p.ratio_spread),
                    p.label()
                );
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = rows
                .into_iter()
                .map(|(c, p)| {
                    json!({"channel": c.to_string(), "first": p.first.name(), "second": p.second.name(),
                           "max_relative_deviation": p.max_relative_deviation,
                           "ratio_spread": if p.ratio_spread.is_finite() { json!(p.ratio_spread) } else { json!("inf") },
                           "verdict": p.label()})
                })
                .collect();
            json_text(&rows)
        }
    })
}

fn single_choice<T: Copy + std::fmt::Display>(items: &[T], key: &'static str, command: &str) -> Result<T, CliError> {
    match items {
        [one] => Ok(*one),
        _ => Err(CliError::config(
            None,
            key,
            format!(
                "{command} needs exactly one {key}, got {}",
                items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
        )),
    }
}

/// Event table and its JSON sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutput {
    pub csv: String,
    pub sidecar: String,
    pub batch: EventBatch,
}

/// Draw `n` events from the single configured approach and channel.
pub fn cmd_sample(cfg: &RunConfig) -> Result<SampleOutput, CliError> {
    let n = cfg.n.ok_or_else(|| CliError::config(None, "n", "sample needs an event count"))?;
    let approach = single_choice(&cfg.approaches, "approach", "sample")?;
    let channel = single_choice(&cfg.channels, "channel", "sample")?;
    let params = cfg.params()?;
    let density = joint_density_with(approach, &cfg.state, &params, channel, &cfg.density_options())?;
    let batch = sample_events(&density, n, cfg.seed)?;
    let tu = cfg.units.time_unit();
    let mut csv = String::with_capacity(n * 48);
    csv.push_str("t_l,t_r,channel\n");
    for e in &batch.events {
        let _ = writeln!(csv, "{},{},{}", num(e.t_l * tu), num(e.t_r * tu), e.channel);
    }
    let sidecar = json_text(&json!({
        "seed": batch.seed,
        "n": batch.events.len(),
        "rng_algorithm": batch.rng_algorithm,
        "acceptance_rate": batch.acceptance_rate,
        "units": if tu == 1.0 { "tau_s_units" } else { "si_seconds" },
        "model": batch.model,
    }));
    Ok(SampleOutput { csv, sidecar, batch })
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Run [`cmd_sample`] and write `<out>` plus `<out>.json`.
pub fn write_sample(cfg: &RunConfig) -> Result<(PathBuf, PathBuf), CliError> {
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::config(None, "out", "sample needs an output path"))?;
    let result = cmd_sample(cfg)?;
    let side = sidecar_path(&out);
    fs::write(&out, &result.csv).map_err(|e| CliError::io(&out, e))?;
    fs::write(&side, &result.sidecar).map_err(|e| CliError::io(&side, e))?;
    Ok((out, side))
}

/// Read a `t_l,t_r,channel` table, converting times by `time_unit` seconds.
pub fn read_events_csv(path: &Path, time_unit: f64) -> Result<EventBatch, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line_no == 1 && line.trim() == "t_l,t_r,channel" {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |m: String| CliError::config(Some(line_no), "events", m);
        let [tl, tr, ch] = fields.as_slice() else {
            return Err(bad(format!("expected `t_l,t_r,channel`, got `{line}`")));
        };
        let t_l: f64 = tl.parse().map_err(|e| bad(format!("t_l: {e}")))?;
        let t_r: f64 = tr.parse().map_err(|e| bad(format!("t_r: {e}")))?;
        let channel: Channel = ch.parse().map_err(|e: crate::DecayError| bad(e.to_string()))?;
        if !(t_l >= 0.0 && t_r >= 0.0) {
            return Err(bad("times must be >= 0".into()));
        }
        events.push(Event {
            t_l: t_l / time_unit,
            t_r: t_r / time_unit,
            channel,
        });
    }
    let side = sidecar_path(path);
    let (seed, model) = match fs::read_to_string(&side) {
        Ok(s) => {
            let v: serde_json::Value =
                serde_json::from_str(&s).map_err(|e| CliError::config(None, "events", format!("{}: {e}", side.display())))?;
            let model: Option<ModelDescriptor> = serde_json::from_value(v["model"].clone()).ok();
            (v["seed"].as_u64().unwrap_or(0), model)
        }
        Err(_) => (0, None),
    };
    Ok(EventBatch {
        events,
        seed,
        model: model.unwrap_or_else(|| ModelDescriptor {
            approach: "unknown".into(),
            state: "unknown".into(),
            channel: String::new(),
            normalization: String::new(),
            gamma_s: f64::NAN,
            gamma_l: f64::NAN,
            delta_m: f64::NAN,
            epsilon_re: f64::NAN,
            epsilon_im: f64::NAN,
        }),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        acceptance_rate: 1.0,
    })
}

fn density_for(cfg: &RunConfig, approach: ApproachKind, channel: Channel) -> Result<JointDensity, CliError> {
    Ok(joint_density_with(approach, &cfg.state, &cfg.params()?, channel, &cfg.density_options())?)
}

/// JSON discrimination report for models `p` and `q` in the single configured channel.
pub fn cmd_discriminate(cfg: &RunConfig) -> Result<String, CliError> {
    let channel = single_choice(&cfg.channels, "channel", "discriminate")?;
    let dp = density_for(cfg, cfg.p, channel)?;
    let dq = density_for(cfg, cfg.q, channel)?;
    let tu = cfg.units.time_unit();
    let events = match &cfg.events {
        Some(path) => Some(read_events_csv(path, tu)?),
        None => None,
    };
    let report = discriminate(&dp, &dq, cfg.z, events.as_ref(), &internal_grid(&cfg.bins, tu))?;
    Ok(json_text(&report))
}
