//! Run configuration: defaults, JSON config files, `--set` overrides and sweeps.

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::{Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use spin2::{DirectParams, EffectiveParams, ModelParams, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Time series of the population observables.
    Evolve,
    /// Pole and amplitude table, optionally against a sweep variable.
    Poles,
    /// Fourier-regime profile Re F(-iω) of each observable.
    Spectrum,
    /// Crossover report for a symmetric system.
    Regimes,
    /// Spin-boson-environment analysis (spin 1 without a bath, spin 2 hot).
    Sbe,
    /// Deviation of the pole sums from an independent Lindblad integration.
    Oracle,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Physical inputs, either bare or as effective white-noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Params {
    Bare(ModelParams),
    Effective(DirectParams),
}

impl Params {
    pub fn mode(&self) -> &'static str {
        match self {
            Params::Bare(_) => "bare",
            Params::Effective(_) => "effective",
        }
    }

    pub fn effective(&self) -> spin2::Result<EffectiveParams> {
        match self {
            Params::Bare(p) => EffectiveParams::derive(p),
            Params::Effective(d) => EffectiveParams::from_direct(d),
        }
    }
}

impl Default for Params {
    fn default() -> Self {
        Params::Effective(DirectParams {
            bar_delta1: 1.0,
            bar_delta2: 1.0,
            v: 0.5,
            theta1: 0.2,
            theta2: 0.2,
            k1: 0.05,
            k2: 0.05,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

fn spaced(start: f64, end: f64, count: usize, scale: Scale) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|k| {
            let s = k as f64 / last;
            match scale {
                Scale::Linear => start + (end - start) * s,
                Scale::Log => start * (end / start).powf(s),
            }
        })
        .collect()
}

fn check_range(what: &str, start: f64, end: f64, count: usize, scale: Scale) -> Result<()> {
    ensure!(count >= 1, "{what}: count must be at least 1");
    ensure!(start.is_finite() && end.is_finite(), "{what}: range must be finite");
    if scale == Scale::Log {
        ensure!(start > 0.0 && end > 0.0, "{what}: log spacing needs a positive range");
    }
    Ok(())
}

/// Time or frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        spaced(self.start, self.end, self.count, self.scale)
    }

    fn check(&self, what: &str) -> Result<()> {
        check_range(what, self.start, self.end, self.count, self.scale)?;
        ensure!(
            self.count == 1 || self.end > self.start,
            "{what}: grid must be strictly increasing (end > start)"
        );
        Ok(())
    }
}

/// One parameter varied over a range; `variable` accepts the same keys as
/// `--set params.<key>`, including the symmetric aliases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: String,
    pub start: f64,
    pub end: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        spaced(self.start, self.end, self.count, self.scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default = "default_times")]
    pub times: Grid,
    #[serde(default = "default_omegas")]
    pub omegas: Grid,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub format: Format,
}

fn default_times() -> Grid {
    Grid {
        start: 0.0,
        end: 50.0,
        count: 501,
        scale: Scale::Linear,
    }
}

fn default_omegas() -> Grid {
    Grid {
        start: 0.0,
        end: 5.0,
        count: 501,
        scale: Scale::Linear,
    }
}

fn default_observables() -> Vec<Observable> {
    Observable::ALL.to_vec()
}

const TOP_LEVEL: [&str; 7] = ["command", "params", "sweep", "times", "omegas", "observables", "format"];

/// Keys that set both spins at once.
fn expand_alias(key: &str) -> Vec<String> {
    match key {
        "theta" | "bar_delta" | "delta" | "k" | "upsilon" => vec![format!("{key}1"), format!("{key}2")],
        _ => vec![key.to_string()],
    }
}

/// Sets `key` (alias aware) on a params object; the key must already exist.
pub fn set_param(params: &mut Value, key: &str, value: f64) -> Result<()> {
    let obj = params.as_object_mut().ok_or_else(|| anyhow!("params must be an object"))?;
    for k in expand_alias(key) {
        let slot = obj
            .get_mut(&k)
            .filter(|_| k != "mode")
            .ok_or_else(|| anyhow!("unknown parameter `{key}` for this parameter mode"))?;
        *slot = Value::from(value);
    }
    Ok(())
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Applies one `key=value` override to the JSON form of a configuration.
///
/// Dotted keys address nested fields; a bare key that is not a top-level field
/// is taken as a parameter (`v=0.8` is `params.v=0.8`).
fn apply_set(config: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("--set expects key=value, got `{assignment}`"))?;
    let mut path: Vec<&str> = key.trim().split('.').collect();
    ensure!(path.iter().all(|p| !p.is_empty()), "--set: malformed key `{key}`");
    if !TOP_LEVEL.contains(&path[0]) {
        path.insert(0, "params");
    }
    let value = parse_value(raw.trim());

    if path[0] == "params" && path.len() == 2 && path[1] != "mode" {
        let x = value
            .as_f64()
            .ok_or_else(|| anyhow!("--set {key}: parameter values must be numbers"))?;
        return set_param(&mut config["params"], path[1], x);
    }

    let mut slot = config;
    for part in &path {
        if slot.is_null() {
            *slot = Value::Object(Map::new());
        }
        let obj = slot
            .as_object_mut()
            .ok_or_else(|| anyhow!("--set {key}: `{part}` is not inside an object"))?;
        slot = obj.entry(part.to_string()).or_insert(Value::Null);
    }
    *slot = value;
    Ok(())
}

/// Sources of a configuration, lowest precedence first.
#[derive(Debug, Default)]
pub struct Overrides<'a> {
    pub file: Option<Value>,
    pub command: Option<Command>,
    pub format: Option<Format>,
    pub sets: &'a [String],
}

impl RunConfig {
    pub fn build(o: Overrides<'_>) -> Result<Self> {
        let mut config = serde_json::json!({
            "params": Params::default(),
            "times": default_times(),
            "omegas": default_omegas(),
            "observables": default_observables(),
        });
        if let Some(file) = o.file {
            let file = match file {
                Value::Object(m) => m,
                _ => bail!("config file must hold a JSON object"),
            };
            for (k, v) in file {
                config[k] = v;
            }
        }
        if let Some(c) = o.command {
            config["command"] = serde_json::to_value(c)?;
        }
        if let Some(f) = o.format {
            config["format"] = serde_json::to_value(f)?;
        }
        if config.get("command").is_none_or(Value::is_null) {
            bail!("no subcommand given (and none in the config file)");
        }
        for s in o.sets {
            apply_set(&mut config, s)?;
        }
        let config: RunConfig = serde_json::from_value(config).context("invalid configuration")?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.times.check("times")?;
        self.omegas.check("omegas")?;
        ensure!(!self.observables.is_empty(), "observables must not be empty");
        if let Some(s) = &self.sweep {
            check_range("sweep", s.start, s.end, s.count, s.scale)?;
            let mut p = serde_json::to_value(self.params)?;
            set_param(&mut p, &s.variable, s.start).context("sweep variable")?;
        }
        Ok(())
    }

    /// Parameter sets in sweep order, paired with the swept value.
    pub fn points(&self) -> Result<Vec<(Option<f64>, Params)>> {
        let Some(sweep) = &self.sweep else {
            return Ok(vec![(None, self.params)]);
        };
        let base = serde_json::to_value(self.params)?;
        sweep
            .values()
            .into_iter()
            .map(|x| {
                let mut p = base.clone();
                set_param(&mut p, &sweep.variable, x)?;
                Ok((Some(x), serde_json::from_value(p)?))
            })
            .collect()
    }
}
