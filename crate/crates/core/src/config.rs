//! Flat `key = value` configuration.
//!
//! A configuration file holds one `key = value` pair per line; `#` starts a
//! comment. Keys are case-insensitive and unknown keys are rejected. Later
//! assignments win, and command-line `--set key=value` overrides are applied
//! after the file.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `L` | 10 | qubit count |
//! | `omega`, `omega0`, `nu` | 100, 100, `omega0` | Rabi, base Larmor and frame frequencies |
//! | `profile` | `gradient` | `gradient`, `homogeneous` or `quadratic` |
//! | `a`, `b`, `spread`, `field_seed` | 1, 0, 0, 0 | profile parameters |
//! | `coupling`, `J`, `random`, `seed` | `N`, 0, false, 0 | Ising bonds |
//! | `custom_matrix` | none | rows split by `;`, entries by `,` |
//! | `max_qubits`, `allow_large` | 14, false | size guard |
//! | `bins`, `s_max`, `unfolding`, `unfolding_window` | 40, 4, `local`, 10 | `P(s)` options |
//! | `threshold` | 1e-6 | census and matrix-dump threshold |
//! | `axis`, `values` | `J`, none | swept parameter and its values |
//! | `ensemble`, `master_seed` | 1, none | seeds per grid point |
//! | `observables` | none | any of `bands, spacing, npc, sigma, census, theory` |
//! | `output`, `format`, `overwrite` | stdout, `csv`, false | result file |
//! | `record_timing`, `workers`, `execution` | false, all cores, `parallel` | execution |
//!
//! `values` takes a comma-separated list or `linspace(lo, hi, n)` /
//! `logspace(lo, hi, n)` (endpoints are values, not exponents).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::model::{CouplingKind, CouplingSpec, FieldProfile, RawParams, DEFAULT_MAX_QUBITS};
use crate::par::Execution;
use crate::spectral::{SpacingOptions, Unfolding};
use crate::{Error, Result};

/// Environment variable naming the directory relative output paths land in.
pub const OUTPUT_DIR_ENV: &str = "QCHAIN_OUTPUT_DIR";

/// Qubit ceiling once `allow_large` is set.
pub const LARGE_MAX_QUBITS: usize = 24;

const KEYS: &[&str] = &[
    "l",
    "omega",
    "omega0",
    "nu",
    "profile",
    "a",
    "b",
    "spread",
    "field_seed",
    "coupling",
    "j",
    "random",
    "seed",
    "custom_matrix",
    "max_qubits",
    "allow_large",
    "bins",
    "s_max",
    "unfolding",
    "unfolding_window",
    "threshold",
    "axis",
    "values",
    "ensemble",
    "master_seed",
    "observables",
    "output",
    "format",
    "overwrite",
    "record_timing",
    "workers",
    "execution",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    J,
    Omega,
    L,
    Spread,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::J => "J",
            Axis::Omega => "omega",
            Axis::L => "L",
            Axis::Spread => "spread",
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "j" => Ok(Axis::J),
            "omega" => Ok(Axis::Omega),
            "l" => Ok(Axis::L),
            "spread" | "delta" => Ok(Axis::Spread),
            other => Err(format!("unknown axis `{other}` (expected J, omega, L or spread)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    Bands,
    Spacing,
    Npc,
    Sigma,
    Census,
    Theory,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Bands => "bands",
            Observable::Spacing => "spacing",
            Observable::Npc => "npc",
            Observable::Sigma => "sigma",
            Observable::Census => "census",
            Observable::Theory => "theory",
        }
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "bands" => Ok(Observable::Bands),
            "spacing" => Ok(Observable::Spacing),
            "npc" => Ok(Observable::Npc),
            "sigma" => Ok(Observable::Sigma),
            "census" => Ok(Observable::Census),
            "theory" => Ok(Observable::Theory),
            other => Err(format!("unknown observable `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
    pub overwrite: bool,
}

impl OutputSpec {
    /// The output path, resolved against `QCHAIN_OUTPUT_DIR` when relative.
    pub fn resolved_path(&self) -> Option<PathBuf> {
        let p = self.path.as_ref()?;
        if p.is_relative() {
            if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
                return Some(PathBuf::from(dir).join(p));
            }
        }
        Some(p.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub spacing: SpacingOptions,
    pub threshold: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            spacing: SpacingOptions::default(),
            threshold: 1e-6,
        }
    }
}

/// A validated run description: base model, sweep grid, observables, output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RawParams,
    pub axis: Axis,
    /// Grid values; empty means a single point at the base parameters.
    pub values: Vec<f64>,
    pub ensemble: usize,
    pub master_seed: Option<u64>,
    pub observables: Vec<Observable>,
    pub analysis: AnalysisOptions,
    pub output: OutputSpec,
    pub record_timing: bool,
    pub workers: Option<usize>,
    pub execution: Execution,
    echo: Vec<(String, String)>,
}

impl SweepConfig {
    /// Canonical `key=value` pairs describing this configuration, in key order
    /// with whitespace removed from values.
    pub fn echo(&self) -> &[(String, String)] {
        &self.echo
    }

    /// Grid values actually visited.
    pub fn grid(&self) -> Vec<f64> {
        if !self.values.is_empty() {
            return self.values.clone();
        }
        vec![match self.axis {
            Axis::J => self.base.coupling.j,
            Axis::Omega => self.base.omega,
            Axis::L => self.base.qubits as f64,
            Axis::Spread => match self.base.profile {
                FieldProfile::Homogeneous { spread, .. } => spread,
                _ => 0.0,
            },
        }]
    }
}

/// `key = value` lines of `text` in order.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::config(format!("line {}", lineno + 1), format!("expected `key = value`, got `{line}`"))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Split a `key=value` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::config(s, "override must look like key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Build a configuration from file text plus overrides (applied last).
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<SweepConfig> {
    let mut pairs = parse_pairs(text)?;
    pairs.extend(overrides.iter().cloned());
    from_pairs(&pairs)
}

fn number<T: FromStr>(key: &str, v: &str, what: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::config(key, format!("expected {what}, got `{v}`")))
}

fn float(key: &str, v: &str) -> Result<f64> {
    let x: f64 = number(key, v, "a number")?;
    if !x.is_finite() {
        return Err(Error::config(key, format!("expected a finite number, got `{v}`")));
    }
    Ok(x)
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::config(key, format!("expected true or false, got `{v}`"))),
    }
}

fn parse_values(key: &str, v: &str) -> Result<Vec<f64>> {
    let v = v.trim();
    for (prefix, log) in [("linspace(", false), ("logspace(", true)] {
        if let Some(rest) = v.strip_prefix(prefix) {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::config(key, format!("missing `)` in `{v}`")))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::config(key, format!("`{prefix}lo, hi, n)` takes three arguments")));
            }
            let lo = float(key, parts[0])?;
            let hi = float(key, parts[1])?;
            let n: usize = number(key, parts[2], "a point count")?;
            if n == 0 {
                return Err(Error::config(key, "point count must be positive"));
            }
            if log && (lo <= 0.0 || hi <= 0.0) {
                return Err(Error::config(key, "logspace endpoints must be positive"));
            }
            return Ok((0..n)
                .map(|i| {
                    let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                    if log {
                        (lo.ln() + t * (hi.ln() - lo.ln())).exp()
                    } else {
                        lo + t * (hi - lo)
                    }
                })
                .collect());
        }
    }
    v.split(',').map(|x| float(key, x.trim())).collect()
}

fn parse_matrix(key: &str, v: &str) -> Result<Vec<Vec<f64>>> {
    v.split(';')
        .map(|row| row.split(',').map(|x| float(key, x.trim())).collect())
        .collect()
}

fn from_pairs(pairs: &[(String, String)]) -> Result<SweepConfig> {
    let mut map: Vec<(String, String)> = Vec::new();
    for (k, v) in pairs {
        let key = k.to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::config(k.clone(), "unknown key"));
        }
        match map.iter_mut().find(|(mk, _)| *mk == key) {
            Some(slot) => slot.1 = v.clone(),
            None => map.push((key, v.clone())),
        }
    }
    let get = |k: &str| map.iter().find(|(mk, _)| mk == k).map(|(_, v)| v.as_str());

    let mut raw = RawParams::default();
    if let Some(v) = get("l") {
        raw.qubits = number("L", v, "a qubit count")?;
    }
    if let Some(v) = get("omega") {
        raw.omega = float("omega", v)?;
    }
    if let Some(v) = get("omega0") {
        raw.omega0 = float("omega0", v)?;
    }
    if let Some(v) = get("nu") {
        raw.nu = Some(float("nu", v)?);
    }
    let a = get("a").map(|v| float("a", v)).transpose()?.unwrap_or(1.0);
    let b = get("b").map(|v| float("b", v)).transpose()?.unwrap_or(0.0);
    let spread = get("spread").map(|v| float("spread", v)).transpose()?.unwrap_or(0.0);
    let field_seed: u64 = get("field_seed").map(|v| number("field_seed", v, "an unsigned integer")).transpose()?.unwrap_or(0);
    raw.profile = match get("profile").unwrap_or("gradient").to_ascii_lowercase().as_str() {
        "gradient" => FieldProfile::ConstantGradient { a },
        "homogeneous" => FieldProfile::Homogeneous { spread, seed: field_seed },
        "quadratic" => FieldProfile::QuadraticGradient { b },
        other => {
            return Err(Error::config(
                "profile",
                format!("expected gradient, homogeneous or quadratic, got `{other}`"),
            ))
        }
    };
    let kind: CouplingKind = get("coupling")
        .map(|v| v.parse().map_err(|m: String| Error::config("coupling", m)))
        .transpose()?
        .unwrap_or(CouplingKind::N);
    raw.coupling = CouplingSpec {
        kind,
        j: get("j").map(|v| float("J", v)).transpose()?.unwrap_or(0.0),
        random: get("random").map(|v| boolean("random", v)).transpose()?.unwrap_or(false),
        seed: get("seed").map(|v| number("seed", v, "an unsigned integer")).transpose()?.unwrap_or(0),
        custom: get("custom_matrix").map(|v| parse_matrix("custom_matrix", v)).transpose()?,
    };
    if kind == CouplingKind::Custom && raw.coupling.custom.is_none() {
        return Err(Error::config("custom_matrix", "required when coupling = custom"));
    }
    let allow_large = get("allow_large").map(|v| boolean("allow_large", v)).transpose()?.unwrap_or(false);
    raw.max_qubits = match get("max_qubits") {
        Some(v) => number("max_qubits", v, "a qubit count")?,
        None if allow_large => LARGE_MAX_QUBITS,
        None => DEFAULT_MAX_QUBITS,
    };
    if raw.max_qubits > DEFAULT_MAX_QUBITS && !allow_large {
        return Err(Error::config("max_qubits", format!("values above {DEFAULT_MAX_QUBITS} need allow_large = true")));
    }

    let mut analysis = AnalysisOptions::default();
    if let Some(v) = get("bins") {
        analysis.spacing.bins = number("bins", v, "a bin count")?;
        if analysis.spacing.bins == 0 {
            return Err(Error::config("bins", "must be positive"));
        }
    }
    if let Some(v) = get("s_max") {
        analysis.spacing.s_max = float("s_max", v)?;
        if analysis.spacing.s_max <= 0.0 {
            return Err(Error::config("s_max", "must be positive"));
        }
    }
    let window: usize = get("unfolding_window").map(|v| number("unfolding_window", v, "a window size")).transpose()?.unwrap_or(10);
    analysis.spacing.unfolding = match get("unfolding").unwrap_or("local").to_ascii_lowercase().as_str() {
        "local" => Unfolding::LocalMean { half_window: window },
        "constant" => Unfolding::Constant,
        other => return Err(Error::config("unfolding", format!("expected local or constant, got `{other}`"))),
    };
    if let Some(v) = get("threshold") {
        analysis.threshold = float("threshold", v)?;
        if analysis.threshold < 0.0 {
            return Err(Error::config("threshold", "must be non-negative"));
        }
    }

    let axis: Axis = get("axis")
        .map(|v| v.parse().map_err(|m: String| Error::config("axis", m)))
        .transpose()?
        .unwrap_or(Axis::J);
    let values = get("values").map(|v| parse_values("values", v)).transpose()?.unwrap_or_default();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !increasing && !decreasing {
        return Err(Error::config("values", "must be strictly monotone"));
    }
    match axis {
        Axis::L => {
            if kind == CouplingKind::Custom && !values.is_empty() {
                return Err(Error::config("axis", "cannot sweep L with a fixed-size custom coupling matrix"));
            }
            if let Some(bad) = values.iter().find(|x| x.fract() != 0.0 || **x < 2.0) {
                return Err(Error::config("values", format!("L values must be integers >= 2, got {bad}")));
            }
        }
        Axis::Spread => {
            if !matches!(raw.profile, FieldProfile::Homogeneous { .. }) {
                return Err(Error::config("axis", "sweeping spread needs profile = homogeneous"));
            }
            if let Some(bad) = values.iter().find(|x| **x < 0.0) {
                return Err(Error::config("values", format!("spread values must be >= 0, got {bad}")));
            }
        }
        Axis::Omega => {
            if let Some(bad) = values.iter().find(|x| **x <= 0.0) {
                return Err(Error::config("values", format!("omega values must be positive, got {bad}")));
            }
        }
        Axis::J => {}
    }

    let ensemble: usize = get("ensemble").map(|v| number("ensemble", v, "an ensemble size")).transpose()?.unwrap_or(1);
    if ensemble == 0 {
        return Err(Error::config("ensemble", "must be at least 1"));
    }
    let randomized = raw.coupling.random || matches!(raw.profile, FieldProfile::Homogeneous { .. });
    if ensemble > 1 && !randomized {
        return Err(Error::config("ensemble", "ensembles need random couplings or a homogeneous random field"));
    }
    let master_seed = get("master_seed").map(|v| number("master_seed", v, "an unsigned integer")).transpose()?;

    let mut observables = Vec::new();
    if let Some(v) = get("observables") {
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let o: Observable = item.parse().map_err(|m: String| Error::config("observables", m))?;
            if !observables.contains(&o) {
                observables.push(o);
            }
        }
    }

    let output = OutputSpec {
        path: get("output").filter(|v| !v.is_empty() && *v != "-").map(PathBuf::from),
        format: get("format")
            .map(|v| v.parse().map_err(|m: String| Error::config("format", m)))
            .transpose()?
            .unwrap_or_default(),
        overwrite: get("overwrite").map(|v| boolean("overwrite", v)).transpose()?.unwrap_or(false),
    };
    let record_timing = get("record_timing").map(|v| boolean("record_timing", v)).transpose()?.unwrap_or(false);
    let workers = get("workers").map(|v| number::<usize>("workers", v, "a worker count")).transpose()?;
    if workers == Some(0) {
        return Err(Error::config("workers", "must be at least 1"));
    }
    let execution = match get("execution").unwrap_or("parallel").to_ascii_lowercase().as_str() {
        "parallel" => Execution::Parallel,
        "sequential" => Execution::Sequential,
        other => return Err(Error::config("execution", format!("expected parallel or sequential, got `{other}`"))),
    };

    // validate the base model eagerly so errors carry the config context
    raw.build().map_err(|e| Error::config("model", e.to_string()))?;

    let mut echo: Vec<(String, String)> = map.iter().map(|(k, v)| (k.clone(), v.split_whitespace().collect())).collect();
    echo.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(SweepConfig {
        base: raw,
        axis,
        values,
        ensemble,
        master_seed,
        observables,
        analysis,
        output,
        record_timing,
        workers,
        execution,
        echo,
    })
}
