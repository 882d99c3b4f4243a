//! Line-oriented `key = value` configuration with dotted sections.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{ConfigError, ConfigErrors};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Int,
    Float,
    Bool,
    Str,
    FloatList,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Int => "an integer",
            Kind::Float => "a finite number",
            Kind::Bool => "true or false",
            Kind::Str => "a string",
            Kind::FloatList => "a comma-separated list of numbers",
        }
    }
}

const SCHEMA: &[(&str, Kind)] = &[
    ("grid.n", Kind::Int),
    ("grid.L", Kind::Float),
    ("time.T", Kind::Float),
    ("time.M", Kind::Int),
    ("nu", Kind::Float),
    ("seed", Kind::Int),
    ("threads", Kind::Int),
    ("experiment", Kind::Str),
    ("output.dir", Kind::Str),
    ("output.format", Kind::Str),
    ("params.amplitude", Kind::Float),
    ("params.width", Kind::Float),
    ("params.kmax", Kind::Int),
    ("params.space", Kind::Str),
    ("params.herz", Kind::FloatList),
    ("params.local_T", Kind::Float),
    ("params.n_max", Kind::Int),
    ("params.tol", Kind::Float),
    ("params.form", Kind::Str),
    ("params.w_factor", Kind::Float),
    ("params.steps", Kind::Int),
    ("params.nonlinear", Kind::Bool),
    ("params.alpha", Kind::Float),
    ("params.beta", Kind::Float),
    ("params.p", Kind::Float),
    ("params.t_max", Kind::Float),
    ("params.t_list", Kind::FloatList),
    ("params.radii", Kind::FloatList),
    ("params.kernel", Kind::Str),
    ("params.s", Kind::FloatList),
    ("params.samples", Kind::Int),
    ("params.length", Kind::Int),
    ("params.c2", Kind::Float),
    ("params.lo", Kind::Float),
    ("params.hi", Kind::Float),
    ("params.ratio", Kind::Float),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    FloatList(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Str(v) => f.write_str(v),
            Value::FloatList(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_value(kind: Kind, raw: &str) -> Option<Value> {
    match kind {
        Kind::Int => raw.parse::<i64>().ok().map(Value::Int),
        Kind::Float => parse_float(raw).map(Value::Float),
        Kind::Bool => raw.parse::<bool>().ok().map(Value::Bool),
        Kind::Str => {
            let s = raw.trim_matches('"');
            (!s.is_empty()).then(|| Value::Str(s.to_string()))
        }
        Kind::FloatList => {
            raw.split(',').map(|p| parse_float(p.trim())).collect::<Option<Vec<_>>>().map(Value::FloatList)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    GridInfo,
    Norms,
    Majorant,
    CheapEvolve,
    Certificate,
    Picard,
    GevreyCheck,
    Kato,
    Maximal,
    Hedberg,
    Calderon,
    Splitting,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::GridInfo,
        Experiment::Norms,
        Experiment::Majorant,
        Experiment::CheapEvolve,
        Experiment::Certificate,
        Experiment::Picard,
        Experiment::GevreyCheck,
        Experiment::Kato,
        Experiment::Maximal,
        Experiment::Hedberg,
        Experiment::Calderon,
        Experiment::Splitting,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::GridInfo => "grid-info",
            Experiment::Norms => "norms",
            Experiment::Majorant => "majorant",
            Experiment::CheapEvolve => "cheap-evolve",
            Experiment::Certificate => "certificate",
            Experiment::Picard => "picard",
            Experiment::GevreyCheck => "gevrey-check",
            Experiment::Kato => "kato",
            Experiment::Maximal => "maximal",
            Experiment::Hedberg => "hedberg",
            Experiment::Calderon => "calderon",
            Experiment::Splitting => "splitting",
        }
    }
}

impl FromStr for Experiment {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Experiment::ALL.into_iter().find(|e| e.id() == s).ok_or(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(()),
        }
    }
}

/// Validated configuration. Experiment parameters stay in `params` (keys
/// without the `params.` prefix) and are read with defaults by the runner.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub length: f64,
    pub t_end: f64,
    pub steps: usize,
    pub nu: f64,
    pub seed: u64,
    pub threads: usize,
    pub experiment: Option<Experiment>,
    pub output_dir: Option<String>,
    pub format: Format,
    pub params: BTreeMap<String, Value>,
    entries: BTreeMap<String, Value>,
}

impl ExperimentConfig {
    /// Canonical `key = value` lines, sorted by key.
    pub fn echo(&self) -> Vec<String> {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }

    pub fn float(&self, key: &str, default: f64) -> f64 {
        match self.params.get(key) {
            Some(Value::Float(v)) => *v,
            _ => default,
        }
    }

    pub fn int(&self, key: &str, default: i64) -> i64 {
        match self.params.get(key) {
            Some(Value::Int(v)) => *v,
            _ => default,
        }
    }

    pub fn boolean(&self, key: &str, default: bool) -> bool {
        match self.params.get(key) {
            Some(Value::Bool(v)) => *v,
            _ => default,
        }
    }

    pub fn string(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Value::Str(v)) => Some(v),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        match self.params.get(key) {
            Some(Value::FloatList(v)) => Some(v),
            _ => None,
        }
    }
}

/// Parse and validate; every error is collected.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let mut entries: BTreeMap<String, Value> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError::Syntax { line: line_no });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&(_, kind)) = SCHEMA.iter().find(|(k, _)| *k == key) else {
            errors.push(ConfigError::UnknownKey { key: key.into(), line: line_no });
            continue;
        };
        if entries.contains_key(key) {
            errors.push(ConfigError::DuplicateKey { key: key.into(), line: line_no });
            continue;
        }
        match parse_value(kind, value) {
            Some(v) => {
                entries.insert(key.into(), v);
            }
            None => {
                errors.push(ConfigError::TypeMismatch { key: key.into(), expected: kind.name(), found: value.into() })
            }
        }
    }
    let missing: Vec<String> = ["grid.n", "grid.L"]
        .iter()
        .filter(|k| !entries.contains_key(**k) && !errors.iter().any(|e| e.key() == Some(**k)))
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        errors.push(ConfigError::MissingRequired(missing));
    }
    let cfg = build(entries, &mut errors);
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigErrors(errors))
    }
}

fn bad(errors: &mut Vec<ConfigError>, key: &str, reason: impl Into<String>) {
    errors.push(ConfigError::PreconditionViolation { key: key.into(), reason: reason.into() });
}

fn build(entries: BTreeMap<String, Value>, errors: &mut Vec<ConfigError>) -> ExperimentConfig {
    let int = |k: &str| match entries.get(k) {
        Some(Value::Int(v)) => Some(*v),
        _ => None,
    };
    let float = |k: &str| match entries.get(k) {
        Some(Value::Float(v)) => Some(*v),
        _ => None,
    };
    let string = |k: &str| match entries.get(k) {
        Some(Value::Str(v)) => Some(v.clone()),
        _ => None,
    };

    let mut n = 16usize;
    if let Some(v) = int("grid.n") {
        if v % 2 != 0 {
            errors.push(ConfigError::OddGridSize { key: "grid.n".into(), value: v });
        } else if !(8..=256).contains(&v) {
            bad(errors, "grid.n", format!("{v} outside [8, 256]"));
        } else {
            n = v as usize;
        }
    }
    let length = float("grid.L").unwrap_or(std::f64::consts::TAU);
    if length <= 0.0 {
        bad(errors, "grid.L", "must be positive");
    }
    let t_end = float("time.T").unwrap_or(1.0);
    if t_end <= 0.0 {
        bad(errors, "time.T", "must be positive");
    }
    let steps = int("time.M").unwrap_or(64);
    if steps < 2 || steps % 2 != 0 {
        bad(errors, "time.M", format!("{steps} must be even and at least 2"));
    }
    let nu = float("nu").unwrap_or(1.0);
    if nu <= 0.0 {
        bad(errors, "nu", "must be positive");
    }
    let seed = int("seed").unwrap_or(0);
    if seed < 0 {
        bad(errors, "seed", "must be nonnegative");
    }
    let threads = int("threads").unwrap_or(1);
    if !(1..=256).contains(&threads) {
        bad(errors, "threads", format!("{threads} outside [1, 256]"));
    }
    let experiment = string("experiment").and_then(|s| {
        let e = s.parse::<Experiment>().ok();
        if e.is_none() {
            let ids: Vec<&str> = Experiment::ALL.iter().map(|e| e.id()).collect();
            bad(errors, "experiment", format!("`{s}` is not one of {}", ids.join(", ")));
        }
        e
    });
    let format = string("output.format").map_or(Format::Json, |s| {
        s.parse().unwrap_or_else(|_| {
            bad(errors, "output.format", format!("`{s}` is not csv or json"));
            Format::Json
        })
    });
    let params: BTreeMap<String, Value> =
        entries.iter().filter_map(|(k, v)| k.strip_prefix("params.").map(|p| (p.to_string(), v.clone()))).collect();
    let cfg = ExperimentConfig {
        n,
        length,
        t_end,
        steps: steps.max(2) as usize,
        nu,
        seed: seed.max(0) as u64,
        threads: threads.clamp(1, 256) as usize,
        experiment,
        output_dir: string("output.dir"),
        format,
        params,
        entries,
    };
    validate_params(&cfg, errors);
    cfg
}

const SPACES: [&str; 6] =
    ["fujita_kato", "lejan_sznitman", "lei_lin", "herz", "fujita_kato_local", "lejan_sznitman_local"];
const KERNELS: [&str; 6] = ["all", "heat", "heat_quarter", "calderon_4", "calderon_72", "riesz_half"];

/// Preconditions of the inner operations, checked before any compute.
fn validate_params(cfg: &ExperimentConfig, errors: &mut Vec<ConfigError>) {
    let p = |k: &str| format!("params.{k}");
    let positive = ["width", "tol", "local_T", "t_max", "beta", "c2", "lo", "hi", "w_factor"];
    for k in positive {
        if let Some(Value::Float(v)) = cfg.params.get(k) {
            if *v <= 0.0 || (k == "c2" && *v < 0.0) {
                bad(errors, &p(k), "must be positive");
            }
        }
    }
    if let Some(Value::Float(v)) = cfg.params.get("amplitude") {
        if *v < 0.0 {
            bad(errors, &p("amplitude"), "must be nonnegative");
        }
    }
    for k in ["n_max", "steps", "samples", "kmax"] {
        if let Some(Value::Int(v)) = cfg.params.get(k) {
            if *v < 1 {
                bad(errors, &p(k), "must be at least 1");
            }
        }
    }
    if let Some(Value::Int(k)) = cfg.params.get("kmax") {
        if *k >= cfg.n as i64 / 2 {
            bad(errors, &p("kmax"), format!("{k} must be below n/2 = {}", cfg.n / 2));
        }
    }
    if let Some(Value::Int(m)) = cfg.params.get("length") {
        if *m < 12 || m % 2 != 0 {
            bad(errors, &p("length"), "1D signal length must be even and at least 12");
        }
    }
    if let Some(s) = cfg.string("space") {
        if !SPACES.contains(&s) {
            bad(errors, &p("space"), format!("`{s}` is not one of {}", SPACES.join(", ")));
        }
        if s == "herz" && cfg.list("herz").is_none_or(|h| h.len() != 3) {
            bad(errors, &p("herz"), "herz space needs `params.herz = s, p, q`");
        }
    }
    if let Some(h) = cfg.list("herz") {
        if h.len() != 3 || h[1] < 1.0 || h[2] < 1.0 {
            bad(errors, &p("herz"), "expected s, p, q with p, q >= 1");
        }
    }
    if let Some(f) = cfg.string("form") {
        if !["fourier_kernel", "physical_duhamel"].contains(&f) {
            bad(errors, &p("form"), format!("`{f}` is not fourier_kernel or physical_duhamel"));
        }
    }
    if let Some(k) = cfg.string("kernel") {
        if !KERNELS.contains(&k) {
            bad(errors, &p("kernel"), format!("`{k}` is not one of {}", KERNELS.join(", ")));
        }
    }
    if let Some(Value::Float(a)) = cfg.params.get("alpha") {
        if !(*a > 0.0 && *a < 3.0) {
            bad(errors, &p("alpha"), "must lie in (0, 3)");
        }
    }
    if let Some(Value::Float(v)) = cfg.params.get("p") {
        if *v <= 1.0 {
            bad(errors, &p("p"), "must exceed 1");
        }
    }
    if let Some(Value::Float(r)) = cfg.params.get("ratio") {
        if *r <= 1.0 {
            bad(errors, &p("ratio"), "must exceed 1");
        }
    }
    for k in ["t_list", "s"] {
        if let Some(v) = cfg.list(k) {
            if v.iter().any(|x| *x <= 0.0) {
                bad(errors, &p(k), "entries must be positive");
            }
        }
    }
    if let Some(r) = cfg.list("radii") {
        let half = 0.5 * cfg.length;
        if r.iter().any(|x| *x <= 0.0 || *x > half) {
            bad(errors, &p("radii"), format!("radii must lie in (0, L/2 = {half}]"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            bad(errors, &p("radii"), "radii must be strictly increasing");
        }
    }
    if let (Some(Value::Float(lo)), Some(Value::Float(hi))) = (cfg.params.get("lo"), cfg.params.get("hi")) {
        if lo >= hi {
            bad(errors, &p("hi"), "must exceed params.lo");
        }
    }
    if cfg.experiment == Some(Experiment::GevreyCheck) {
        if let Some(Value::Float(w)) = cfg.params.get("w_factor") {
            if *w < 2.0 * std::f64::consts::E {
                bad(errors, &p("w_factor"), "the Gevrey check needs W0 >= 2e |U0|");
            }
        }
    }
    if cfg.experiment == Some(Experiment::Certificate) && cfg.string("space").is_none() {
        bad(errors, &p("space"), "certificate needs a space");
    }
}
