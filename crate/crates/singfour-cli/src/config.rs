use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use singfour::problems::{ProblemName, DEFAULT_EPSILON, DEFAULT_KELVIN_Z, DEFAULT_LAMBDA};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// `None` for command-line overrides and whole-config checks.
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError { line, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Classify,
    Asym,
    Oracle,
    Compare,
    Field,
    Fronts,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Classify => "classify",
            Mode::Asym => "asym",
            Mode::Oracle => "oracle",
            Mode::Compare => "compare",
            Mode::Field => "field",
            Mode::Fronts => "fronts",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Mode::Classify, Mode::Asym, Mode::Oracle, Mode::Compare, Mode::Field, Mode::Fronts]
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode '{s}'"))
    }
}

/// Which value `compare` measures the asymptotics against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Closed form or 1D-contour product where one exists, quadrature otherwise.
    Auto,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n1: usize,
    pub n2: usize,
    pub z1: (f64, f64),
    pub z2: (f64, f64),
}

/// Overrides of the problem's default quadrature.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadConfig {
    pub radius: Option<f64>,
    pub nodes: Option<usize>,
    pub panel_order: Option<usize>,
    pub taper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub problem: ProblemName,
    pub lambdas: Vec<f64>,
    /// Wake observation point `(z1, z2, τ)`.
    pub z: [f64; 3],
    pub epsilon: f64,
    pub grid: GridConfig,
    pub quadrature: QuadConfig,
    pub reference: Reference,
    pub out: PathBuf,
    pub timing: bool,
    /// Multiplies wake field values on output.
    pub scale: f64,
}

const KEYS: [&str; 17] = [
    "mode",
    "problem",
    "lambda",
    "z",
    "tau",
    "epsilon",
    "grid",
    "z1_range",
    "z2_range",
    "radius",
    "nodes",
    "panel_order",
    "taper",
    "reference",
    "out",
    "timing",
    "scale",
];

/// One `key = value` assignment and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: Option<usize>,
}

/// Splits config text into assignments, in order.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Some(i + 1);
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected 'key = value', got '{body}'")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::at(line, format!("empty key or value in '{body}'")));
        }
        if !KEYS.contains(&k) {
            return Err(ConfigError::at(line, format!("unknown key '{k}'")));
        }
        out.push(Entry { key: k.to_string(), value: v.to_string(), line });
    }
    Ok(out)
}

/// `--key value` (or `--key=value`) pairs.
pub fn parse_overrides<S: AsRef<str>>(args: &[S]) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    let mut it = args.iter().map(|s| s.as_ref());
    while let Some(a) = it.next() {
        let k = a
            .strip_prefix("--")
            .ok_or_else(|| ConfigError::at(None, format!("expected '--key value', got '{a}'")))?;
        let (k, v) = match k.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| ConfigError::at(None, format!("missing value for --{k}")))?;
                (k.to_string(), v.to_string())
            }
        };
        let k = k.replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(ConfigError::at(None, format!("unknown key '{k}'")));
        }
        out.push(Entry { key: k, value: v, line: None });
    }
    Ok(out)
}

fn number(e: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = e
        .value
        .parse()
        .map_err(|_| ConfigError::at(e.line, format!("{}: '{}' is not a number", e.key, e.value)))?;
    if !v.is_finite() {
        return Err(ConfigError::at(e.line, format!("{}: value must be finite", e.key)));
    }
    Ok(v)
}

fn count(e: &Entry, s: &str) -> Result<usize, ConfigError> {
    s.trim()
        .parse()
        .map_err(|_| ConfigError::at(e.line, format!("{}: '{s}' is not a count", e.key)))
}

fn list(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    e.value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ConfigError::at(e.line, format!("{}: '{s}' is not a number", e.key)))
        })
        .collect()
}

fn range(e: &Entry) -> Result<(f64, f64), ConfigError> {
    match list(e)?[..] {
        [a, b] if a < b => Ok((a, b)),
        _ => Err(ConfigError::at(e.line, format!("{}: expected 'lo, hi' with lo < hi", e.key))),
    }
}

fn boolean(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => Err(ConfigError::at(e.line, format!("{}: '{v}' is not a boolean", e.key))),
    }
}

impl RunConfig {
    /// Builds a config from assignments; later keys win.
    pub fn from_entries(entries: &[Entry]) -> Result<Self, ConfigError> {
        let mut last: BTreeMap<&str, &Entry> = BTreeMap::new();
        for e in entries {
            last.insert(e.key.as_str(), e);
        }
        let get = |k: &str| last.get(k).copied();

        let problem = match get("problem") {
            Some(e) => e.value.parse::<ProblemName>().map_err(|err| ConfigError::at(e.line, err.to_string()))?,
            None => return Err(ConfigError::at(None, "no problem given")),
        };
        let mode = match get("mode") {
            Some(e) => e.value.parse::<Mode>().map_err(|m| ConfigError::at(e.line, m))?,
            None => Mode::Asym,
        };
        let lambdas = match get("lambda") {
            Some(e) => {
                let l = list(e)?;
                if let Some(bad) = l.iter().find(|&&v| v <= 0.0) {
                    return Err(ConfigError::at(e.line, format!("lambda must be positive, got {bad}")));
                }
                l
            }
            None => vec![DEFAULT_LAMBDA],
        };
        let mut z = DEFAULT_KELVIN_Z;
        if let Some(e) = get("z") {
            match list(e)?[..] {
                [a, b, c] => z = [a, b, c],
                _ => return Err(ConfigError::at(e.line, "z: expected three numbers")),
            }
        }
        if let Some(e) = get("tau") {
            z[2] = number(e)?;
        }
        let epsilon = match get("epsilon") {
            Some(e) => {
                let v = number(e)?;
                if !(v > 0.0 && v <= 1.0) {
                    return Err(ConfigError::at(e.line, "epsilon must lie in (0, 1]"));
                }
                v
            }
            None => DEFAULT_EPSILON,
        };
        let mut grid = GridConfig { n1: 141, n2: 81, z1: (-2.0, 12.0), z2: (-4.0, 4.0) };
        if let Some(e) = get("grid") {
            let (a, b) = e.value.split_once('x').unwrap_or((&e.value, &e.value));
            grid.n1 = count(e, a)?;
            grid.n2 = count(e, b)?;
        }
        if let Some(e) = get("z1_range") {
            grid.z1 = range(e)?;
        }
        if let Some(e) = get("z2_range") {
            grid.z2 = range(e)?;
        }
        let mut quadrature = QuadConfig::default();
        if let Some(e) = get("radius") {
            quadrature.radius = Some(number(e)?);
        }
        if let Some(e) = get("nodes") {
            quadrature.nodes = Some(count(e, &e.value)?);
        }
        if let Some(e) = get("panel_order") {
            quadrature.panel_order = Some(count(e, &e.value)?);
        }
        if let Some(e) = get("taper") {
            quadrature.taper = Some(number(e)?);
        }
        let reference = match get("reference") {
            None => Reference::Auto,
            Some(e) => match e.value.as_str() {
                "auto" => Reference::Auto,
                "quadrature" => Reference::Quadrature,
                v => return Err(ConfigError::at(e.line, format!("reference: unknown value '{v}'"))),
            },
        };
        let out = get("out").map_or_else(|| PathBuf::from("singfour"), |e| PathBuf::from(&e.value));
        let timing = get("timing").map(boolean).transpose()?.unwrap_or(false);
        let scale = get("scale").map(number).transpose()?.unwrap_or(1.0);

        let config = RunConfig {
            mode,
            problem,
            lambdas,
            z,
            epsilon,
            grid,
            quadrature,
            reference,
            out,
            timing,
            scale,
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::at(None, m.to_string()));
        if matches!(self.mode, Mode::Field | Mode::Fronts) {
            if self.problem != ProblemName::Kelvin {
                return fail("field and fronts modes need problem = kelvin");
            }
            if self.grid.n1 == 0 || self.grid.n2 == 0 {
                return fail("grid must be nonempty");
            }
            if self.lambdas.len() != 1 {
                return fail("field and fronts modes take a single lambda");
            }
        }
        Ok(())
    }
}

/// Parses config text alone.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_entries(&parse_entries(text)?)
}

/// Parses config text, then applies command-line overrides.
pub fn parse_with_overrides<S: AsRef<str>>(text: &str, args: &[S]) -> Result<RunConfig, ConfigError> {
    let mut entries = parse_entries(text)?;
    entries.extend(parse_overrides(args)?);
    RunConfig::from_entries(&entries)
}
