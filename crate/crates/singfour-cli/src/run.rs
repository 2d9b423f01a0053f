use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;

use singfour::asym::{sum_asymptotics, AsymptoticTerm, SumMode};
use singfour::detect::{detect_all, DetectOptions};
use singfour::kelvin::{
    field_at, field_map, kelvin_wave_terms, oracle_spec_for, prefactor, render_wavefronts, transient_term, GridSpec,
    KelvinParams,
};
use singfour::oracle::{kelvin_oracle, quad_deformed_3d, KelvinOracleSpec, QuadResult, QuadratureSpec, Window};
use singfour::problems::{self, default_quadrature, reference_value, ProblemName};
use singfour::ProblemSpec;

use crate::config::{ConfigError, Mode, Reference, RunConfig};
use crate::output::{num, opt_num, write_pgm, Csv};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numeric(singfour::Error),
    Io(io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RunError::Config(_) => "ConfigError",
            RunError::Numeric(e) => e.name(),
            RunError::Io(_) => "IoError",
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numeric(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<singfour::Error> for RunError {
    fn from(e: singfour::Error) -> Self {
        RunError::Numeric(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type RunResult<T> = Result<T, RunError>;

/// One line of the `compare` table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub lambda: f64,
    pub asym: Complex64,
    pub oracle: Complex64,
    pub runtime: f64,
}

impl ComparisonRow {
    /// `|asym − oracle| / |oracle|`, `None` for a zero oracle.
    pub fn relative_error(&self) -> Option<f64> {
        let d = self.oracle.norm();
        (d > 0.0).then(|| (self.asym - self.oracle).norm() / d)
    }
}

fn output_path(config: &RunConfig, suffix: &str) -> PathBuf {
    let mut name = config.out.file_name().map(|s| s.to_os_string()).unwrap_or_else(|| "singfour".into());
    name.push(format!("_{suffix}"));
    config.out.with_file_name(name)
}

fn prepare(path: &Path) -> io::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => std::fs::create_dir_all(dir),
        _ => Ok(()),
    }
}

pub fn build_problem(config: &RunConfig) -> singfour::Result<ProblemSpec> {
    let eps = config.epsilon;
    match config.problem {
        ProblemName::GaussianSp => problems::gaussian_sp(),
        ProblemName::PoleSp => problems::pole_sp(eps),
        ProblemName::DoubleCross => problems::double_cross(eps),
        ProblemName::TripleCross => problems::triple_cross(eps),
        ProblemName::Cone => problems::cone(eps),
        ProblemName::Kelvin => {
            let [z1, z2, tau] = config.z;
            singfour::kelvin::kelvin_problem(z1, z2, tau)
        }
    }
}

pub fn quadrature_spec(config: &RunConfig) -> RunResult<QuadratureSpec> {
    let mut spec = default_quadrature(config.problem);
    let q = &config.quadrature;
    if let Some(r) = q.radius {
        spec.radius = r;
    }
    if let Some(n) = q.nodes {
        spec.nodes = n;
    }
    if let Some(p) = q.panel_order {
        spec.panel_order = p;
    }
    if let Some(t) = q.taper {
        spec.window = Window::Cosine { fraction: t };
    }
    spec.validate().map_err(|e| ConfigError { line: None, message: e.to_string() })?;
    Ok(spec)
}

pub fn wake_oracle_spec(config: &RunConfig) -> KelvinOracleSpec {
    let [z1, z2, tau] = config.z;
    let mut spec = oracle_spec_for(z1, z2, tau);
    if let Some(r) = config.quadrature.radius {
        spec.radius = r;
        spec.radius2 = None;
    }
    if let Some(p) = config.quadrature.panel_order {
        spec.panel_order = p;
    }
    if let Some(t) = config.quadrature.taper {
        spec.window = Window::Smooth { fraction: t };
    }
    spec
}

/// Quadrature oracle at one Λ.
pub fn oracle_value(config: &RunConfig, problem: &ProblemSpec, lambda: f64) -> RunResult<QuadResult> {
    if config.problem == ProblemName::Kelvin {
        let [z1, z2, tau] = config.z;
        return Ok(kelvin_oracle(z1, z2, tau, lambda, &wake_oracle_spec(config))?);
    }
    Ok(quad_deformed_3d(problem, lambda, &quadrature_spec(config)?)?)
}

/// Reference for `compare`.
pub fn reference(config: &RunConfig, problem: &ProblemSpec, lambda: f64) -> RunResult<Complex64> {
    if config.reference == Reference::Auto {
        if let Some(v) = reference_value(config.problem, lambda)? {
            return Ok(v);
        }
    }
    let v = oracle_value(config, problem, lambda)?.value;
    // the wake field is the real part
    Ok(if config.problem == ProblemName::Kelvin { Complex64::new(v.re, 0.0) } else { v })
}

struct TermRow {
    kind: String,
    location: Option<[f64; 3]>,
    term: Option<AsymptoticTerm>,
    value: Complex64,
}

fn wake_terms(config: &RunConfig, lambda: f64) -> RunResult<(Vec<TermRow>, Complex64)> {
    let [z1, z2, tau] = config.z;
    let params = KelvinParams::new(z1, z2.abs(), tau, lambda)?;
    let pre = prefactor();
    let mut rows = Vec::new();
    let mut push = |kind: &str, t: AsymptoticTerm| {
        let v = *t.source.location.vector();
        rows.push(TermRow {
            kind: kind.to_string(),
            location: Some([v.x, v.y, v.z]),
            value: pre * t.eval(lambda),
            term: Some(t),
        });
    };
    if params.in_wedge() {
        for t in kelvin_wave_terms(&params)? {
            push("crossing", t);
        }
    }
    if let Some(t) = transient_term(&params)? {
        push("transient", t);
    }
    let total = field_at(z1, z2, tau, lambda)?.value.unwrap_or_default() * config.scale;
    Ok((rows, total))
}

/// Asymptotic estimate at one Λ with its terms.
fn asym_terms(config: &RunConfig, problem: &ProblemSpec, lambda: f64) -> RunResult<(Vec<TermRow>, Complex64)> {
    if config.problem == ProblemName::Kelvin {
        return wake_terms(config, lambda);
    }
    let detection = detect_all(problem, &DetectOptions::default())?;
    let sum = sum_asymptotics(problem, &detection, lambda, SumMode::Complex)?;
    let rows = sum
        .terms
        .into_iter()
        .map(|t| {
            let v = *t.source.location.vector();
            TermRow {
                kind: t.source.kind.to_string(),
                location: Some([v.x, v.y, v.z]),
                value: problem.prefactor * t.eval(lambda),
                term: Some(t),
            }
        })
        .collect();
    Ok((rows, sum.estimate))
}

fn run_classify(config: &RunConfig, problem: &ProblemSpec) -> RunResult<Vec<PathBuf>> {
    let detection = detect_all(problem, &DetectOptions::default())?;
    let path = output_path(config, "classify.csv");
    let mut csv = Csv::create(
        &path,
        &["kind", "x1", "x2", "x3", "components", "alphas", "contributes", "reason", "witness1", "witness2", "witness3", "flags"],
    )?;
    for sp in &detection.points {
        let p = sp.location.vector();
        let w = sp.witness.map(|w| [Some(w.x), Some(w.y), Some(w.z)]).unwrap_or([None; 3]);
        let verdict = sp.verdict.as_ref();
        csv.row(&[
            sp.kind.to_string(),
            num(p.x),
            num(p.y),
            num(p.z),
            sp.labels.join(";"),
            sp.alphas.iter().map(|&a| num(a)).collect::<Vec<_>>().join(";"),
            sp.contributes().to_string(),
            verdict.map(|v| v.reason.clone()).unwrap_or_default(),
            opt_num(w[0]),
            opt_num(w[1]),
            opt_num(w[2]),
            sp.flags.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(";"),
        ])?;
    }
    csv.finish()?;
    Ok(vec![path])
}

fn run_asym(config: &RunConfig, problem: &ProblemSpec) -> RunResult<Vec<PathBuf>> {
    let path = output_path(config, "asym.csv");
    let mut csv = Csv::create(
        &path,
        &["lambda", "kind", "x1", "x2", "x3", "coeff_re", "coeff_im", "power", "phase0", "value_re", "value_im"],
    )?;
    for &lambda in &config.lambdas {
        let (rows, total) = asym_terms(config, problem, lambda)?;
        let total_row = TermRow { kind: "total".into(), location: None, term: None, value: total };
        for r in rows.iter().chain([&total_row]) {
            let loc = r.location.map(|l| l.map(Some)).unwrap_or([None; 3]);
            let t = r.term.as_ref();
            csv.row(&[
                num(lambda),
                r.kind.clone(),
                opt_num(loc[0]),
                opt_num(loc[1]),
                opt_num(loc[2]),
                opt_num(t.map(|t| t.coeff.re)),
                opt_num(t.map(|t| t.coeff.im)),
                opt_num(t.map(|t| t.power)),
                opt_num(t.map(|t| t.phase0)),
                num(r.value.re),
                num(r.value.im),
            ])?;
        }
    }
    csv.finish()?;
    Ok(vec![path])
}

fn with_timing(mut header: Vec<&'static str>, timing: bool) -> Vec<&'static str> {
    if timing {
        header.push("runtime_s");
    }
    header
}

fn run_oracle(config: &RunConfig, problem: &ProblemSpec) -> RunResult<Vec<PathBuf>> {
    let path = output_path(config, "oracle.csv");
    let mut csv = Csv::create(&path, &with_timing(vec!["lambda", "value_re", "value_im", "error"], config.timing))?;
    for &lambda in &config.lambdas {
        let start = Instant::now();
        let r = oracle_value(config, problem, lambda)?;
        let mut row = vec![num(lambda), num(r.value.re), num(r.value.im), num(r.error)];
        if config.timing {
            row.push(num(start.elapsed().as_secs_f64()));
        }
        csv.row(&row)?;
    }
    csv.finish()?;
    Ok(vec![path])
}

/// Asymptotics against the reference at every configured Λ.
pub fn compare_rows(config: &RunConfig) -> RunResult<Vec<ComparisonRow>> {
    let problem = build_problem(config)?;
    config
        .lambdas
        .iter()
        .map(|&lambda| {
            let start = Instant::now();
            let (_, asym) = asym_terms(config, &problem, lambda)?;
            let mut oracle = reference(config, &problem, lambda)?;
            if config.problem == ProblemName::Kelvin {
                oracle *= config.scale;
            }
            Ok(ComparisonRow { lambda, asym, oracle, runtime: start.elapsed().as_secs_f64() })
        })
        .collect()
}

fn run_compare(config: &RunConfig) -> RunResult<Vec<PathBuf>> {
    let path = output_path(config, "compare.csv");
    let header = with_timing(vec!["lambda", "asym_re", "asym_im", "oracle_re", "oracle_im", "rel_error"], config.timing);
    let mut csv = Csv::create(&path, &header)?;
    for r in compare_rows(config)? {
        let mut row = vec![
            num(r.lambda),
            num(r.asym.re),
            num(r.asym.im),
            num(r.oracle.re),
            num(r.oracle.im),
            opt_num(r.relative_error()),
        ];
        if config.timing {
            row.push(num(r.runtime));
        }
        csv.row(&row)?;
    }
    csv.finish()?;
    Ok(vec![path])
}

fn grid_spec(config: &RunConfig) -> singfour::Result<GridSpec> {
    let g = &config.grid;
    GridSpec::new(g.z1, g.z2, g.n1, g.n2)
}

fn run_field(config: &RunConfig) -> RunResult<Vec<PathBuf>> {
    let grid = grid_spec(config)?;
    let (tau, lambda) = (config.z[2], config.lambdas[0]);
    let map = field_map(&grid, tau, lambda)?;
    let csv_path = output_path(config, "field.csv");
    let mut csv = Csv::create(&csv_path, &["z1", "z2", "value", "mask"])?;
    let value = |i: usize, j: usize| map.at(i, j).value.map(|v| v.re * config.scale);
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            csv.row(&[num(grid.z1_at(i)), num(grid.z2_at(j)), opt_num(value(i, j)), map.at(i, j).mask.to_string()])?;
        }
    }
    csv.finish()?;
    // grey levels use the largest magnitude on the grid
    let peak = map.samples.iter().filter_map(|s| s.value).map(|v| v.re.abs()).fold(0.0, f64::max);
    let pgm_path = output_path(config, "field.pgm");
    let top = grid.n2 - 1;
    write_pgm(&pgm_path, grid.n1, grid.n2, |i, j| {
        map.at(i, top - j).value.map(|v| if peak > 0.0 { v.re / peak } else { 0.0 })
    })?;
    Ok(vec![csv_path, pgm_path])
}

fn run_fronts(config: &RunConfig) -> RunResult<Vec<PathBuf>> {
    let grid = grid_spec(config)?;
    let (tau, lambda) = (config.z[2], config.lambdas[0]);
    let images = [
        render_wavefronts(&grid, tau, lambda, 1)?,
        render_wavefronts(&grid, tau, lambda, 2)?,
    ];
    let csv_path = output_path(config, "fronts.csv");
    let mut csv = Csv::create(&csv_path, &["z1", "z2", "family1", "family2"])?;
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            csv.row(&[
                num(grid.z1_at(i)),
                num(grid.z2_at(j)),
                opt_num(images[0].at(i, j)),
                opt_num(images[1].at(i, j)),
            ])?;
        }
    }
    csv.finish()?;
    let mut out = vec![csv_path];
    let top = grid.n2 - 1;
    for (k, img) in images.iter().enumerate() {
        let path = output_path(config, &format!("fronts{}.pgm", k + 1));
        write_pgm(&path, grid.n1, grid.n2, |i, j| img.at(i, top - j))?;
        out.push(path);
    }
    Ok(out)
}

/// Runs the configured mode and returns the files written.
pub fn run(config: &RunConfig) -> RunResult<Vec<PathBuf>> {
    prepare(&output_path(config, "x"))?;
    let problem = build_problem(config)?;
    log::info!("{} on {}", config.mode.as_str(), config.problem);
    match config.mode {
        Mode::Classify => run_classify(config, &problem),
        Mode::Asym => run_asym(config, &problem),
        Mode::Oracle => run_oracle(config, &problem),
        Mode::Compare => run_compare(config),
        Mode::Field => run_field(config),
        Mode::Fronts => run_fronts(config),
    }
}
