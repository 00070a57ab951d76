//! Batch front end: one JSON config in, one CSV or JSON table out.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config error,
//! 3 domain error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance::{self, AcceptanceSettings};
use crate::defect_geometry::{self as geometry, DefectParams};
use crate::error::Error;
use crate::numerics::Quadrature;
use crate::propagator::{
    partial_wave_sum, radial_kernel, radial_propagator_closed, radial_propagator_series, winding_subpropagator,
    winding_sum, PropagatorQuery, TruncationPolicy,
};
use crate::spectrum::{self, Couplings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Geometry,
    Spectrum,
    Propagator,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Compare {
    SchrodingerCone,
}

#[derive(Debug, Parser)]
#[command(name = "defectprop", version, about = "Defect-medium spectra, propagators and their numerical checks")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Add the cone Schrödinger index and its difference (spectrum only).
    #[arg(long, value_enum)]
    pub compare: Option<Compare>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DefectConfig {
    pub gamma: f64,
    pub b: f64,
}

impl Default for DefectConfig {
    fn default() -> Self {
        DefectConfig { gamma: 0.0, b: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingsConfig {
    pub alpha: f64,
    #[serde(rename = "omega_L")]
    pub omega_l: f64,
    pub omega_0: f64,
    pub kappa: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl Default for CouplingsConfig {
    fn default() -> Self {
        let c = Couplings::default();
        CouplingsConfig {
            alpha: c.alpha,
            omega_l: c.omega_l,
            omega_0: c.omega_0,
            kappa: c.kappa,
            hbar: c.hbar,
            mass: c.mass,
        }
    }
}

impl From<CouplingsConfig> for Couplings {
    fn from(c: CouplingsConfig) -> Self {
        Couplings {
            alpha: c.alpha,
            omega_l: c.omega_l,
            omega_0: c.omega_0,
            kappa: c.kappa,
            hbar: c.hbar,
            mass: c.mass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub r_grid: Vec<f64>,
    pub gauss_bonnet_nodes: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            r_grid: vec![0.5, 1.0, 2.0, 4.0],
            gauss_bonnet_nodes: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub n_max: usize,
    pub m_range: (i64, i64),
    pub k: f64,
    pub grouping_tol: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            n_max: 4,
            m_range: (-3, 3),
            k: 0.0,
            grouping_tol: spectrum::DEFAULT_GROUPING_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagatorConfig {
    pub points: Vec<PointConfig>,
    /// Euclidean times τ_E.
    pub tau: Vec<f64>,
    pub k: f64,
    /// Partial waves m sampled as R_m (closed form and series).
    pub channels: Vec<i64>,
    /// Winding numbers n sampled as K̃_n.
    pub windings: Vec<i64>,
    /// Gauge α′ of the winding expansion; defaults to −α.
    pub alpha_prime: Option<f64>,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        PropagatorConfig {
            points: vec![PointConfig {
                r1: 0.8,
                theta1: 0.3,
                r2: 1.3,
                theta2: 1.3,
            }],
            tau: vec![0.2, 0.7, 2.0],
            k: 0.0,
            channels: vec![0, 1],
            windings: vec![0, 1],
            alpha_prime: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
    /// Significant digits, 1..=17.
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub defect: DefectConfig,
    pub couplings: CouplingsConfig,
    pub truncation: TruncationPolicy,
    pub geometry: GeometryConfig,
    pub spectrum: SpectrumConfig,
    pub propagator: PropagatorConfig,
    pub verify: AcceptanceSettings,
    pub output: OutputConfig,
}

pub const DEFAULT_PRECISION: usize = 17;

/// A config that failed to parse or violates a numeric constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted field path, or "line L column C" for syntax errors.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at {}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(location: &str, err: impl fmt::Display) -> ConfigError {
    ConfigError {
        location: location.to_string(),
        message: err.to_string(),
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn check_all(location: &str, values: &[f64], ok: impl Fn(f64) -> bool, need: &str) -> Result<(), ConfigError> {
    match values.iter().position(|&v| !ok(v)) {
        Some(i) => Err(field_error(&format!("{location}[{i}]"), format!("{} must be {need}", values[i]))),
        None => Ok(()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.defect_params()?;
        Couplings::from(self.couplings)
            .validate()
            .map_err(|e| field_error("couplings", e))?;
        self.truncation.validate().map_err(|e| field_error("truncation", e))?;

        let positive = |v: f64| v > 0.0 && v.is_finite();
        check_all("geometry.r_grid", &self.geometry.r_grid, positive, "positive")?;
        if self.geometry.gauss_bonnet_nodes == 0 {
            return Err(field_error("geometry.gauss_bonnet_nodes", "must be >= 1"));
        }

        let s = &self.spectrum;
        if s.m_range.0 > s.m_range.1 {
            return Err(field_error("spectrum.m_range", "lower end exceeds upper end"));
        }
        if !s.k.is_finite() {
            return Err(field_error("spectrum.k", "must be finite"));
        }
        if !positive(s.grouping_tol) {
            return Err(field_error("spectrum.grouping_tol", "must be positive"));
        }

        let p = &self.propagator;
        for (i, pt) in p.points.iter().enumerate() {
            PropagatorQuery::new(pt.r1, pt.theta1, pt.r2, pt.theta2, 1.0, 0.0)
                .map_err(|e| field_error(&format!("propagator.points[{i}]"), e))?;
        }
        check_all("propagator.tau", &p.tau, positive, "positive")?;
        if !p.k.is_finite() || !p.alpha_prime.unwrap_or(0.0).is_finite() {
            return Err(field_error("propagator", "k and alpha_prime must be finite"));
        }

        let v = &self.verify;
        if v.fd_points < 100 {
            return Err(field_error("verify.fd_points", "must be >= 100"));
        }
        if let Some(r) = v.fd_r_max {
            if !positive(r) {
                return Err(field_error("verify.fd_r_max", "must be positive"));
            }
        }
        check_all("verify.sigmas", &v.sigmas, positive, "positive")?;
        check_all("verify.kappas", &v.kappas, |x| x >= 0.0 && x.is_finite(), ">= 0")?;
        check_all("verify.xis", &v.xis, f64::is_finite, "finite")?;
        if v.m_range.0 > v.m_range.1 {
            return Err(field_error("verify.m_range", "lower end exceeds upper end"));
        }

        if let Some(p) = self.output.precision {
            if !(1..=17).contains(&p) {
                return Err(field_error("output.precision", format!("{p} is not in 1..=17")));
            }
        }
        Ok(())
    }

    pub fn defect_params(&self) -> Result<DefectParams, ConfigError> {
        DefectParams::new(self.defect.gamma, self.defect.b).map_err(|e| field_error("defect", e))
    }

    pub fn precision(&self) -> usize {
        self.output.precision.unwrap_or(DEFAULT_PRECISION)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits >= 17 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest representation that round-trips the value rounded to
/// `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    let v = round_sig(x, digits);
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn render_csv(table: &Table, digits: usize) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    // writes into memory cannot fail
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        let fields = row.iter().map(|c| match c {
            Cell::Num(v) => format_number(*v, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        });
        w.write_record(fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

pub fn render_json(table: &Table, digits: usize) -> String {
    use serde_json::{Map, Value};
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, c)| {
                    let v = match c {
                        Cell::Num(x) => serde_json::Number::from_f64(round_sig(*x, digits))
                            .map(Value::Number)
                            .unwrap_or(Value::Null),
                        Cell::Int(i) => Value::from(*i),
                        Cell::Text(s) => Value::from(s.as_str()),
                        Cell::Empty => Value::Null,
                    };
                    (k.to_string(), v)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
    out.push('\n');
    out
}

/// Geometry report: one row per radius of the configured grid.
pub fn cmd_geometry(cfg: &RunConfig) -> Result<Table, Error> {
    let d = DefectParams::new(cfg.defect.gamma, cfg.defect.b)?;
    let mut t = Table::new(&[
        "r",
        "sigma",
        "beta",
        "frank_x",
        "frank_y",
        "frank_z",
        "burgers_x",
        "burgers_y",
        "burgers_z",
        "curvature_coefficient",
        "k1",
        "k2",
        "gaussian_curvature",
        "mean_curvature",
        "gauss_bonnet",
        "gauss_bonnet_residual",
    ]);
    let frank = geometry::frank_vector(&d);
    let burgers = geometry::burgers_vector(&d);
    let sigma = d.sigma();
    for &r in &cfg.geometry.r_grid {
        let mut row: Vec<Cell> = vec![r.into(), sigma.into(), d.beta().into()];
        row.extend(frank.iter().chain(&burgers).map(|&v| Cell::Num(v)));
        row.push(geometry::scalar_curvature_coefficient(&d).into());
        if sigma <= 1.0 {
            let k = geometry::principal_curvatures(sigma, r)?;
            let gb = geometry::gauss_bonnet_check(sigma, r, cfg.geometry.gauss_bonnet_nodes)?;
            row.extend([k.k1, k.k2, k.gaussian, k.mean, gb, gb - std::f64::consts::TAU * sigma].map(Cell::Num));
        } else {
            // a saddle cone has no embedding as a surface of revolution
            row.extend((0..6).map(|_| Cell::from("n/a")));
        }
        t.push(row);
    }
    Ok(t)
}

/// Spectrum table sorted by energy; fall-to-centre channels are listed
/// after the levels with their status.
pub fn cmd_spectrum(cfg: &RunConfig, compare: Option<Compare>) -> Result<Table, Error> {
    let d = DefectParams::new(cfg.defect.gamma, cfg.defect.b)?;
    let c = Couplings::from(cfg.couplings);
    let s = &cfg.spectrum;
    let table = spectrum::spectrum_table_partial(&d, &c, s.k, s.n_max, s.m_range, s.grouping_tol)?;
    let mut columns = vec!["n", "m", "k", "mu", "E_transverse", "E_total", "group_id", "status"];
    if compare.is_some() {
        columns.extend(["mu_S", "delta"]);
    }
    let mut t = Table::new(&columns);
    let xi = spectrum::xi(&d, &c, s.k);
    let sigma = d.sigma();
    for (group, line) in table.lines.iter().enumerate() {
        for qn in &line.members {
            let mu = spectrum::mu_index(qn.m, xi, sigma, c.kappa)?;
            let mut row = vec![
                Cell::Int(qn.n as i64),
                Cell::Int(qn.m),
                qn.k.into(),
                mu.into(),
                spectrum::transverse_energy(qn, &d, &c)?.into(),
                spectrum::total_energy(qn, &d, &c)?.into(),
                Cell::Int(group as i64),
                "ok".into(),
            ];
            if compare.is_some() {
                let mu_s = (qn.m as f64).abs() / sigma;
                row.extend([mu_s.into(), (mu_s - mu).into()]);
            }
            t.push(row);
        }
    }
    for (m, err) in &table.excluded {
        let mut row = vec![
            Cell::Empty,
            Cell::Int(*m),
            s.k.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Text(status_of(err)),
        ];
        if compare.is_some() {
            row.extend([((*m as f64).abs() / sigma).into(), Cell::Empty]);
        }
        t.push(row);
    }
    Ok(t)
}

fn status_of(err: &Error) -> String {
    match err {
        Error::FallToCenter { .. } => "fall_to_center".into(),
        Error::TailTooLarge { .. } => "tail_too_large".into(),
        other => format!("error: {other}"),
    }
}

fn semigroup_residual(mu: f64, q: &PropagatorQuery, c: &Couplings, omega: f64) -> Result<f64, Error> {
    let half = 0.5 * q.tau_e();
    let k = |a: f64, b: f64, t: f64| radial_kernel(mu, a, b, t, omega, c.hbar, c.mass);
    let whole = k(q.r2, q.r1, q.tau_e())?;
    let mut failure = None;
    let scale = if omega > 0.0 { (c.hbar / (c.mass * omega)).sqrt() } else { 1.0 };
    let lhs = Quadrature::new(1e-10).integrate_to_infinity(
        |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            match k(q.r2, r, half).and_then(|a| Ok(a * k(r, q.r1, half)? * r)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        scale,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok((lhs / whole - 1.0).abs()),
    }
}

/// Samples of R_m, the partial-wave sum and winding subpropagators on
/// the configured points and Euclidean times. Each row carries a
/// consistency residual in `check` and its own status.
pub fn cmd_propagator(cfg: &RunConfig) -> Result<Table, Error> {
    let d = DefectParams::new(cfg.defect.gamma, cfg.defect.b)?;
    let c = Couplings::from(cfg.couplings);
    let p = &cfg.propagator;
    let policy = cfg.truncation;
    let omega = c.omega(d.sigma());
    let xi = spectrum::xi(&d, &c, p.k);
    let alpha_prime = p.alpha_prime.unwrap_or(-c.alpha);
    let mut t = Table::new(&[
        "tau", "r1", "theta1", "r2", "theta2", "quantity", "index", "re", "im", "check", "status",
    ]);
    for pt in &p.points {
        for &tau in &p.tau {
            let q = PropagatorQuery::new(pt.r1, pt.theta1, pt.r2, pt.theta2, tau, p.k)?;
            let head = || -> Vec<Cell> { vec![tau.into(), pt.r1.into(), pt.theta1.into(), pt.r2.into(), pt.theta2.into()] };
            let mut emit = |quantity: &str, index: Option<i64>, res: Result<(f64, f64, Option<f64>), Error>| {
                let mut row = head();
                row.push(quantity.into());
                row.push(index.map_or(Cell::Empty, Cell::Int));
                match res {
                    Ok((re, im, check)) => {
                        row.extend([re.into(), im.into(), check.map_or(Cell::Empty, Cell::Num), "ok".into()]);
                    }
                    Err(e) => {
                        row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Text(status_of(&e))]);
                    }
                }
                t.push(row);
            };
            for &m in &p.channels {
                let closed = radial_propagator_closed(m, &q, &d, &c);
                emit(
                    "radial_closed",
                    Some(m),
                    closed.clone().and_then(|v| {
                        let mu = spectrum::mu_index(m, xi, d.sigma(), c.kappa)?;
                        Ok((v, 0.0, Some(semigroup_residual(mu, &q, &c, omega)?)))
                    }),
                );
                emit(
                    "radial_series",
                    Some(m),
                    radial_propagator_series(m, &q, &d, &c, &policy)
                        .and_then(|s| Ok((s.value, 0.0, Some((s.value / closed.clone()? - 1.0).abs())))),
                );
            }
            let direct = partial_wave_sum(&q, &d, &c, policy.m_max);
            emit(
                "transverse",
                None,
                direct.clone().map(|s| (s.value.re, s.value.im, Some(s.tail_estimate / s.value.norm()))),
            );
            for &n in &p.windings {
                emit(
                    "winding",
                    Some(n),
                    winding_subpropagator(n, &q, &d, &c, alpha_prime, &policy).map(|v| (v.re, v.im, None)),
                );
            }
            if !p.windings.is_empty() {
                let total = winding_sum(&q, &d, &c, alpha_prime, &policy).and_then(|w| {
                    let k = direct?.value;
                    Ok((w.re, w.im, Some((w - k).norm() / k.norm())))
                });
                emit("winding_sum", None, total);
            }
        }
    }
    Ok(t)
}

/// Acceptance suite with the config's overrides.
pub fn cmd_verify(cfg: &RunConfig) -> (bool, Table, Vec<String>) {
    let outcomes = acceptance::run_all(&cfg.verify);
    let mut t = Table::new(&["id", "name", "status", "metric", "tolerance", "detail"]);
    let mut lines = Vec::new();
    for o in &outcomes {
        lines.push(o.line());
        t.push(vec![
            Cell::Int(o.id as i64),
            Cell::Text(o.name.clone()),
            (if o.passed { "pass" } else { "fail" }).into(),
            o.metric.into(),
            o.tolerance.into(),
            Cell::Text(o.detail.clone()),
        ]);
    }
    (outcomes.iter().all(|o| o.passed), t, lines)
}

fn write_output(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return EXIT_CONFIG;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", args.config.display());
            return EXIT_CONFIG;
        }
    };
    if args.compare.is_some() && args.command != Command::Spectrum {
        eprintln!("--compare applies to the spectrum command only");
        return EXIT_CONFIG;
    }
    let format = args.format.or(cfg.output.format).unwrap_or_default();
    let path = args.output.clone().or_else(|| cfg.output.path.clone());
    let digits = cfg.precision();

    let (table, code) = match args.command {
        Command::Geometry => (cmd_geometry(&cfg), EXIT_OK),
        Command::Spectrum => (cmd_spectrum(&cfg, args.compare), EXIT_OK),
        Command::Propagator => (cmd_propagator(&cfg), EXIT_OK),
        Command::Verify => {
            let (ok, table, lines) = cmd_verify(&cfg);
            for l in &lines {
                println!("{l}");
            }
            if path.is_none() {
                return if ok { EXIT_OK } else { EXIT_VERIFY_FAILED };
            }
            (Ok(table), if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    };
    let table = match table {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_DOMAIN;
        }
    };
    let body = match format {
        Format::Csv => render_csv(&table, digits),
        Format::Json => render_json(&table, digits),
    };
    if let Err(e) = write_output(path.as_deref(), &body) {
        eprintln!("cannot write output: {e}");
        return EXIT_DOMAIN;
    }
    code
}
