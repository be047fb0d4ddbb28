//! The `hids` command line.
//!
//! Every subcommand validates its flags, evaluates, and emits a list of
//! records as a table, CSV or a JSON object
//! `{command, config, results, meta}`. Exit codes: 0 success, 1 selftest
//! failure, 2 invalid input, 3 non-convergence (the best value is still
//! emitted, with `converged = false`).

mod config;
mod output;
mod selftest;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

pub use config::{FileConfig, FlagOverrides, RunConfig, CONFIG_ENV};
pub use output::{render_csv, render_json, render_plot_data, render_table, Format, Meta, Record, ResultRecord};
pub use selftest::{selftest, Check};

use crate::error::Error;
use crate::green::{
    folland_constant_with_error, folland_integral_representation, folland_solution, green_kernel_closed_reduced,
    green_kernel_integral_reduced, verify_chain, FollandConstant,
};
use crate::ids::{dos_magnetic_jumps, gamma_coefficient, gamma_partial_sum, ids_magnetic, ids_sub, ids_sub_via_kernel};
use crate::kernels::{
    projection_kernel_magnetic, projection_kernel_magnetic_flat, resolvent_kernel_magnetic, resolvent_kernel_sub_reduced,
    resolvent_series_magnetic, resolvent_sub_via_spectral_reduced, spectral_density_kernel_sub_reduced, ComplexPoint,
    HeisenbergPoint, ReducedCoordinates,
};
use crate::numerics::{EvalResult, SeriesSpec};
use crate::weylsim::{convergence_study, discretize_magnetic_hamiltonian, landau_ids, GridSpec, Stencil};
use output::record;

/// Why a run stopped short of emitting results.
#[derive(Debug)]
pub enum CliError {
    BadParameter { flag: String, message: String },
    Config(String),
    Library(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::BadParameter { flag, message } => write!(f, "invalid value for {flag}: {message}"),
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(Error::NonConvergence { .. } | Error::DivergentTail { .. }) => 3,
            _ => 2,
        }
    }
}

fn bad(flag: &str, message: impl Into<String>) -> CliError {
    CliError::BadParameter {
        flag: flag.into(),
        message: message.into(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hids",
    version,
    about = "Integrated density of states, spectral kernels and Green kernels for the magnetic Laplacian and the Heisenberg sub-Laplacian"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML file presetting tolerances and output options (default: $HIDS_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Write an x,y CSV series for plotting.
    #[arg(long, global = true)]
    emit_plot_data: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative tolerance of the quadrature engines.
    #[arg(long, global = true, allow_hyphen_values = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    max_halfperiods: Option<usize>,
    /// Tolerance of the series engines.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_terms: Option<usize>,
}

impl GlobalArgs {
    fn overrides(&self) -> FlagOverrides {
        FlagOverrides {
            config: self.config.clone(),
            format: self.format,
            output: self.output.clone(),
            emit_plot_data: self.emit_plot_data.clone(),
            seed: self.seed,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            max_halfperiods: self.max_halfperiods,
            tol: self.tol,
            max_terms: self.max_terms,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Magnetic IDS (⌊λ⌋+n)!/(πⁿ⌊λ⌋!n!).
    IdsMagnetic(IdsMagneticArgs),
    /// Sub-Laplacian IDS γₙλⁿ.
    IdsSub(IdsSubArgs),
    /// The constant γₙ.
    Gamma(GammaArgs),
    /// Jumps of the magnetic DOS up to λ_max.
    Dos(DosArgs),
    /// Magnetic spectral projection kernel.
    KernelProjection(KernelProjectionArgs),
    /// Magnetic resolvent kernel.
    KernelResolvent(KernelResolventArgs),
    /// Sub-Laplacian spectral density kernel.
    KernelDensity(KernelDensityArgs),
    /// Sub-Laplacian resolvent kernel.
    KernelResolventSub(KernelResolventSubArgs),
    /// Closed-form Green kernel of the sub-Laplacian.
    GreenClosed(PairArgs),
    /// Green kernel from its integral over the Tricomi function.
    GreenIntegral(PairArgs),
    /// The constant of the fundamental solution.
    FollandConstant(FollandConstantArgs),
    /// Fundamental solution through its Tricomi integral representation.
    FollandRepr(FollandReprArgs),
    /// Step-by-step check of the integral-to-closed-form derivation.
    VerifyAppendix(VerifyAppendixArgs),
    /// Eigenvalue count of the discretized planar magnetic Laplacian.
    WeylCount(WeylCountArgs),
    /// Empirical IDS over several box sizes against the Landau staircase.
    WeylStudy(WeylStudyArgs),
    /// Reduced-size run of the invariant suite.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::IdsMagnetic(_) => "ids-magnetic",
            Command::IdsSub(_) => "ids-sub",
            Command::Gamma(_) => "gamma",
            Command::Dos(_) => "dos",
            Command::KernelProjection(_) => "kernel-projection",
            Command::KernelResolvent(_) => "kernel-resolvent",
            Command::KernelDensity(_) => "kernel-density",
            Command::KernelResolventSub(_) => "kernel-resolvent-sub",
            Command::GreenClosed(_) => "green-closed",
            Command::GreenIntegral(_) => "green-integral",
            Command::FollandConstant(_) => "folland-constant",
            Command::FollandRepr(_) => "folland-repr",
            Command::VerifyAppendix(_) => "verify-appendix",
            Command::WeylCount(_) => "weyl-count",
            Command::WeylStudy(_) => "weyl-study",
            Command::Selftest => "selftest",
        }
    }

    fn params(&self) -> Map<String, Value> {
        fn map<T: Serialize>(t: &T) -> Map<String, Value> {
            match serde_json::to_value(t).expect("flag structs are plain data") {
                Value::Object(m) => m,
                _ => Map::new(),
            }
        }
        match self {
            Command::IdsMagnetic(a) => map(a),
            Command::IdsSub(a) => map(a),
            Command::Gamma(a) => map(a),
            Command::Dos(a) => map(a),
            Command::KernelProjection(a) => map(a),
            Command::KernelResolvent(a) => map(a),
            Command::KernelDensity(a) => map(a),
            Command::KernelResolventSub(a) => map(a),
            Command::GreenClosed(a) | Command::GreenIntegral(a) => map(a),
            Command::FollandConstant(a) => map(a),
            Command::FollandRepr(a) => map(a),
            Command::VerifyAppendix(a) => map(a),
            Command::WeylCount(a) => map(a),
            Command::WeylStudy(a) => map(a),
            Command::Selftest => Map::new(),
        }
    }

    /// Series tolerance used when neither the config nor `--tol` sets one.
    fn default_series_tol(&self) -> f64 {
        match self {
            // The Riesz means reach ~1e-10 at best; 1e-8 keeps the default run short.
            Command::KernelResolventSub(_) => 1e-8,
            // Abel extrapolation of the Laguerre series stalls near 1e-12.
            Command::KernelResolvent(_) => 1e-10,
            _ => SeriesSpec::default().tol,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct IdsMagneticArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IdsRoute {
    ClosedForm,
    KernelDiagonal,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct IdsSubArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "closed-form")]
    route: IdsRoute,
}

#[derive(Debug, Args, Serialize)]
struct GammaArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args, Serialize)]
struct DosArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, alias = "lambda")]
    lambda_max: f64,
}

#[derive(Debug, Args, Serialize)]
struct KernelProjectionArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// First point of ℂⁿ as re,im pairs: re₁,im₁,re₂,im₂,…
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    z: Vec<f64>,
    /// Second point (default: the origin).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    w: Vec<f64>,
    /// Gaussian-weighted kernel e^{−(|z|²+|w|²)/2}Φ, constant on the diagonal.
    #[arg(long)]
    flat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MagneticRoute {
    Integral,
    Series,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct KernelResolventArgs {
    #[arg(long, allow_hyphen_values = true)]
    zeta_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    zeta_im: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    z: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    w: Vec<f64>,
    #[arg(long, value_enum, default_value = "integral")]
    route: MagneticRoute,
}

/// A pair of Heisenberg points, given either through their reduced
/// coordinates (`--n` with `--rho` or `--mu`, and `--theta`) or explicitly
/// (`--z`, `--tau`, `--w`, `--s`).
#[derive(Debug, Args, Serialize)]
struct PairArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// ρ = |z − w|².
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    /// μ = 2ρ.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    z: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    w: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct KernelDensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SubRoute {
    Integral,
    Spectral,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct KernelResolventSubArgs {
    #[arg(long, allow_hyphen_values = true)]
    zeta_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    zeta_im: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value = "integral")]
    route: SubRoute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConstantRoute {
    Quadrature,
    Consistency,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct FollandConstantArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "both")]
    route: ConstantRoute,
}

#[derive(Debug, Args, Serialize)]
struct FollandReprArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    z: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    tau: f64,
}

#[derive(Debug, Args, Serialize)]
struct VerifyAppendixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StencilArg {
    Peierls,
    CentralDifference,
}

impl From<StencilArg> for Stencil {
    fn from(s: StencilArg) -> Self {
        match s {
            StencilArg::Peierls => Stencil::Peierls,
            StencilArg::CentralDifference => Stencil::CentralDifference,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct WeylCountArgs {
    /// Field strength B.
    #[arg(short = 'B', long = "field", default_value_t = 1.0, allow_hyphen_values = true)]
    field: f64,
    /// Half-width L of the box [−L, L]².
    #[arg(short = 'L', long = "half-width", allow_hyphen_values = true)]
    half_width: f64,
    /// Interior grid points N per axis.
    #[arg(short = 'N', long = "points")]
    points: usize,
    /// One or more shifts λ, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    lambda: Vec<f64>,
    #[arg(long, value_enum, default_value = "peierls")]
    stencil: StencilArg,
}

#[derive(Debug, Args, Serialize)]
struct WeylStudyArgs {
    #[arg(short = 'B', long = "field", default_value_t = 1.0, allow_hyphen_values = true)]
    field: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    lambda: f64,
    /// Half-widths L, comma separated.
    #[arg(short = 'L', long = "half-width", value_delimiter = ',', default_values_t = [6.0, 8.0, 10.0])]
    half_width: Vec<f64>,
    /// Grid points N per axis, one per L (default: from --mesh).
    #[arg(short = 'N', long = "points", value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    points: Vec<usize>,
    /// Target mesh h; N = round(2L/h) − 1.
    #[arg(long, default_value_t = 0.1)]
    mesh: f64,
    #[arg(long, value_enum, default_value = "peierls")]
    stencil: StencilArg,
}

/// Records and optional plot series produced by one subcommand.
struct Outcome {
    results: Vec<Record>,
    plot: Option<Vec<(f64, f64)>>,
    exit_code: i32,
}

impl Outcome {
    fn new(results: Vec<Record>) -> Self {
        Self {
            results,
            plot: None,
            exit_code: 0,
        }
    }

    fn with_plot(mut self, plot: Vec<(f64, f64)>) -> Self {
        self.plot = Some(plot);
        self
    }
}

fn check_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(bad("--n", "dimension must be ≥ 1"))
    } else {
        Ok(())
    }
}

fn check_finite(flag: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(bad(flag, format!("must be finite, got {x}")))
    }
}

fn check_positive(flag: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(flag, format!("must be a finite number > 0, got {x}")))
    }
}

fn check_zeta(re: f64, im: f64) -> Result<Complex64, CliError> {
    check_finite("--zeta-im", im)?;
    if !(re < 0.0) || !re.is_finite() {
        return Err(bad("--zeta-re", format!("resolvent kernels need Re ζ < 0, got {re}")));
    }
    Ok(Complex64::new(re, im))
}

fn parse_point(flag: &str, flat: &[f64]) -> Result<ComplexPoint, CliError> {
    if flat.is_empty() || flat.len() % 2 != 0 {
        return Err(bad(flag, format!("expected re,im pairs, got {} numbers", flat.len())));
    }
    if flat.iter().any(|x| !x.is_finite()) {
        return Err(bad(flag, "coordinates must be finite"));
    }
    let coords = flat.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    ComplexPoint::new(coords).map_err(|e| bad(flag, e.to_string()))
}

/// The second point, defaulting to the origin of the first point's ℂⁿ.
fn parse_second_point(flag: &str, flat: &[f64], n: usize) -> Result<ComplexPoint, CliError> {
    if flat.is_empty() {
        return Ok(ComplexPoint::origin(n));
    }
    let w = parse_point(flag, flat)?;
    if w.dim() != n {
        return Err(bad(flag, format!("dimension {} differs from --z dimension {n}", w.dim())));
    }
    Ok(w)
}

impl PairArgs {
    fn resolve(&self) -> Result<(usize, ReducedCoordinates), CliError> {
        let explicit = !self.z.is_empty() || !self.w.is_empty() || self.tau.is_some() || self.s.is_some();
        if self.rho.is_some() || self.mu.is_some() {
            if explicit {
                return Err(bad("--rho", "give either --rho/--mu with --theta, or points --z/--tau/--w/--s"));
            }
            let n = self.n.ok_or_else(|| bad("--n", "required with --rho or --mu"))?;
            check_n(n)?;
            let rho = match (self.rho, self.mu) {
                (Some(_), Some(_)) => return Err(bad("--mu", "--rho and --mu are exclusive")),
                (Some(rho), None) => {
                    if !(rho >= 0.0) || !rho.is_finite() {
                        return Err(bad("--rho", format!("must be a finite number ≥ 0, got {rho}")));
                    }
                    rho
                }
                (None, Some(mu)) => {
                    if !(mu >= 0.0) || !mu.is_finite() {
                        return Err(bad("--mu", format!("must be a finite number ≥ 0, got {mu}")));
                    }
                    0.5 * mu
                }
                (None, None) => unreachable!(),
            };
            let theta = self.theta.unwrap_or(0.0);
            check_finite("--theta", theta)?;
            return Ok((n, ReducedCoordinates { rho, theta }));
        }
        if self.theta.is_some() {
            return Err(bad("--theta", "needs --rho or --mu; with points use --tau and --s"));
        }
        if self.z.is_empty() {
            return Err(bad("--z", "give the points (--z, optionally --tau, --w, --s) or --n with --rho/--mu"));
        }
        let z = parse_point("--z", &self.z)?;
        let n = z.dim();
        if let Some(given) = self.n {
            if given != n {
                return Err(bad("--n", format!("{given} differs from the --z dimension {n}")));
            }
        }
        let w = parse_second_point("--w", &self.w, n)?;
        let tau = self.tau.unwrap_or(0.0);
        let s = self.s.unwrap_or(0.0);
        check_finite("--tau", tau)?;
        check_finite("--s", s)?;
        let p = HeisenbergPoint::new(z, tau)?;
        let q = HeisenbergPoint::new(w, s)?;
        Ok((n, ReducedCoordinates::from_points(&p, &q)?))
    }
}

/// Columns shared by every complex-valued evaluation.
fn complex_columns(r: &mut Record, e: &EvalResult<Complex64>) {
    r.insert("value_re".into(), e.value.re.into());
    r.insert("value_im".into(), e.value.im.into());
    real_columns_tail(r, e.error_estimate, e.terms_or_nodes_used, e.converged);
}

fn real_columns(r: &mut Record, e: &EvalResult<f64>) {
    r.insert("value".into(), e.value.into());
    real_columns_tail(r, e.error_estimate, e.terms_or_nodes_used, e.converged);
}

fn real_columns_tail(r: &mut Record, error_estimate: f64, work: usize, converged: bool) {
    r.insert("error_estimate".into(), error_estimate.into());
    r.insert("work".into(), work.into());
    r.insert("converged".into(), converged.into());
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// `samples` points of f on [lo, hi].
fn sample(lo: f64, hi: f64, samples: usize, f: impl Fn(f64) -> Result<f64, Error>) -> Result<Vec<(f64, f64)>, CliError> {
    (0..samples)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            Ok((x, f(x)?))
        })
        .collect()
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<Outcome, CliError> {
    let quad = &config.quadrature;
    let series = &config.series;
    match command {
        Command::IdsMagnetic(a) => {
            check_n(a.n)?;
            check_finite("--lambda", a.lambda)?;
            let v = ids_magnetic(a.lambda, a.n)?;
            let rows = vec![record! {"lambda" => v.lambda, "n" => v.n, "value" => v.value, "route" => v.route}];
            let plot = sample(0.0, a.lambda.max(1.0), 401, |x| Ok(ids_magnetic(x, a.n)?.value))?;
            Ok(Outcome::new(rows).with_plot(plot))
        }
        Command::IdsSub(a) => {
            check_n(a.n)?;
            check_finite("--lambda", a.lambda)?;
            let mut rows = Vec::new();
            if a.route != IdsRoute::KernelDiagonal {
                let v = ids_sub(a.lambda, a.n, series)?;
                rows.push(record! {"lambda" => v.lambda, "n" => v.n, "value" => v.value, "route" => v.route});
            }
            if a.route != IdsRoute::ClosedForm {
                let v = ids_sub_via_kernel(a.lambda, a.n, series)?;
                rows.push(record! {"lambda" => v.lambda, "n" => v.n, "value" => v.value, "route" => v.route});
            }
            let gamma = gamma_coefficient(a.n, series)?.value;
            let plot = sample(0.0, a.lambda.max(1.0), 401, |x| Ok(gamma * x.max(0.0).powi(a.n as i32)))?;
            Ok(Outcome::new(rows).with_plot(plot))
        }
        Command::Gamma(a) => {
            check_n(a.n)?;
            let g = gamma_coefficient(a.n, series)?;
            let mut r = record! {"n" => a.n};
            real_columns(&mut r, &g);
            let scale = PI.powf(-(a.n as f64) - 0.5);
            let plot = (1..=14)
                .map(|k| {
                    let terms = 1usize << k;
                    (terms as f64, scale * gamma_partial_sum(a.n, terms))
                })
                .collect();
            Ok(Outcome::new(vec![r]).with_plot(plot))
        }
        Command::Dos(a) => {
            check_n(a.n)?;
            if !(a.lambda_max >= 0.0) || !a.lambda_max.is_finite() {
                return Err(bad("--lambda-max", format!("must be a finite number ≥ 0, got {}", a.lambda_max)));
            }
            let jumps = dos_magnetic_jumps(a.lambda_max, a.n)?;
            let mut cumulative = 0.0;
            let rows = jumps
                .iter()
                .map(|j| {
                    cumulative += j.weight;
                    record! {"n" => a.n, "level" => j.level, "weight" => j.weight, "cumulative" => cumulative}
                })
                .collect();
            let plot = jumps.iter().map(|j| (j.level as f64, j.weight)).collect();
            Ok(Outcome::new(rows).with_plot(plot))
        }
        Command::KernelProjection(a) => {
            check_finite("--lambda", a.lambda)?;
            let z = parse_point("--z", &a.z)?;
            let w = parse_second_point("--w", &a.w, z.dim())?;
            let (value, route) = if a.flat {
                (projection_kernel_magnetic_flat(a.lambda, &z, &w)?, "gaussian_weighted")
            } else {
                (projection_kernel_magnetic(a.lambda, &z, &w)?, "closed_form")
            };
            Ok(Outcome::new(vec![record! {
                "lambda" => a.lambda, "n" => z.dim(), "value_re" => value.re, "value_im" => value.im, "route" => route,
            }]))
        }
        Command::KernelResolvent(a) => {
            let zeta = check_zeta(a.zeta_re, a.zeta_im)?;
            let z = parse_point("--z", &a.z)?;
            let w = parse_second_point("--w", &a.w, z.dim())?;
            let mut rows = Vec::new();
            let mut push = |route: &str, e: EvalResult<Complex64>| {
                let mut r = record! {"zeta_re" => zeta.re, "zeta_im" => zeta.im, "n" => z.dim(), "route" => route};
                complex_columns(&mut r, &e);
                rows.push(r);
            };
            if a.route != MagneticRoute::Series {
                push("integral", resolvent_kernel_magnetic(zeta, &z, &w, quad)?);
            }
            if a.route != MagneticRoute::Integral {
                push("abel_series", resolvent_series_magnetic(zeta, &z, &w, series)?);
            }
            Ok(Outcome::new(rows))
        }
        Command::KernelDensity(a) => {
            check_finite("--lambda", a.lambda)?;
            let (n, rc) = a.pair.resolve()?;
            let e = spectral_density_kernel_sub_reduced(a.lambda, n, rc, series)?;
            let mut r = record! {"lambda" => a.lambda, "n" => n, "rho" => rc.rho, "theta" => rc.theta};
            real_columns(&mut r, &e);
            Ok(Outcome::new(vec![r]))
        }
        Command::KernelResolventSub(a) => {
            let zeta = check_zeta(a.zeta_re, a.zeta_im)?;
            let (n, rc) = a.pair.resolve()?;
            let mut rows = Vec::new();
            let mut push = |route: &str, e: EvalResult<Complex64>| {
                let mut r = record! {
                    "zeta_re" => zeta.re, "zeta_im" => zeta.im, "n" => n, "rho" => rc.rho, "theta" => rc.theta, "route" => route,
                };
                complex_columns(&mut r, &e);
                rows.push(r);
            };
            if a.route != SubRoute::Spectral {
                push("integral", resolvent_kernel_sub_reduced(zeta, n, rc, quad)?);
            }
            if a.route != SubRoute::Integral {
                push("spectral", resolvent_sub_via_spectral_reduced(zeta, n, rc, series, quad)?);
            }
            Ok(Outcome::new(rows))
        }
        Command::GreenClosed(pair) => {
            let (n, rc) = pair.resolve()?;
            let value = green_kernel_closed_reduced(n, rc)?;
            Ok(Outcome::new(vec![record! {
                "n" => n, "rho" => rc.rho, "mu" => rc.mu(), "theta" => rc.theta, "value" => value,
            }]))
        }
        Command::GreenIntegral(pair) => {
            let (n, rc) = pair.resolve()?;
            let e = green_kernel_integral_reduced(n, rc.mu(), rc.theta, quad)?;
            let closed = green_kernel_closed_reduced(n, rc)?;
            let mut r = record! {"n" => n, "rho" => rc.rho, "mu" => rc.mu(), "theta" => rc.theta};
            real_columns(&mut r, &e);
            r.insert("closed_form".into(), closed.into());
            r.insert("rel_diff".into(), relative(e.value, closed).into());
            Ok(Outcome::new(vec![r]))
        }
        Command::FollandConstant(a) => {
            check_n(a.n)?;
            let consistent = FollandConstant::green_kernel_consistent(a.n)?;
            let mut rows = Vec::new();
            if a.route != ConstantRoute::Consistency {
                let (c, err) = folland_constant_with_error(a.n, quad)?;
                rows.push(record! {
                    "n" => a.n, "route" => c.route, "value" => c.value, "error_estimate" => err,
                    "ratio_to_consistent" => c.value / consistent.value,
                });
            }
            if a.route != ConstantRoute::Quadrature {
                rows.push(record! {
                    "n" => a.n, "route" => consistent.route, "value" => consistent.value, "error_estimate" => 0.0,
                    "ratio_to_consistent" => 1.0,
                });
            }
            Ok(Outcome::new(rows))
        }
        Command::FollandRepr(a) => {
            let z = parse_point("--z", &a.z)?;
            check_finite("--tau", a.tau)?;
            let n = z.dim();
            if z.norm_sqr() == 0.0 {
                return Err(bad("--z", "the integral representation needs z ≠ 0"));
            }
            let p = HeisenbergPoint::new(z, a.tau)?;
            let e = folland_integral_representation(&p, quad)?;
            let solution = folland_solution(&p, &FollandConstant::green_kernel_consistent(n)?)?;
            let mut r = record! {"n" => n, "tau" => a.tau};
            real_columns(&mut r, &e);
            r.insert("folland_solution".into(), solution.into());
            r.insert("rel_diff".into(), relative(e.value, solution).into());
            Ok(Outcome::new(vec![r]))
        }
        Command::VerifyAppendix(a) => {
            check_n(a.n)?;
            check_positive("--mu", a.mu)?;
            check_positive("--theta", a.theta)?;
            let report = verify_chain(a.n, a.mu, a.theta, quad)?;
            let base = record! {"n" => a.n, "mu" => a.mu, "theta" => a.theta};
            let row = |step: &str, value: f64, residual: f64| {
                let mut r = base.clone();
                r.insert("step".into(), step.into());
                r.insert("value".into(), value.into());
                r.insert("residual".into(), residual.into());
                r
            };
            let mut rows: Vec<Record> = report.steps.iter().map(|s| row(&s.step, s.value, s.residual)).collect();
            rows.push(row(
                "epsilon (arccos vs 2 arctan)",
                report.epsilon_arccos,
                relative(report.epsilon_arccos, report.epsilon_arctan),
            ));
            let closed = green_kernel_closed_reduced(a.n, ReducedCoordinates { rho: 0.5 * a.mu, theta: a.theta })?;
            rows.push(row("closed form vs integral", closed, report.final_residual));
            Ok(Outcome::new(rows))
        }
        Command::WeylCount(a) => {
            check_positive("--field", a.field)?;
            check_positive("--half-width", a.half_width)?;
            for &l in &a.lambda {
                check_finite("--lambda", l)?;
            }
            let grid = GridSpec::new(a.half_width, a.points, a.field)
                .map_err(|e| bad("--points", e.to_string()))?
                .with_stencil(a.stencil.into());
            let h = discretize_magnetic_hamiltonian(&grid)?;
            let mut rows = Vec::new();
            let mut plot = Vec::new();
            for &requested in &a.lambda {
                let (count, lambda) = count_with_nudge(|l| h.count_below(l), requested)?;
                let ids = count as f64 / grid.volume();
                let closed = landau_ids(a.field, lambda);
                plot.push((lambda, ids));
                rows.push(record! {
                    "L" => grid.half_width, "N" => grid.points_per_axis, "h" => grid.mesh(),
                    "lambda" => lambda, "nudge" => lambda - requested, "count" => count, "volume" => grid.volume(),
                    "empirical_ids" => ids, "closed_form" => closed,
                    "rel_error" => if closed == 0.0 { ids } else { (ids - closed).abs() / closed },
                });
            }
            Ok(Outcome::new(rows).with_plot(plot))
        }
        Command::WeylStudy(a) => {
            check_positive("--field", a.field)?;
            check_finite("--lambda", a.lambda)?;
            check_positive("--mesh", a.mesh)?;
            if a.half_width.is_empty() {
                return Err(bad("--half-width", "give at least one L"));
            }
            for &l in &a.half_width {
                check_positive("--half-width", l)?;
            }
            let points: Vec<usize> = if a.points.is_empty() {
                a.half_width
                    .iter()
                    .map(|&l| ((2.0 * l / a.mesh).round() as usize).saturating_sub(1))
                    .collect()
            } else if a.points.len() == a.half_width.len() {
                a.points.clone()
            } else {
                return Err(bad("--points", "give one N per L"));
            };
            let sizes: Vec<(f64, usize)> = a.half_width.iter().copied().zip(points).collect();
            for &(l, n) in &sizes {
                GridSpec::new(l, n, a.field).map_err(|e| bad("--points", e.to_string()))?;
            }
            let study = |lambda: f64| convergence_study(a.field, lambda, &sizes, a.stencil.into());
            let (rows, _) = count_with_nudge(study, a.lambda)?;
            let plot = rows.iter().map(|r| (r.count.half_width, r.count.empirical_ids)).collect();
            let rows = rows
                .iter()
                .map(|r| {
                    let c = &r.count;
                    record! {
                        "L" => c.half_width, "N" => c.points_per_axis, "h" => c.mesh, "lambda" => c.lambda,
                        "count" => c.count, "volume" => c.volume, "empirical_ids" => c.empirical_ids,
                        "closed_form" => r.closed_form, "rel_error" => r.rel_error,
                    }
                })
                .collect();
            Ok(Outcome::new(rows).with_plot(plot))
        }
        Command::Selftest => {
            let checks = selftest(config);
            let failed = checks.iter().any(|c| !c.passed);
            let rows = checks.iter().map(Check::to_record).collect();
            let mut outcome = Outcome::new(rows);
            outcome.exit_code = i32::from(failed);
            Ok(outcome)
        }
    }
}

/// Retry a count whose shift hit an eigenvalue, moving λ up by the suggested
/// nudge. Returns the result together with the λ actually used.
fn count_with_nudge<T>(mut f: impl FnMut(f64) -> Result<T, Error>, lambda: f64) -> Result<(T, f64), CliError> {
    let mut shift = lambda;
    for _ in 0..8 {
        match f(shift) {
            Ok(v) => return Ok((v, shift)),
            Err(Error::SingularShift { suggested_nudge, .. }) => shift += suggested_nudge,
            Err(e) => return Err(e.into()),
        }
    }
    Err(bad("--lambda", format!("{lambda} stays on the spectrum after repeated nudges")))
}

/// The record emitted when an engine gives up: its best value, flagged.
fn non_convergence_record(e: &Error) -> Record {
    match e {
        Error::NonConvergence {
            context,
            value,
            error_estimate,
            work,
        } => record! {
            "value_re" => value.re, "value_im" => value.im, "error_estimate" => error_estimate,
            "work" => work, "converged" => false, "context" => context,
        },
        other => record! {"converged" => false, "context" => other.to_string()},
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(CliError::Io)
}

fn emit(record: &ResultRecord, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match record.config.format {
        Format::Json => render_json(record),
        Format::Csv => render_csv(&record.results),
        Format::Table => render_table(&record.results),
    };
    match &record.config.output {
        Some(path) => write_file(path, &text),
        None => out.write_all(text.as_bytes()).map_err(CliError::Io),
    }
}

/// Parse `argv` (program name first), run, and write records to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let command = &cli.command;
    let config = match RunConfig::resolve(
        command.name(),
        command.params(),
        &cli.global.overrides(),
        command.default_series_tol(),
    ) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };

    let start = Instant::now();
    let outcome = dispatch(command, &config);
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION").into(),
        walltime_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let (results, plot, code) = match outcome {
        Ok(o) => (o.results, o.plot, o.exit_code),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.exit_code() != 3 {
                return e.exit_code();
            }
            match e {
                CliError::Library(inner) => (vec![non_convergence_record(&inner)], None, 3),
                _ => unreachable!("only library errors map to exit code 3"),
            }
        }
    };
    if let Some(path) = &config.emit_plot_data {
        match &plot {
            Some(points) => {
                if let Err(e) = write_file(path, &render_plot_data(points)) {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            }
            None if code == 0 => {
                let _ = writeln!(err, "note: {} has no plot series; {} not written", command.name(), path.display());
            }
            None => {}
        }
    }
    let record = ResultRecord {
        command: command.name().into(),
        config,
        results,
        meta,
    };
    if let Err(e) = emit(&record, out) {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    code
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hids").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ids_magnetic_json() {
        let (code, out, _) = run_capture(&["ids-magnetic", "--n", "1", "--lambda", "0.5", "--format", "json"]);
        assert_eq!(code, 0);
        let rec: ResultRecord = serde_json::from_str(&out).unwrap();
        assert_eq!(rec.results[0]["value"].as_f64().unwrap(), 1.0 / PI);
        assert_eq!(rec.config.params["lambda"].as_f64().unwrap(), 0.5);
    }

    #[test]
    fn validation_exit_codes() {
        assert_eq!(run_capture(&["no-such-command"]).0, 2);
        let (code, _, err) = run_capture(&["ids-magnetic", "--n", "0", "--lambda", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--n"), "{err}");
        let (code, _, err) = run_capture(&["kernel-resolvent", "--zeta-re", "0.5", "--z", "1,0"]);
        assert_eq!(code, 2);
        assert!(err.contains("--zeta-re"), "{err}");
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn negative_values_parse() {
        let (code, out, _) = run_capture(&["ids-magnetic", "--n", "2", "--lambda", "-1", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1).unwrap(), "-1.0000000000000000e0,2,0.0000000000000000e0,closed_form");
    }

    #[test]
    fn starved_budget_is_exit_three_with_record() {
        let (code, out, _) = run_capture(&[
            "green-integral", "--n", "1", "--mu", "2", "--theta", "1", "--max-subdivisions", "1", "--format", "json",
        ]);
        assert_eq!(code, 3);
        let rec: ResultRecord = serde_json::from_str(&out).unwrap();
        assert_eq!(rec.results[0]["converged"], Value::Bool(false));
    }
}
