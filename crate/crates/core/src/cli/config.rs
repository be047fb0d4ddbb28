//! Run configuration: built-in defaults, then a TOML file, then flags.
//!
//! The file is taken from `--config`, else from the path in `HIDS_CONFIG`.
//! Example:
//!
//! ```toml
//! format = "json"
//! seed = 7
//!
//! [quadrature]
//! rel_tol = 1e-9
//! max_halfperiods = 800
//!
//! [series]
//! tol = 1e-10
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::output::Format;
use super::CliError;
use crate::numerics::{QuadratureSpec, SeriesSpec};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "HIDS_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub max_halfperiods: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesOverrides {
    pub tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub abel_radii: Option<Vec<f64>>,
    pub extrapolation_depth: Option<usize>,
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    #[serde(default)]
    pub series: SeriesOverrides,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Tolerance and output flags shared by every subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlagOverrides {
    pub config: Option<PathBuf>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub emit_plot_data: Option<PathBuf>,
    pub seed: Option<u64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub max_halfperiods: Option<usize>,
    pub tol: Option<f64>,
    pub max_terms: Option<usize>,
}

/// The fully resolved configuration of one run, echoed into its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// The subcommand's own flags, as parsed.
    pub params: Map<String, Value>,
    pub quadrature: QuadratureSpec,
    pub series: SeriesSpec,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub emit_plot_data: Option<PathBuf>,
    pub seed: u64,
    pub config_file: Option<PathBuf>,
}

fn bad(flag: &str, message: String) -> CliError {
    CliError::BadParameter {
        flag: flag.into(),
        message,
    }
}

impl RunConfig {
    /// Layer the file (if any) and the flags over the defaults.
    ///
    /// `series_tol` is the command's default series tolerance, used when
    /// neither the file nor `--tol` sets one.
    pub fn resolve(
        command: &str,
        params: Map<String, Value>,
        flags: &FlagOverrides,
        series_tol: f64,
    ) -> Result<Self, CliError> {
        let config_file = flags
            .config
            .clone()
            .or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        let file = match &config_file {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };

        let mut quadrature = QuadratureSpec::default();
        let q = &file.quadrature;
        quadrature.rel_tol = flags.rel_tol.or(q.rel_tol).unwrap_or(quadrature.rel_tol);
        quadrature.abs_tol = flags.abs_tol.or(q.abs_tol).unwrap_or(quadrature.abs_tol);
        quadrature.max_subdivisions = flags
            .max_subdivisions
            .or(q.max_subdivisions)
            .unwrap_or(quadrature.max_subdivisions);
        quadrature.max_halfperiods = flags
            .max_halfperiods
            .or(q.max_halfperiods)
            .unwrap_or(quadrature.max_halfperiods);

        let mut series = SeriesSpec::default();
        let s = &file.series;
        series.tol = flags.tol.or(s.tol).unwrap_or(series_tol);
        series.max_terms = flags.max_terms.or(s.max_terms).unwrap_or(series.max_terms);
        if let Some(radii) = &s.abel_radii {
            series.abel_radii = radii.clone();
        }
        if let Some(depth) = s.extrapolation_depth {
            series.extrapolation_depth = depth;
        }

        let config = Self {
            command: command.into(),
            params,
            quadrature,
            series,
            format: flags.format.or(file.format).unwrap_or_default(),
            output: flags.output.clone(),
            emit_plot_data: flags.emit_plot_data.clone(),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            config_file,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let q = &self.quadrature;
        if !(q.rel_tol > 0.0) || !q.rel_tol.is_finite() {
            return Err(bad("--rel-tol", format!("must be a finite number > 0, got {}", q.rel_tol)));
        }
        if !(q.abs_tol >= 0.0) || !q.abs_tol.is_finite() {
            return Err(bad("--abs-tol", format!("must be a finite number ≥ 0, got {}", q.abs_tol)));
        }
        if q.max_subdivisions < 1 {
            return Err(bad("--max-subdivisions", "must be ≥ 1".into()));
        }
        if q.max_halfperiods < 2 {
            return Err(bad("--max-halfperiods", "must be ≥ 2".into()));
        }
        let s = &self.series;
        if !(s.tol > 0.0) || !s.tol.is_finite() {
            return Err(bad("--tol", format!("must be a finite number > 0, got {}", s.tol)));
        }
        if s.max_terms < 2 {
            return Err(bad("--max-terms", "must be ≥ 2".into()));
        }
        s.validate()
            .map_err(|e| CliError::Config(format!("series settings: {e}")))
    }
}
