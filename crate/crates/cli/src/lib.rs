//! Reproduction runs and checks for `arma-hardy`, shared by the binary and
//! the acceptance suite.

pub mod commands;
pub mod tolerances;

use std::fmt::Display;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

pub use commands::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] arma_hardy::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Expansion order for coefficient-space quantities.
    pub order: usize,
    pub grid_tol: f64,
    /// Objective evaluations per optimizer restart.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: 256,
            grid_tol: arma_hardy::norms::DEFAULT_GRID_TOL,
            budget: arma_hardy::approx::DEFAULT_BUDGET,
            restarts: arma_hardy::approx::DEFAULT_RESTARTS,
            seed: 42,
            format: Format::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.budget == 0 || self.restarts == 0 {
            return Err(CliError::Config("order, budget and restarts must be positive".into()));
        }
        if !(self.grid_tol > 0.0 && self.grid_tol.is_finite()) {
            return Err(CliError::Config(format!("grid tolerance must be positive, got {}", self.grid_tol)));
        }
        Ok(())
    }

    pub fn optimize_options(&self) -> arma_hardy::OptimizeOptions {
        arma_hardy::OptimizeOptions {
            budget: self.budget,
            restarts: self.restarts,
            seed: self.seed,
            grid_tol: self.grid_tol,
            l2_order: self.order,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: String,
    pub criterion: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, observed: impl Display, criterion: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), observed: observed.to_string(), criterion: criterion.into(), pass }
    }

    pub fn band(name: impl Into<String>, observed: f64, band: tolerances::Band) -> Self {
        Self::new(name, fmt_num(observed), band.describe(), band.contains(observed))
    }

    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("{status} {}: {} ({})", self.name, self.observed, self.criterion)
    }
}

/// Output of one command: a JSON document plus its CSV rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub csv: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
        });
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.csv.clone()),
            Format::Json => self.to_json(),
        }
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// Appends one CSV record; fields containing separators or quotes are quoted.
pub(crate) fn csv_row<I, S>(out: &mut String, fields: I)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut first = true;
    for field in fields {
        if !first {
            out.push(',');
        }
        first = false;
        let f = field.as_ref();
        if f.contains([',', '"', '\n']) {
            out.push('"');
            out.push_str(&f.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(f);
        }
    }
    out.push('\n');
}
