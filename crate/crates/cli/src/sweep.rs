//! Cartesian `(N, lambda, mu)` sweeps of the sphere coherent state.

use std::path::{Path, PathBuf};

use nlcs_core::coherent::coherent_sphere;
use nlcs_core::statistics::{phi_grid, squeeze_deformed, squeeze_nondeformed, stats_report, DEFAULT_PHI_POINTS};
use nlcs_core::{Complex64, SurfaceSpec};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, CsvTable};

pub const SWEEP_COLUMNS: [&str; 11] = [
    "n_max",
    "lambda",
    "mu",
    "mean_n",
    "variance_n",
    "mandel",
    "min_s1_plain",
    "min_s2_plain",
    "min_s1_deformed",
    "min_s2_deformed",
    "top_level_weight",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_max: Vec<usize>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub phi_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_max: vec![10, 20, 30],
            lambda: vec![0.0, 0.05, 0.1],
            mu: vec![0.1, 0.5],
            phi_points: DEFAULT_PHI_POINTS,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_max.is_empty() || self.lambda.is_empty() || self.mu.is_empty() {
            return Err(CliError::Config("sweep grids must not be empty".into()));
        }
        if let Some(l) = self.lambda.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(CliError::Config(format!("curvature must be finite and non-negative, got {l}")));
        }
        if let Some(m) = self.mu.iter().find(|m| !m.is_finite()) {
            return Err(CliError::Config(format!("mu must be finite, got {m}")));
        }
        if self.phi_points < 2 {
            return Err(CliError::Config("phi grid needs at least 2 points".into()));
        }
        Ok(())
    }

    /// Grid points in output order: `N` outermost, then `lambda`, then `mu`.
    pub fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::with_capacity(self.n_max.len() * self.lambda.len() * self.mu.len());
        for &n in &self.n_max {
            for &l in &self.lambda {
                for &m in &self.mu {
                    out.push((n, l, m));
                }
            }
        }
        out
    }
}

/// Statistics of one grid point, in `SWEEP_COLUMNS` order.
pub fn sweep_row(n_max: usize, lambda: f64, mu: f64, grid: &[f64]) -> Result<Vec<Cell>, CliError> {
    let spec = SurfaceSpec::new(lambda, n_max)?;
    let state = coherent_sphere(Complex64::new(mu, 0.0), &spec);
    let report = stats_report(&state);
    let plain = squeeze_nondeformed(&state, grid);
    let deformed = squeeze_deformed(&state, grid);
    Ok(vec![
        Cell::Int(n_max),
        Cell::Float(lambda),
        Cell::Float(mu),
        Cell::Float(report.mean_n),
        Cell::Float(report.variance_n),
        report.mandel_m.map_or_else(|| Cell::Text("undefined".into()), Cell::Float),
        Cell::Float(plain.min_s1()),
        Cell::Float(plain.min_s2()),
        Cell::Float(deformed.min_s1()),
        Cell::Float(deformed.min_s2()),
        Cell::Float(report.top_level_weight),
    ])
}

/// Evaluates the grid in parallel; rows come back in grid order.
pub fn sweep_table(cfg: &SweepConfig) -> Result<CsvTable, CliError> {
    cfg.validate()?;
    let grid = phi_grid(cfg.phi_points);
    let rows =
        cfg.points().into_par_iter().map(|(n, l, m)| sweep_row(n, l, m, &grid)).collect::<Result<Vec<_>, _>>()?;
    let mut table = CsvTable::new(SWEEP_COLUMNS);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// Writes the sweep to `out`, or `<out_dir>/sweep.csv`.
pub fn run_sweep(cfg: &RunConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.out_dir.join("sweep.csv"));
    sweep_table(&cfg.sweep)?.write_to(&path)?;
    Ok(path)
}
