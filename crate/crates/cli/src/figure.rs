//! Data behind the seven published plots, one CSV per figure.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nlcs_core::coherent::{coherent_flat, coherent_sphere};
use nlcs_core::statistics::{mandel, mean_photon, phi_grid, squeeze_deformed, squeeze_nondeformed, SqueezeCurve};
use nlcs_core::{Complex64, SurfaceSpec};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, CsvTable};

/// Levels plotted in figures 1-3.
pub const FIGURE_LEVELS: [usize; 3] = [10, 20, 30];
/// Coherent amplitude for figures 2 and 3.
pub const CURVATURE_SWEEP_MU: f64 = 0.5;
/// Level and amplitude for the squeezing figures.
pub const SQUEEZE_LEVEL: usize = 10;
pub const SQUEEZE_MU: f64 = 0.1;
pub const SQUEEZE_LAMBDAS: [f64; 3] = [0.0, 0.05, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Flat mean photon number against `mu`.
    Fig1,
    /// Sphere mean photon number against `lambda`.
    Fig2,
    /// Sphere Mandel parameter against `lambda`.
    Fig3,
    /// `S1a` against `phi`.
    Fig4a,
    /// `S2a` against `phi`.
    Fig4b,
    /// `S1A` against `phi`.
    Fig5a,
    /// `S2A` against `phi`.
    Fig5b,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig5a,
        FigureId::Fig5b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            format!("unknown figure '{s}' (expected one of fig1, fig2, fig3, fig4a, fig4b, fig5a, fig5b)")
        })
    }
}

/// `mu` samples for figure 1: 0 to 5 in steps of 0.05, then a tail out to 1e3.
pub fn fig1_mu_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=100).map(|k| k as f64 / 20.0).collect();
    grid.extend([10.0, 20.0, 50.0, 100.0, 1000.0]);
    grid
}

/// `lambda` samples for figures 2 and 3: 21 points over `[0, 1]`.
pub fn curvature_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

fn level_header(first: &str) -> Vec<String> {
    std::iter::once(first.to_string()).chain(FIGURE_LEVELS.iter().map(|n| format!("n_max_{n}"))).collect()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sphere_spec(lambda: f64, n_max: usize) -> Result<SurfaceSpec, CliError> {
    Ok(SurfaceSpec::new(lambda, n_max)?)
}

fn curvature_table(value: impl Fn(f64, usize) -> Result<Cell, CliError>) -> Result<CsvTable, CliError> {
    let mut table = CsvTable::new(level_header("lambda"));
    for lambda in curvature_grid() {
        let mut row = vec![Cell::Float(lambda)];
        for n_max in FIGURE_LEVELS {
            row.push(value(lambda, n_max)?);
        }
        table.push(row);
    }
    Ok(table)
}

fn squeeze_table(
    phi_points: usize,
    pick: impl Fn(&SqueezeCurve) -> &[f64],
    deformed: bool,
) -> Result<CsvTable, CliError> {
    let grid = phi_grid(phi_points);
    let curves = SQUEEZE_LAMBDAS
        .iter()
        .map(|&lambda| {
            let state = coherent_sphere(real(SQUEEZE_MU), &sphere_spec(lambda, SQUEEZE_LEVEL)?);
            Ok(if deformed { squeeze_deformed(&state, &grid) } else { squeeze_nondeformed(&state, &grid) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let header = std::iter::once("phi".to_string()).chain(SQUEEZE_LAMBDAS.iter().map(|l| format!("lambda_{l:.2}")));
    let mut table = CsvTable::new(header);
    for (k, &phi) in grid.iter().enumerate() {
        let mut row = vec![Cell::Float(phi)];
        row.extend(curves.iter().map(|c| Cell::Float(pick(c)[k])));
        table.push(row);
    }
    Ok(table)
}

/// Builds the data table of one figure.
pub fn figure_table(id: FigureId, phi_points: usize) -> Result<CsvTable, CliError> {
    match id {
        FigureId::Fig1 => {
            let mut table = CsvTable::new(level_header("mu"));
            for mu in fig1_mu_grid() {
                let mut row = vec![Cell::Float(mu)];
                row.extend(FIGURE_LEVELS.iter().map(|&n| Cell::Float(mean_photon(&coherent_flat(real(mu), n)))));
                table.push(row);
            }
            Ok(table)
        }
        FigureId::Fig2 => curvature_table(|lambda, n| {
            Ok(Cell::Float(mean_photon(&coherent_sphere(real(CURVATURE_SWEEP_MU), &sphere_spec(lambda, n)?))))
        }),
        FigureId::Fig3 => curvature_table(|lambda, n| {
            Ok(Cell::Float(mandel(&coherent_sphere(real(CURVATURE_SWEEP_MU), &sphere_spec(lambda, n)?))?))
        }),
        FigureId::Fig4a => squeeze_table(phi_points, |c| &c.s1, false),
        FigureId::Fig4b => squeeze_table(phi_points, |c| &c.s2, false),
        FigureId::Fig5a => squeeze_table(phi_points, |c| &c.s1, true),
        FigureId::Fig5b => squeeze_table(phi_points, |c| &c.s2, true),
    }
}

/// Writes one figure to `out`, or to `<out_dir>/<id>.csv`, and returns the path.
pub fn run_figure(id: FigureId, out: Option<&Path>, cfg: &RunConfig) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.out_dir.join(format!("{id}.csv")));
    figure_table(id, cfg.phi_points)?.write_to(&path)?;
    Ok(path)
}
