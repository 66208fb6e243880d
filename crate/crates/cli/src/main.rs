use std::env;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nlcs_cli::config::OUT_DIR_ENV;
use nlcs_cli::{
    run_figure, run_sweep, run_verify, stats_text, AlgebraModel, CliError, FigureId, FileConfig, RunConfig,
    StatsRequest,
};
use nlcs_core::{Complex64, Flavor};

/// Nonlinear coherent states on the flat plane and the sphere.
#[derive(Debug, Parser)]
#[command(name = "nlcs", version)]
struct Cli {
    /// TOML file with defaults for the subcommands.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the data behind one figure as CSV.
    Figure {
        /// fig1, fig2, fig3, fig4a, fig4b, fig5a or fig5b.
        id: FigureId,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        phi_points: Option<usize>,
    },
    /// Photon statistics and squeezing of one state.
    Stats {
        #[arg(long, default_value = "sphere")]
        flavor: Flavor,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        /// Imaginary part of mu.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu_im: f64,
        #[arg(long)]
        phi_points: Option<usize>,
    },
    /// Cartesian sweep over comma-separated N, lambda and mu lists.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        n_max: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<f64>>,
        #[arg(long)]
        phi_points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite; exits 1 if any check is breached.
    Verify {
        /// Replace every default tolerance with this value.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        n_max_max: Option<usize>,
        /// Run against a deliberately wrong deformation function.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    let file = path.map(|p| FileConfig::load(p)).transpose()?;
    let env_dir = env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    Ok(RunConfig::resolve(file.as_ref(), env_dir))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = load_config(cli.config.as_ref())?;
    match cli.command {
        Command::Figure { id, out, phi_points } => {
            if let Some(k) = phi_points {
                cfg.phi_points = k;
            }
            let path = run_figure(id, out.as_deref(), &cfg)?;
            println!("{}", path.display());
        }
        Command::Stats { flavor, n_max, lambda, mu, mu_im, phi_points } => {
            let req = StatsRequest {
                flavor,
                n_max,
                lambda,
                mu: Complex64::new(mu, mu_im),
                phi_points: phi_points.unwrap_or(cfg.phi_points),
            };
            print!("{}", stats_text(&req)?);
        }
        Command::Sweep { n_max, lambda, mu, phi_points, out } => {
            if let Some(v) = n_max {
                cfg.sweep.n_max = v;
            }
            if let Some(v) = lambda {
                cfg.sweep.lambda = v;
            }
            if let Some(v) = mu {
                cfg.sweep.mu = v;
            }
            if let Some(k) = phi_points {
                cfg.phi_points = k;
                cfg.sweep.phi_points = k;
            }
            let path = run_sweep(&cfg, out.as_deref())?;
            println!("{}", path.display());
        }
        Command::Verify { tol, n_max_max, inject_fault } => {
            if tol.is_some() {
                cfg.verify.tol = tol;
            }
            if let Some(n) = n_max_max {
                cfg.verify.n_max_max = n;
            }
            let model = if inject_fault { AlgebraModel::corrupted() } else { AlgebraModel::library() };
            let mut stdout = io::stdout().lock();
            let report = run_verify(&cfg.verify, &model, &mut stdout)?;
            stdout.flush()?;
            return Ok(report.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nlcs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
