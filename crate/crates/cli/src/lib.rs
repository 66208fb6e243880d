//! Report generation behind the `nlcs` command: figure data, parameter
//! sweeps and the invariant suite.

pub mod config;
pub mod error;
pub mod figure;
pub mod stats;
pub mod sweep;
pub mod table;
pub mod verify;

pub use config::{FileConfig, RunConfig};
pub use error::CliError;
pub use figure::{figure_table, run_figure, FigureId};
pub use stats::{stats_text, StatsRequest};
pub use sweep::{run_sweep, sweep_table, SweepConfig};
pub use table::CsvTable;
pub use verify::{run_verify, AlgebraModel, Tolerances, VerifyConfig, VerifyReport};
