//! Run configuration. Precedence: command-line flags, then the TOML config
//! file, then built-in defaults (the output directory default may be
//! replaced through `NLCS_OUT_DIR`).

use std::fs;
use std::path::{Path, PathBuf};

use nlcs_core::statistics::DEFAULT_PHI_POINTS;
use serde::Deserialize;

use crate::error::CliError;
use crate::sweep::SweepConfig;
use crate::verify::VerifyConfig;

/// Environment variable replacing the default output directory.
pub const OUT_DIR_ENV: &str = "NLCS_OUT_DIR";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub phi_points: Option<usize>,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub n_max: Option<Vec<usize>>,
    pub lambda: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub tol: Option<f64>,
    pub n_max_max: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Fully resolved settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub phi_points: usize,
    pub sweep: SweepConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            phi_points: DEFAULT_PHI_POINTS,
            sweep: SweepConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    /// Layers the config file and the environment over the defaults.
    /// Command-line flags are applied afterwards by the caller.
    pub fn resolve(file: Option<&FileConfig>, env_out_dir: Option<PathBuf>) -> Self {
        let mut cfg = Self::default();
        if let Some(dir) = env_out_dir {
            cfg.out_dir = dir;
        }
        let Some(file) = file else { return cfg };
        if let Some(dir) = &file.out_dir {
            cfg.out_dir = dir.clone();
        }
        if let Some(k) = file.phi_points {
            cfg.phi_points = k;
            cfg.sweep.phi_points = k;
        }
        if let Some(v) = &file.sweep.n_max {
            cfg.sweep.n_max = v.clone();
        }
        if let Some(v) = &file.sweep.lambda {
            cfg.sweep.lambda = v.clone();
        }
        if let Some(v) = &file.sweep.mu {
            cfg.sweep.mu = v.clone();
        }
        if let Some(t) = file.verify.tol {
            cfg.verify.tol = Some(t);
        }
        if let Some(n) = file.verify.n_max_max {
            cfg.verify.n_max_max = n;
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.phi_points < 2 {
            return Err(CliError::Config("phi grid needs at least 2 points".into()));
        }
        self.sweep.validate()?;
        self.verify.validate()
    }
}
