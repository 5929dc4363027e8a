//! Key-value configuration file. Top-level keys mirror the command-line
//! flags; a `[method]` table holds algorithm tunables.
//!
//! ```toml
//! seed = 7
//! threads = 1
//! methods = ["sa", "aco", "hmcaco"]
//! instances = ["S1", "S2"]
//! runs = 10
//! time_budget_secs = 120
//!
//! [method]
//! n_ants = 5
//! k_perturb = 4
//! temperature = 2.0
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hpfold::bench::MethodConfig;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub instances: Option<Vec<String>>,
    pub runs: Option<usize>,
    pub time_budget_secs: Option<f64>,
    pub iters: Option<u64>,
    pub out: Option<PathBuf>,
    pub method: Option<MethodConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
