//! Optional TOML configuration. Flags override the file, the file overrides
//! the built-in defaults.
//!
//! ```toml
//! format = "csv"
//! m_bounds = "m1:1..14,m2:1..6,m3:1..2"
//!
//! [sampling]
//! members = 256
//! max_period = 8
//! min_run = 16
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

pub const CONFIG_ENV: &str = "LOGDP_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub format: Option<String>,
    pub m_bounds: Option<String>,
    pub golden: Option<String>,
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub sampling: SamplingConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    pub members: Option<usize>,
    pub max_period: Option<usize>,
    pub min_run: Option<usize>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `--config` wins over the environment variable; neither means defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }
}
