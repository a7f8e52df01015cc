use std::path::PathBuf;

use anyhow::{bail, Result};
use serde::Serialize;

/// Largest `n` any suite or search may be asked to sweep.
pub const MAX_N_GUARD: usize = 7;
/// Largest label universe `[m]` accepted.
pub const MAX_M_GUARD: usize = 8;

pub const DEFAULT_SAMPLES: usize = 5;
pub const DEFAULT_SEARCH_SAMPLES: usize = 1000;
pub const DEFAULT_MAX_M: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Bounds and plumbing shared by every suite and search. `None` means "use
/// the default of the suite being run".
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub max_n: Option<usize>,
    pub max_m: Option<usize>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    /// Directory holding `kl_S{n}.json` cache files.
    pub kl_cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.max_n {
            if n == 0 || n > MAX_N_GUARD {
                bail!("--max-n must be in 1..={MAX_N_GUARD}, got {n}");
            }
        }
        if let Some(m) = self.max_m {
            if m == 0 || m > MAX_M_GUARD {
                bail!("--max-m must be in 1..={MAX_M_GUARD}, got {m}");
            }
        }
        if self.k == Some(0) {
            bail!("--k must be at least 1");
        }
        if self.samples == Some(0) {
            bail!("--samples must be at least 1");
        }
        Ok(())
    }

    pub fn max_n_or(&self, default: usize) -> usize {
        self.max_n.unwrap_or(default)
    }

    pub fn max_m_or_default(&self) -> usize {
        self.max_m.unwrap_or(DEFAULT_MAX_M)
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn cache_file(&self, n: usize) -> Option<PathBuf> {
        self.kl_cache.as_ref().map(|dir| dir.join(format!("kl_S{n}.json")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        let ok = Config {
            max_n: Some(7),
            ..Config::default()
        };
        assert!(ok.validate().is_ok());
        for bad in [
            Config {
                max_n: Some(8),
                ..Config::default()
            },
            Config {
                max_n: Some(0),
                ..Config::default()
            },
            Config {
                k: Some(0),
                ..Config::default()
            },
            Config {
                max_m: Some(9),
                ..Config::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn cache_files_are_per_n() {
        let c = Config {
            kl_cache: Some("/tmp/kl".into()),
            ..Config::default()
        };
        assert_eq!(c.cache_file(5).unwrap(), PathBuf::from("/tmp/kl/kl_S5.json"));
    }
}
