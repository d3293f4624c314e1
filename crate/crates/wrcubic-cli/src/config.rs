//! Run configuration: CLI flags with an optional TOML file supplying
//! defaults. Explicit flags always win over the file.

use serde::Deserialize;
use std::path::Path;

/// Optional config file mirroring the global flags.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub iterations: Option<u64>,
    pub coeff_bound: Option<i64>,
    pub json: Option<bool>,
}

pub fn load_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("cannot parse config {}: {e}", path.display()))
}

/// Resolved configuration after merging flags and file.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub seed: u64,
    pub precision: u32,
    pub iterations: u64,
    pub coeff_bound: i64,
    pub json: bool,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_ITERATIONS: u64 = 2000;
pub const DEFAULT_COEFF_BOUND: i64 = 3;

impl RunConfig {
    pub fn resolve(
        file: &FileConfig,
        seed: Option<u64>,
        precision: Option<u32>,
        iterations: Option<u64>,
        coeff_bound: Option<i64>,
        json: bool,
    ) -> Result<Self, String> {
        let cfg = RunConfig {
            seed: seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            precision: precision.or(file.precision).unwrap_or(DEFAULT_PRECISION),
            iterations: iterations.or(file.iterations).unwrap_or(DEFAULT_ITERATIONS),
            coeff_bound: coeff_bound
                .or(file.coeff_bound)
                .unwrap_or(DEFAULT_COEFF_BOUND),
            json: json || file.json.unwrap_or(false),
        };
        if cfg.precision == 0 || cfg.coeff_bound <= 0 {
            return Err("precision and coeff-bound must be positive".to_string());
        }
        Ok(cfg)
    }
}
