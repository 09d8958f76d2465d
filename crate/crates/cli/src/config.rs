use std::path::Path;

use serde::Deserialize;

pub const N_MAX_ENV: &str = "ULRICH_N_MAX";

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Largest quadric dimension the spinor engine serves.
    pub n_max: Option<usize>,
    /// Minimum width of markdown table cells.
    pub column_width: Option<usize>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                serde_json::from_str(&text)
                    .map_err(|e| format!("invalid config {}: {e}", p.display()))?
            }
            None => Config::default(),
        };
        if let Ok(v) = std::env::var(N_MAX_ENV) {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("{N_MAX_ENV} must be a positive integer, got {v:?}"))?;
            cfg.n_max = Some(n);
        }
        if cfg.n_max.is_some_and(|n| n < 2) {
            return Err("n_max must be at least 2".into());
        }
        Ok(cfg)
    }

    pub fn n_max(&self) -> usize {
        self.n_max.unwrap_or(ulrich_core::spinor::DEFAULT_N_MAX)
    }

    pub fn column_width(&self) -> usize {
        self.column_width.unwrap_or(0)
    }
}
