//! Defaults: flags override the JSON file named by `FOCKPPT_CONFIG`, which
//! overrides the built-ins.

use std::path::Path;

use serde::Deserialize;

pub const CONFIG_ENV: &str = "FOCKPPT_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerance: f64,
    pub nodes: usize,
    pub cutoff: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerance: fockppt::DEFAULT_TOLERANCE,
            nodes: fockppt::states::DEFAULT_QUADRATURE_NODES,
            cutoff: 12,
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("reading config {}: {e}", path.display()))?;
        let c: Config =
            serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        if !(c.tolerance.is_finite() && c.tolerance >= 0.0) || c.nodes == 0 {
            return Err(format!(
                "config {}: need tolerance >= 0 and nodes >= 1",
                path.display()
            ));
        }
        Ok(c)
    }

    /// Built-ins, or the file named by the environment variable if set.
    pub fn load() -> Result<Self, String> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}
