use std::path::{Path, PathBuf};

use sbflag_core::csa::BaseKind;
use sbflag_core::oracle::EnumerationBudget;
use serde::Deserialize;

pub const CONFIG_ENV: &str = "SBFLAG_CONFIG";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub budget: EnumerationBudget,
    pub default_field_kind: Option<BaseKind>,
}

/// Explicit path, then `$SBFLAG_CONFIG`, then built-in defaults.
pub fn resolve(explicit: Option<&Path>) -> Result<Config, String> {
    let path = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
    };
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_budget() {
        let c: Config = toml::from_str("default_field_kind = \"global\"\n[budget]\nmax_index = 12\n").unwrap();
        assert_eq!(c.budget.max_index, 12);
        assert_eq!(c.budget.max_places, 3);
        assert_eq!(c.default_field_kind, Some(BaseKind::Global));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<Config>("colour = 1").is_err());
    }
}
