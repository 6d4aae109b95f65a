//! Flat key-value configuration with CLI-flag overrides.
//!
//! Recognized keys: `seed`, `dims` (`lo..hi`), `trials`, `suites`
//! (comma list), `tolerance.<identity_id>`, `out`, `format`.
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use bracketlab::suites::ALL_SUITES;

/// Identity ids that can be requested directly with `--suite`; they map
/// to the suite that emits them.
const IDENTITY_OWNERS: [(&str, &str); 10] = [
    ("jacobi", "identities"),
    ("graded_jacobi", "identities"),
    ("dirac_four_op", "identities"),
    ("dirac_three_op", "identities"),
    ("poisson_only", "identities"),
    ("lagrange_condition", "identities"),
    ("weyl_relation", "reps"),
    ("ritz", "heisenberg1925"),
    ("thomas_kuhn", "heisenberg1925"),
    ("ehrenfest", "heisenberg1925"),
];

#[derive(Clone, Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dim_lo: usize,
    pub dim_hi: usize,
    pub trials: usize,
    pub suites: Vec<String>,
    /// suite-level runs keep every report; a set filter restricts the
    /// emitted reports to one identity_id
    pub identity_filter: Option<String>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            dim_lo: 2,
            dim_hi: 16,
            trials: 200,
            suites: ALL_SUITES.iter().map(|s| s.to_string()).collect(),
            identity_filter: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim_lo < 1 || self.dim_hi < self.dim_lo {
            return Err(ConfigError(format!(
                "invalid dims range {}..{}",
                self.dim_lo, self.dim_hi
            )));
        }
        if self.trials == 0 {
            return Err(ConfigError("trials must be positive".into()));
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                return Err(ConfigError(format!("unknown suite '{s}'")));
            }
        }
        for (id, tol) in &self.tolerances {
            if !(*tol > 0.0) {
                return Err(ConfigError(format!("tolerance for '{id}' must be positive")));
            }
        }
        Ok(())
    }

    /// Resolve a `--suite` value: either a suite name or a known
    /// identity id, which selects its owning suite and sets the filter.
    pub fn select(&mut self, name: &str) -> Result<(), ConfigError> {
        if ALL_SUITES.contains(&name) {
            self.suites = vec![name.to_string()];
            self.identity_filter = None;
            return Ok(());
        }
        for (id, owner) in IDENTITY_OWNERS {
            if id == name {
                self.suites = vec![owner.to_string()];
                self.identity_filter = Some(name.to_string());
                return Ok(());
            }
        }
        Err(ConfigError(format!("unknown suite or identity '{name}'")))
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", lineno + 1)))?;
            self.apply_pair(key.trim(), value.trim())
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        Ok(())
    }

    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "seed" => {
                self.seed =
                    value.parse().map_err(|_| ConfigError(format!("bad seed '{value}'")))?
            }
            "dims" => {
                let (lo, hi) = parse_dims(value)?;
                self.dim_lo = lo;
                self.dim_hi = hi;
            }
            "trials" => {
                self.trials =
                    value.parse().map_err(|_| ConfigError(format!("bad trials '{value}'")))?
            }
            "suites" => {
                self.suites = value.split(',').map(|s| s.trim().to_string()).collect();
            }
            _ => {
                if let Some(id) = key.strip_prefix("tolerance.") {
                    let tol: f64 = value
                        .parse()
                        .map_err(|_| ConfigError(format!("bad tolerance '{value}'")))?;
                    self.tolerances.insert(id.to_string(), tol);
                } else {
                    return Err(ConfigError(format!("unknown key '{key}'")));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_dims(value: &str) -> Result<(usize, usize), ConfigError> {
    let (lo, hi) = value
        .split_once("..")
        .ok_or_else(|| ConfigError(format!("dims '{value}' must look like 2..16")))?;
    let lo = lo.trim().parse().map_err(|_| ConfigError(format!("bad dims '{value}'")))?;
    let hi = hi.trim().parse().map_err(|_| ConfigError(format!("bad dims '{value}'")))?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SuiteConfig::default().validate().unwrap();
    }

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2..16").unwrap(), (2, 16));
        assert!(parse_dims("16").is_err());
        assert!(parse_dims("a..b").is_err());
    }

    #[test]
    fn select_identity_sets_filter() {
        let mut c = SuiteConfig::default();
        c.select("jacobi").unwrap();
        assert_eq!(c.suites, vec!["identities".to_string()]);
        assert_eq!(c.identity_filter.as_deref(), Some("jacobi"));
        c.select("fields").unwrap();
        assert!(c.identity_filter.is_none());
        assert!(c.select("nonsense").is_err());
    }

    #[test]
    fn pair_application() {
        let mut c = SuiteConfig::default();
        c.apply_pair("seed", "7").unwrap();
        c.apply_pair("tolerance.jacobi", "1e-10").unwrap();
        c.apply_pair("suites", "identities, reps").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.tolerances["jacobi"], 1e-10);
        c.validate().unwrap();
        assert!(c.apply_pair("bogus", "1").is_err());
    }
}
