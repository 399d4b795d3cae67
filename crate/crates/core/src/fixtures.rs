//! Calibrated assertion thresholds.
//!
//! Estimates whose error constants are not explicit anywhere (the `O(...)`
//! and `>>` statements) are checked against thresholds measured once by an
//! oracle run and committed to `fixtures/calibrated.txt`. The file format is
//! one `key = value` per line with `#` comments; the copy shipped with the
//! crate is embedded at compile time and can be overridden from disk.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{Error, Result};

/// The thresholds committed with the crate.
pub const EMBEDDED: &str = include_str!("../fixtures/calibrated.txt");

pub const VERSION_KEY: &str = "version";
pub const OMEGA_PLUS_ERR_MAX: &str = "omega_plus_err_max";
pub const LOG_PLUS_ERR_MAX: &str = "log_plus_err_max";
pub const STRICT_DECREASE_FREQ_LO: &str = "strict_decrease_freq_lo";
pub const STRICT_DECREASE_FREQ_HI: &str = "strict_decrease_freq_hi";
pub const DIVISIBILITY_FAILURE_FREQ_MAX: &str = "divisibility_failure_freq_max";
pub const RECIP_TAIL_DIFF_KAPPA1_T2: &str = "recip_tail_diff_kappa1_t2";
pub const RECIP_TAIL_DIFF_KAPPA0_T100: &str = "recip_tail_diff_kappa0_t100";

/// A parsed set of calibrated thresholds.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub version: u32,
    values: BTreeMap<String, f64>,
}

impl Fixtures {
    /// Parses the `key = value` format. The `version` key is mandatory.
    pub fn parse(text: &str) -> Result<Fixtures> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("fixtures line {}: missing '='", idx + 1)))?;
            let value: f64 = value.trim().parse().map_err(|e| {
                Error::usage(format!("fixtures line {}: bad number ({e})", idx + 1))
            })?;
            values.insert(key.trim().to_string(), value);
        }
        let version = values
            .remove(VERSION_KEY)
            .ok_or_else(|| Error::usage("fixtures file lacks a version key"))?;
        Ok(Fixtures {
            version: version as u32,
            values,
        })
    }

    /// The thresholds shipped in-repo.
    pub fn embedded() -> Fixtures {
        Fixtures::parse(EMBEDDED).expect("embedded fixtures file is valid")
    }

    pub fn load(path: &Path) -> Result<Fixtures> {
        Fixtures::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Strict lookup: a missing key is an error rather than a skip.
    pub fn require(&self, key: &str) -> Result<f64> {
        self.get(key)
            .ok_or_else(|| Error::usage(format!("fixture key '{key}' is missing")))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_parses_and_has_all_keys() {
        let f = Fixtures::embedded();
        assert_eq!(f.version, 1);
        for key in [
            OMEGA_PLUS_ERR_MAX,
            LOG_PLUS_ERR_MAX,
            STRICT_DECREASE_FREQ_LO,
            STRICT_DECREASE_FREQ_HI,
            DIVISIBILITY_FAILURE_FREQ_MAX,
            RECIP_TAIL_DIFF_KAPPA1_T2,
            RECIP_TAIL_DIFF_KAPPA0_T100,
        ] {
            assert!(f.require(key).is_ok(), "missing {key}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Fixtures::parse("version = 1\nfoo 3").is_err());
        assert!(Fixtures::parse("version = 1\nfoo = abc").is_err());
        assert!(Fixtures::parse("foo = 3").is_err()); // no version
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let f = Fixtures::parse("# hello\nversion = 1\n\nfoo = 2.5 # trailing\n").unwrap();
        assert_eq!(f.get("foo"), Some(2.5));
        assert_eq!(f.get("bar"), None);
        assert!(f.require("bar").is_err());
    }
}
