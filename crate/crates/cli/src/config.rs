//! Flat dotted-key text configuration: one `key = value` pair per line,
//! `#` comments. Unknown keys are rejected with their line number.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "config line {n}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed configuration plus access tracking for unknown-key checks.
#[derive(Clone, Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    message: format!("expected `key = value`, got `{raw}`"),
                    line: Some(line_no),
                });
            };
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError { message: "empty key".into(), line: Some(line_no) });
            }
            if entries
                .insert(key.clone(), Entry { value: value.trim().to_string(), line: line_no })
                .is_some()
            {
                return Err(ConfigError {
                    message: format!("duplicate key `{key}`"),
                    line: Some(line_no),
                });
            }
        }
        Ok(Config { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.line))
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => e.value.parse().map_err(|_| ConfigError {
                message: format!("key `{key}`: `{}` is not a number", e.value),
                line: Some(e.line),
            }),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => e.value.parse().map_err(|_| ConfigError {
                message: format!("key `{key}`: `{}` is not an integer", e.value),
                line: Some(e.line),
            }),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        Ok(self.u64_or(key, default as u64)? as usize)
    }

    /// Comma-separated list of numbers.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(e) => e
                .value
                .split(',')
                .map(|v| {
                    v.trim().parse().map_err(|_| ConfigError {
                        message: format!("key `{key}`: `{}` is not a number", v.trim()),
                        line: Some(e.line),
                    })
                })
                .collect(),
        }
    }

    /// Reject keys outside the allowed set, naming the offending line.
    pub fn check_allowed(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for (key, line) in self.keys() {
            if !allowed.contains(&key) && key != "seed" {
                return Err(ConfigError {
                    message: format!(
                        "unknown key `{key}` (allowed: seed, {})",
                        allowed.join(", ")
                    ),
                    line: Some(line),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_comments_and_lists() {
        let cfg = Config::parse("a.x = 3.5 # trailing\n# full comment\nb = 1, 2.5, 3\nname = 7\n")
            .unwrap();
        assert_eq!(cfg.f64_or("a.x", 0.0).unwrap(), 3.5);
        assert_eq!(cfg.list_or("b", &[]).unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(cfg.u64_or("name", 0).unwrap(), 7);
        assert_eq!(cfg.f64_or("missing", 9.0).unwrap(), 9.0);
    }

    #[test]
    fn rejects_malformed_and_duplicates() {
        let err = Config::parse("just a line\n").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = Config::parse("a = 1\na = 2\n").unwrap_err();
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn unknown_keys_name_their_line() {
        let cfg = Config::parse("ra.n = 10\nbogus.key = 1\n").unwrap();
        let err = cfg.check_allowed(&["ra.n"]).unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("bogus.key"));
    }

    #[test]
    fn bad_number_reports_line() {
        let cfg = Config::parse("a = x\n").unwrap();
        let err = cfg.f64_or("a", 0.0).unwrap_err();
        assert_eq!(err.line, Some(1));
    }
}
