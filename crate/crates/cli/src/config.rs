//! Flat `key = value` configuration files.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Mutex;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, (usize, String)>,
    consumed: Mutex<BTreeSet<String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {lineno}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::usage(format!("config line {lineno}: bad key `{key}`")));
            }
            if value.is_empty() {
                return Err(CliError::usage(format!("config line {lineno}: `{key}` has no value")));
            }
            if let Some((first, _)) = entries.insert(key.to_string(), (lineno, value.to_string())) {
                return Err(CliError::usage(format!(
                    "config line {lineno}: `{key}` already set on line {first}"
                )));
            }
        }
        Ok(Self {
            entries,
            consumed: Mutex::new(BTreeSet::new()),
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.consumed.lock().expect("config lock").insert(key.to_string());
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                let line = self.entries[key].0;
                CliError::usage(format!("config line {line}: cannot parse `{key} = {v}`"))
            }),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|p| {
                    p.trim().parse().map_err(|_| {
                        let line = self.entries[key].0;
                        CliError::usage(format!("config line {line}: cannot parse `{key}` entry `{}`", p.trim()))
                    })
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    /// Fail on any key the command did not read.
    pub fn finish(&self) -> Result<(), CliError> {
        let consumed = self.consumed.lock().expect("config lock");
        let unknown: Vec<&str> = self
            .entries
            .keys()
            .filter(|k| !consumed.contains(*k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::usage(format!("unknown config keys: {}", unknown.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let c = Config::parse("# header\n n = 16 # trailing\n\nfamily=coulomb\n").unwrap();
        assert_eq!(c.get::<usize>("n").unwrap(), Some(16));
        assert_eq!(c.raw("family"), Some("coulomb"));
        c.finish().unwrap();
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(Config::parse("n = 1\nn = 2\n").is_err());
        assert!(Config::parse("just words\n").is_err());
        assert!(Config::parse("n =\n").is_err());
        assert!(Config::parse("bad key = 1\n").is_err());
    }

    #[test]
    fn unread_keys_are_errors() {
        let c = Config::parse("n = 1\ntypo = 2\n").unwrap();
        let _ = c.get::<usize>("n");
        assert!(c.finish().is_err());
    }

    #[test]
    fn lists_and_bad_numbers() {
        let c = Config::parse("eps = 0.25, 0.5\nn = x\n").unwrap();
        assert_eq!(c.list::<f64>("eps").unwrap(), Some(vec![0.25, 0.5]));
        assert!(c.get::<usize>("n").is_err());
    }
}
