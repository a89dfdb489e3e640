//! `key: value` reports. Keys never contain `": "`; values are single-line.

use std::fmt;

use modlin_core::{BigInt, IntMatrix};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(": ")
                .ok_or_else(|| format!("report line {}: expected 'key: value'", i + 1))?;
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Report { entries })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

pub fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Rows separated by `; `.
pub fn matrix(m: &IntMatrix) -> String {
    (0..m.rows()).map(|i| join(m.row(i))).collect::<Vec<_>>().join("; ")
}

pub fn parse_vector(s: &str) -> Result<Vec<BigInt>, String> {
    s.split_whitespace()
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("'{t}' is not an integer")))
        .collect()
}
