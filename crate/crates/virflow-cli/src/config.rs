//! Flat key=value configuration with 1:1 command-line flag mirroring.
//!
//! A config file holds `key = value` lines ('#' starts a comment); every key
//! can equally be passed as `--key value` (or `--key=value`), with flags
//! taking precedence over the file.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_args(args: &[String], allowed: &[&str]) -> Result<(Self, Vec<String>), UsageError> {
        let mut values = BTreeMap::new();
        let mut positional = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            if let Some(stripped) = arg.strip_prefix("--") {
                let (key, value) = if let Some((k, v)) = stripped.split_once('=') {
                    (k.to_string(), v.to_string())
                } else {
                    let v = args
                        .get(i + 1)
                        .ok_or_else(|| UsageError(format!("flag --{stripped} expects a value")))?;
                    i += 1;
                    (stripped.to_string(), v.clone())
                };
                if key != "config" && !allowed.contains(&key.as_str()) {
                    return Err(UsageError(format!("unknown flag --{key}")));
                }
                values.insert(key, value);
            } else {
                positional.push(arg.clone());
            }
            i += 1;
        }
        // A config file supplies defaults; flags override.
        let mut merged = BTreeMap::new();
        if let Some(path) = values.get("config") {
            for (k, v) in parse_file(path)? {
                if k != "config" && !allowed.contains(&k.as_str()) {
                    return Err(UsageError(format!("unknown key '{k}' in {path}")));
                }
                merged.insert(k, v);
            }
        }
        merged.extend(values);
        merged.remove("config");
        Ok((Self { values: merged }, positional))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, UsageError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| UsageError(format!("key '{key}': bad number '{v}'"))),
        }
    }

    pub fn f64_req(&self, key: &str) -> Result<f64, UsageError> {
        self.get(key)
            .ok_or_else(|| UsageError(format!("missing required key '{key}'")))?
            .parse()
            .map_err(|_| UsageError(format!("key '{key}': bad number")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, UsageError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| UsageError(format!("key '{key}': bad integer '{v}'"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, UsageError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| UsageError(format!("key '{key}': bad integer '{v}'"))),
        }
    }
}

fn parse_file(path: &str) -> Result<Vec<(String, String)>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {path}: {e}")))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("{path}:{}: expected key = value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
