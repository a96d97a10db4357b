//! Flat `key = value` config files mirroring the global flags.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 5] = ["shards", "mem-cap", "format", "seed", "out"];

pub fn load(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |message: String| CliError::Config {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(err(format!(
                "unknown key `{key}`; expected one of {}",
                KEYS.join(", ")
            )));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }
    Ok(out)
}

/// Byte count with an optional `K`, `M` or `G` binary suffix.
pub fn parse_bytes(text: &str) -> Result<u64, String> {
    let t = text.trim();
    let (digits, shift) = match t.char_indices().last() {
        Some((i, 'k' | 'K')) => (&t[..i], 10),
        Some((i, 'm' | 'M')) => (&t[..i], 20),
        Some((i, 'g' | 'G')) => (&t[..i], 30),
        _ => (t, 0),
    };
    let n: u64 = digits
        .trim()
        .parse()
        .map_err(|_| format!("invalid byte count `{text}`"))?;
    n.checked_mul(1 << shift)
        .ok_or_else(|| format!("byte count `{text}` overflows"))
}
