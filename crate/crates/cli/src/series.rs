//! `B,count` series files. `#` lines and a non-numeric header row are
//! skipped; columns after the second are ignored.

use std::path::Path;

use census_core::census::CountSeries;

use crate::error::{CliError, CliResult};

pub fn read(path: &Path) -> CliResult<CountSeries> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, name: &str) -> CliResult<CountSeries> {
    let mut series = CountSeries::new(name);
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cells = line.split(',').map(str::trim);
        let (b, c) = (cells.next().unwrap_or(""), cells.next().unwrap_or(""));
        let parsed = b.parse::<u64>().ok().zip(c.parse::<u64>().ok());
        match parsed {
            Some((b, c)) => {
                seen_data = true;
                series
                    .push(b, c)
                    .map_err(|e| CliError::Invalid(format!("{name}:{}: {e}", i + 1)))?;
            }
            None if !seen_data && b.parse::<u64>().is_err() => continue,
            None => {
                return Err(CliError::Invalid(format!(
                    "{name}:{}: expected `B,count` with non-negative integers, got `{line}`",
                    i + 1
                )))
            }
        }
    }
    Ok(series)
}
