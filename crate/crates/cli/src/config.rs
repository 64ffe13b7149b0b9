//! Run configuration: a flat `key = value` file merged with command-line
//! overrides. Each command declares the keys it accepts; anything else is
//! rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::CliError;

/// Keys every command accepts.
pub const COMMON_KEYS: [&str; 3] = ["grid", "format", "out"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Usage(format!(
                "format must be csv or json, got {other:?}"
            ))),
        }
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_flat(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{origin}:{}: expected `key = value`, got {line:?}",
                i + 1
            ))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Usage(format!("{origin}:{}: empty key", i + 1)));
        }
        if map
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(CliError::Usage(format!(
                "{origin}:{}: duplicate key {key:?}",
                i + 1
            )));
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub grid_points: usize,
    pub output_format: OutputFormat,
    pub output_path: PathBuf,
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Merges file values with `overrides` (flags win) and validates the keys
    /// against `allowed` plus [`COMMON_KEYS`].
    pub fn build(
        command: &'static str,
        file: Option<&Path>,
        overrides: BTreeMap<String, String>,
        allowed: &[&str],
    ) -> Result<Self, CliError> {
        let mut values = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                parse_flat(&text, &path.display().to_string())?
            }
            None => BTreeMap::new(),
        };
        values.extend(overrides);
        if let Some(bad) = values
            .keys()
            .find(|k| !allowed.contains(&k.as_str()) && !COMMON_KEYS.contains(&k.as_str()))
        {
            let mut known: Vec<&str> = COMMON_KEYS.iter().chain(allowed).copied().collect();
            known.sort_unstable();
            return Err(CliError::Usage(format!(
                "unknown key {bad:?} for {command} (known: {})",
                known.join(", ")
            )));
        }
        let grid_points = match values.get("grid") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("grid must be an integer, got {v:?}")))?,
            None => pfield::boxmode::DEFAULT_GRID_POINTS,
        };
        if grid_points < 2 {
            return Err(CliError::Usage(format!(
                "grid must be at least 2, got {grid_points}"
            )));
        }
        let output_format = values
            .get("format")
            .map(|v| v.parse())
            .transpose()?
            .unwrap_or(OutputFormat::Csv);
        let output_path = values
            .get("out")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("OUTPUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(Self {
            command,
            grid_points,
            output_format,
            output_path,
            values,
        })
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.values.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}"))),
            None => Ok(default),
        }
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}")))
            })
            .transpose()
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Effective settings, for echoing into output metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("command".to_string(), self.command.to_string()),
            ("grid".to_string(), self.grid_points.to_string()),
            ("format".to_string(), self.output_format.to_string()),
        ];
        out.extend(
            self.values
                .iter()
                .filter(|(k, _)| !COMMON_KEYS.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone())),
        );
        out
    }
}

/// `"1:1.5, 2:1.45"` → `[(1, 1.5), (2, 1.45)]`.
pub fn parse_modes(text: &str) -> Result<Vec<(u32, f64)>, CliError> {
    text.split(',')
        .map(|item| {
            let bad = || CliError::Usage(format!("mode {item:?} must look like n:ratio"));
            let (n, r) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok((
                n.trim().parse().map_err(|_| bad())?,
                r.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_parsing() {
        let m = parse_flat("# header\n a = 2e-9 \n\nmodes = 1:1.5 # trailing\n", "t").unwrap();
        assert_eq!(m["a"], "2e-9");
        assert_eq!(m["modes"], "1:1.5");
        assert!(parse_flat("novalue\n", "t").is_err());
        assert!(parse_flat("a = 1\na = 2\n", "t").is_err());
        assert!(parse_flat(" = 1\n", "t").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut o = BTreeMap::new();
        o.insert("bogus".to_string(), "1".to_string());
        assert!(matches!(
            RunConfig::build("x", None, o, &["a"]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn overrides_and_defaults() {
        let mut o = BTreeMap::new();
        o.insert("grid".to_string(), "5".to_string());
        o.insert("a".to_string(), "3e-9".to_string());
        o.insert("out".to_string(), "/tmp/x".to_string());
        let c = RunConfig::build("x", None, o, &["a"]).unwrap();
        assert_eq!(c.grid_points, 5);
        assert_eq!(c.get("a", 0.0).unwrap(), 3e-9);
        assert_eq!(c.get("b", 7u32).unwrap(), 7);
        assert_eq!(c.output_format, OutputFormat::Csv);
        assert_eq!(c.output_path, PathBuf::from("/tmp/x"));
    }

    #[test]
    fn grid_lower_bound() {
        let mut o = BTreeMap::new();
        o.insert("grid".to_string(), "1".to_string());
        assert!(RunConfig::build("x", None, o, &[]).is_err());
    }

    #[test]
    fn modes() {
        assert_eq!(
            parse_modes("1:1.5, 2:1.45").unwrap(),
            vec![(1, 1.5), (2, 1.45)]
        );
        assert!(parse_modes("1-1.5").is_err());
    }
}
