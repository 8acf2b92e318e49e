//! Optional `key = value` configuration files with `[section]` headers.
//!
//! Unknown sections and keys are hard errors so a typo cannot silently
//! fall back to a default. Flags always override file values.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Configuration problem: reported with exit code 2 instead of 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ConfigError(message.into()))
}

/// Values read from a configuration file; `None` means unset.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub eps: Option<f64>,
    pub tol_scale: Option<f64>,
    pub u0: Option<f64>,
    pub v0: Option<f64>,
    pub du: Option<f64>,
    pub dv: Option<f64>,
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub c: Option<f64>,
    pub c1: Option<f64>,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(config_error)
}

fn parse(text: &str) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::default();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            match name {
                "verify" | "surface" => section = Some(name.to_string()),
                other => return Err(format!("unknown section [{other}] on line {lineno}")),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("expected `key = value` on line {lineno}"));
        };
        let key = key.trim();
        let value = value.trim();
        match (section.as_deref(), key) {
            (Some("verify"), "seed") => cfg.seed = Some(number(key, value, lineno)?),
            (Some("verify"), "samples") => cfg.samples = Some(number(key, value, lineno)?),
            (Some("verify"), "eps") => cfg.eps = Some(number(key, value, lineno)?),
            (Some("verify"), "tol-scale") => cfg.tol_scale = Some(number(key, value, lineno)?),
            (Some("surface"), "u0") => cfg.u0 = Some(number(key, value, lineno)?),
            (Some("surface"), "v0") => cfg.v0 = Some(number(key, value, lineno)?),
            (Some("surface"), "du") => cfg.du = Some(number(key, value, lineno)?),
            (Some("surface"), "dv") => cfg.dv = Some(number(key, value, lineno)?),
            (Some("surface"), "nu") => cfg.nu = Some(number(key, value, lineno)?),
            (Some("surface"), "nv") => cfg.nv = Some(number(key, value, lineno)?),
            (Some("surface"), "c") => cfg.c = Some(number(key, value, lineno)?),
            (Some("surface"), "c1") => cfg.c1 = Some(number(key, value, lineno)?),
            (Some(sec), _) => {
                return Err(format!("unknown key `{key}` in section [{sec}] on line {lineno}"))
            }
            (None, _) => {
                return Err(format!(
                    "key `{key}` on line {lineno} appears before any [section] header"
                ))
            }
        }
    }
    Ok(cfg)
}

fn number<N: FromStr>(key: &str, value: &str, lineno: usize) -> Result<N, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse `{value}` for key `{key}` on line {lineno}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_and_values() {
        let cfg = parse(
            "# toolkit settings\n\
             [verify]\n\
             seed = 7   # reproducible\n\
             tol-scale = 2.5\n\
             \n\
             [surface]\n\
             nu = 21\n\
             du = 0.05\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.tol_scale, Some(2.5));
        assert_eq!(cfg.nu, Some(21));
        assert_eq!(cfg.du, Some(0.05));
        assert_eq!(cfg.samples, None);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(parse("[verify]\nsead = 7\n").unwrap_err().contains("sead"));
        assert!(parse("[weird]\n").unwrap_err().contains("weird"));
        assert!(parse("seed = 7\n").unwrap_err().contains("before any"));
        assert!(parse("[verify]\nseed\n").unwrap_err().contains("key = value"));
        assert!(parse("[verify]\nseed = x\n").unwrap_err().contains("cannot parse"));
    }
}
