//! `key = value` configuration files.
//!
//! Keys are long flag names without the dashes (`to`, `a-range`, `jobs`; an
//! underscore works as well as a dash). A file is turned into flags placed
//! before the command-line flags, so anything given on the command line wins.

use std::fs;
use std::path::Path;

use super::{EngineError, Result};

/// `(key, value)` pairs in file order; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            EngineError::InvalidConfig(format!("line {}: expected key = value", i + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(EngineError::InvalidConfig(format!(
                "line {}: empty key",
                i + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<(String, String)>> {
    parse_config(&fs::read_to_string(path)?)
}

/// Flags for `pairs`, in `--key=value` form.
///
/// `true` becomes a bare switch and `false` is dropped.
pub fn config_flags(pairs: &[(String, String)]) -> Vec<String> {
    pairs
        .iter()
        .filter_map(|(k, v)| match v.as_str() {
            "true" => Some(format!("--{k}")),
            "false" => None,
            _ => Some(format!("--{k}={v}")),
        })
        .collect()
}

/// Splice a `--config FILE` (or `--config=FILE`) into the argument list.
///
/// The file's flags go right after the subcommand, ahead of the user's own
/// flags; the `--config` argument itself is removed.
pub fn expand_config_args(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            let p = it
                .next()
                .ok_or_else(|| EngineError::InvalidConfig("--config needs a path".into()))?;
            path = Some(p);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let flags = config_flags(&load_config(Path::new(&path))?);
    let sub = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(rest.len());
    let mut out: Vec<String> = rest[..sub].to_vec();
    out.extend(flags);
    out.extend_from_slice(&rest[sub..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn parses_pairs() {
        let text = "# sweep\nto = 100\n\na_range = -2:2  # comment\ntiming = true\n";
        let pairs = parse_config(text).unwrap();
        assert_eq!(pairs[0], ("to".into(), "100".into()));
        assert_eq!(pairs[1], ("a-range".into(), "-2:2".into()));
        assert_eq!(
            config_flags(&pairs),
            s(&["--to=100", "--a-range=-2:2", "--timing"])
        );
        assert!(parse_config("just words").is_err());
        assert!(parse_config(" = 3").is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "to = 50\njobs = 2").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let args = s(&["supercong", "verify", "--config", &path, "--to", "70"]);
        assert_eq!(
            expand_config_args(args).unwrap(),
            s(&["supercong", "verify", "--to=50", "--jobs=2", "--to", "70"])
        );
        let plain = s(&["supercong", "verify", "--to", "70"]);
        assert_eq!(expand_config_args(plain.clone()).unwrap(), plain);
        assert!(expand_config_args(s(&["supercong", "verify", "--config"])).is_err());
    }
}
