//! Optional `key=value` configuration files. Command-line flags always win;
//! file entries fill in whatever the flags left unset.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default)]
pub struct Config {
    entries: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut entries = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key=value", path.display(), lineno + 1);
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key {key}={raw}: {e}"),
            },
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse()
                        .map_err(|e| anyhow::anyhow!("config key {key}: {e}"))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Parses an interval given as "a,b".
pub fn parse_window(raw: &str) -> Result<(f64, f64)> {
    let Some((a, b)) = raw.split_once(',') else {
        bail!("window must be given as a,b");
    };
    Ok((
        a.trim().parse().context("window left endpoint")?,
        b.trim().parse().context("window right endpoint")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_with_comments() {
        let dir = std::env::temp_dir().join("pipct-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# comment\nn = 100\nN = 2,8,32\nfn = xabsx\n").unwrap();
        let cfg = Config::load(&path).unwrap();
        assert_eq!(cfg.parsed::<usize>("n").unwrap(), Some(100));
        assert_eq!(cfg.list::<usize>("N").unwrap(), Some(vec![2, 8, 32]));
        assert_eq!(cfg.get("fn"), Some("xabsx"));
        assert_eq!(cfg.parsed::<usize>("missing").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        let dir = std::env::temp_dir().join("pipct-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        std::fs::write(&path, "just-a-word\n").unwrap();
        assert!(Config::load(&path).is_err());
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("0.2, 1.0").unwrap(), (0.2, 1.0));
        assert!(parse_window("0.2").is_err());
    }
}
