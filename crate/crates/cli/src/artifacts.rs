//! Result files, metadata sidecars and polytope resolution.
//!
//! A result file holds one coloring vector per line in the hex encoding.
//! Its sidecar `<file>.meta` holds `key=value` lines sufficient to re-run
//! the producing command.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};
use smallcover::coloring::{decode_checked, encode_hex, ColoringVector};
use smallcover::polytopes::{builtin, Polytope};

/// A builtin name (`120cell`, `cube:4`, ...) or a path to an interchange file.
pub fn resolve_polytope(selector: &str) -> Result<Polytope> {
    match builtin(selector) {
        Ok(p) => Ok(p),
        Err(_) if Path::new(selector).exists() => {
            Polytope::load(selector).with_context(|| format!("loading polytope file {selector}"))
        }
        Err(e) => Err(e).with_context(|| format!("unknown polytope {selector}")),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn polytope_digest(p: &Polytope) -> String {
    sha256_hex(p.to_interchange_string().as_bytes())
}

pub fn render_vectors(vectors: &[ColoringVector]) -> String {
    vectors.iter().map(|v| encode_hex(v) + "\n").collect()
}

pub fn write_vectors(path: &Path, vectors: &[ColoringVector]) -> Result<String> {
    let text = render_vectors(vectors);
    fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    Ok(sha256_hex(text.as_bytes()))
}

/// Reads a result file; blank lines and `#` comments are skipped.
pub fn read_vectors(path: &Path, p: &Polytope) -> Result<Vec<ColoringVector>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(k, l)| decode_checked(l.trim(), p).with_context(|| format!("{}:{}", path.display(), k + 1)))
        .collect()
}

/// Ordered `key=value` metadata.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta(pub BTreeMap<String, String>);

impl Meta {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("metadata line {} lacks '='", k + 1);
            };
            map.insert(key.to_string(), value.to_string());
        }
        Ok(Self(map))
    }
}

pub fn meta_path(result: &Path) -> PathBuf {
    let mut s = result.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meta_round_trip() {
        let mut m = Meta::default();
        m.set("count", 10);
        m.set("palette", "1,2,4,8,15");
        assert_eq!(Meta::parse(&m.render()).unwrap(), m);
        assert!(Meta::parse("novalue\n").is_err());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn resolves_builtins() {
        assert_eq!(resolve_polytope("cube:3").unwrap().facet_count(), 6);
        assert!(resolve_polytope("no-such-thing").is_err());
    }
}
