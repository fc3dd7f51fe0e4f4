//! Line-oriented parameter files: `key value...` per line, `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num::BigRational;

pub struct ParamFile {
    /// key -> list of (line number, arguments), in file order.
    entries: BTreeMap<String, Vec<(usize, Vec<String>)>>,
    allowed: &'static [&'static str],
}

impl ParamFile {
    pub fn read(path: &Path, allowed: &'static [&'static str]) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text, allowed).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str, allowed: &'static [&'static str]) -> Result<Self> {
        let mut entries: BTreeMap<String, Vec<(usize, Vec<String>)>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tok = content.split_whitespace().map(str::to_string);
            let key = tok.next().unwrap();
            if !allowed.contains(&key.as_str()) {
                bail!("line {}: unknown field `{key}` (expected one of {})", idx + 1, allowed.join(", "));
            }
            entries.entry(key).or_default().push((idx + 1, tok.collect()));
        }
        Ok(ParamFile { entries, allowed })
    }

    pub fn all(&self, key: &str) -> &[(usize, Vec<String>)] {
        debug_assert!(self.allowed.contains(&key));
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The arguments of a key that may appear at most once.
    pub fn single(&self, key: &str) -> Result<Option<(usize, &[String])>> {
        match self.all(key) {
            [] => Ok(None),
            [(line, args)] => Ok(Some((*line, args.as_slice()))),
            [_, (line, _), ..] => bail!("line {line}: duplicate `{key}`"),
        }
    }

    pub fn required(&self, key: &str) -> Result<(usize, &[String])> {
        self.single(key)?.ok_or_else(|| anyhow!("missing `{key}` field"))
    }

    pub fn scalar<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        let Some((line, args)) = self.single(key)? else { return Ok(None) };
        let [v] = args else { bail!("line {line}: `{key}` takes exactly one value") };
        v.parse().map(Some).map_err(|_| anyhow!("line {line}: invalid value `{v}` for `{key}`"))
    }
}

pub fn rational(s: &str, line: usize) -> Result<BigRational> {
    BigRational::from_str(s).map_err(|_| anyhow!("line {line}: `{s}` is not an integer or fraction p/q"))
}

pub fn rationals(args: &[String], line: usize) -> Result<Vec<BigRational>> {
    args.iter().map(|s| rational(s, line)).collect()
}
