use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of mode indices, kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ModeSubset(Vec<usize>);

impl ModeSubset {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate index in {v:?}")));
        }
        Ok(Self(v))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn all(num_modes: usize) -> Self {
        Self((0..num_modes).collect())
    }

    /// Fails if any index is outside `0..num_modes`.
    pub fn check(&self, num_modes: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max >= num_modes => Err(Error::InvalidSubset(format!(
                "index {max} out of range for {num_modes} modes"
            ))),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.0.binary_search(&mode).is_ok()
    }

    pub fn complement(&self, num_modes: usize) -> Self {
        Self((0..num_modes).filter(|m| !self.contains(*m)).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<usize>> for ModeSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ModeSubset> for Vec<usize> {
    fn from(s: ModeSubset) -> Self {
        s.0
    }
}

impl fmt::Display for ModeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ModeSubset {
    type Err = Error;

    /// Comma separated indices, e.g. `"0,2"`. The empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let idx = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSubset(format!("bad mode index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(idx)
    }
}

/// Split of all modes into two non-empty sides. Partial transposition acts on
/// `second`, and `second` is the side traced out by the reduction operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub first: ModeSubset,
    pub second: ModeSubset,
}

impl Bipartition {
    pub fn new(first: ModeSubset, second: ModeSubset, num_modes: usize) -> Result<Self> {
        first
            .check(num_modes)
            .and_then(|_| second.check(num_modes))
            .map_err(|e| Error::InvalidPartition(e.to_string()))?;
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidPartition(
                "both sides must be non-empty".into(),
            ));
        }
        if let Some(m) = first.iter().find(|m| second.contains(*m)) {
            return Err(Error::InvalidPartition(format!(
                "mode {m} appears on both sides"
            )));
        }
        if first.len() + second.len() != num_modes {
            return Err(Error::InvalidPartition(format!(
                "partition {first}|{second} does not cover all {num_modes} modes"
            )));
        }
        Ok(Self { first, second })
    }

    /// Parses `"0,1|2"`.
    pub fn parse(s: &str, num_modes: usize) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidPartition(format!("expected `A|B`, got {s:?}")))?;
        let map = |e: Error| Error::InvalidPartition(e.to_string());
        Self::new(a.parse().map_err(map)?, b.parse().map_err(map)?, num_modes)
    }

    pub fn num_modes(&self) -> usize {
        self.first.len() + self.second.len()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.first, self.second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_rejects_duplicates_and_range() {
        assert!(ModeSubset::new([1, 1]).is_err());
        let s = ModeSubset::new([2, 0]).unwrap();
        assert_eq!(s.indices(), &[0, 2]);
        assert!(s.check(3).is_ok());
        assert!(s.check(2).is_err());
        assert_eq!(s.complement(4).indices(), &[1, 3]);
    }

    #[test]
    fn partition_parsing() {
        let p = Bipartition::parse("0,1|2", 3).unwrap();
        assert_eq!(p.first.indices(), &[0, 1]);
        assert_eq!(p.second.indices(), &[2]);
        assert_eq!(p.to_string(), "0,1|2");
        assert!(Bipartition::parse("0,1|1", 3).is_err());
        assert!(Bipartition::parse("0|1", 3).is_err());
        assert!(Bipartition::parse("0,1,2|", 3).is_err());
        assert!(Bipartition::parse("0;1", 2).is_err());
        assert!(Bipartition::parse("0|x", 2).is_err());
    }
}
