//! Partitions, Young-diagram combinatorics, contents and the delta-balanced
//! condition.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised by partition operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("{0} is not a subpartition of {1}")]
    NotSubpartition(String, String),
    #[error("cannot parse partition from {0:?}: {1}")]
    Parse(String, String),
}

/// A partition: weakly decreasing sequence of positive integers.
///
/// The empty partition is written `0` in serialized form. Partitions are
/// value types in canonical form (no trailing zeros) so they can key maps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Creates a partition, dropping trailing zeros.
    ///
    /// Panics if the parts are not weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Self {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            panic!("partition parts must be weakly decreasing: {parts:?}");
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The parts, without trailing zeros.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The `i`-th part (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Whether the Young diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Row-wise minimum of the two diagrams.
    pub fn intersection(&self, other: &Partition) -> Partition {
        let rows = self.len().min(other.len());
        Partition::new((0..rows).map(|i| self.part(i).min(other.part(i))).collect())
    }

    /// The transposed (conjugate) partition.
    pub fn transpose(&self) -> Partition {
        let cols = self.part(0) as usize;
        Partition::new(
            (0..cols)
                .map(|j| self.parts.iter().filter(|&&p| p as usize > j).count() as u32)
                .collect(),
        )
    }

    /// All cells `(row, col)` of the diagram, 1-based.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 1..=p {
                out.push((i as u32 + 1, j));
            }
        }
        out
    }

    /// All partitions obtained by adding one box.
    pub fn addable(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            let grown = self.part(i) + 1;
            if i == 0 || self.part(i - 1) >= grown {
                let mut parts = self.parts.clone();
                if i == self.len() {
                    parts.push(grown);
                } else {
                    parts[i] = grown;
                }
                out.push(Partition::new(parts));
            }
        }
        out
    }

    /// All partitions obtained by removing one box.
    pub fn removable(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let shrunk = self.part(i) - 1;
            if self.part(i + 1) <= shrunk {
                let mut parts = self.parts.clone();
                parts[i] = shrunk;
                out.push(Partition::new(parts));
            }
        }
        out
    }

    /// Order used for all serialized listings: by degree, then by
    /// lexicographically decreasing part sequence (matching the usual table
    /// layout `4211` before `332`).
    pub fn display_cmp(&self, other: &Partition) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let joined = self
            .parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{joined}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Parses `"5,2,1,1,1"`, the exponent forms `"5,2,1^3"` and `"521^3"`,
    /// and `"0"` for the empty partition. In the comma-free compact form
    /// every digit is a single part, so multi-digit parts require commas.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| PartitionError::Parse(s.to_string(), m.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err("empty string"));
        }
        if s == "0" {
            return Ok(Partition::empty());
        }
        let mut parts: Vec<u32> = Vec::new();
        if s.contains(',') {
            for tok in s.split(',') {
                let (base, mult) = match tok.split_once('^') {
                    Some((b, m)) => (b, m.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (tok, 1),
                };
                let p: u32 = base.trim().parse().map_err(|_| err("bad part"))?;
                parts.extend(std::iter::repeat(p).take(mult as usize));
            }
        } else {
            let chars: Vec<char> = s.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                let d = c.to_digit(10).ok_or_else(|| err("expected digit"))?;
                i += 1;
                let mut mult = 1u32;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    mult = s[start..i].parse().map_err(|_| err("bad exponent"))?;
                }
                parts.extend(std::iter::repeat(d).take(mult as usize));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(err("zero part"));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(err("parts not weakly decreasing"));
        }
        Ok(Partition::new(parts))
    }
}

/// The boxes of a skew diagram `lambda / mu` with their contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewBoxes {
    /// Cells `(row, col)`, 1-based.
    pub boxes: Vec<(u32, u32)>,
}

impl SkewBoxes {
    /// Contents `col - row` of the boxes, as a multiset.
    pub fn content_counts(&self) -> BTreeMap<i64, u64> {
        let mut counts = BTreeMap::new();
        for &(r, c) in &self.boxes {
            *counts.entry(c as i64 - r as i64).or_insert(0) += 1;
        }
        counts
    }

    /// Contents as a sorted list (with multiplicity).
    pub fn contents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.boxes.iter().map(|&(r, c)| c as i64 - r as i64).collect();
        v.sort_unstable();
        v
    }
}

/// The skew diagram `lambda / mu`; requires `mu` inside `lambda`.
pub fn skew(lambda: &Partition, mu: &Partition) -> Result<SkewBoxes, PartitionError> {
    if !lambda.contains(mu) {
        return Err(PartitionError::NotSubpartition(mu.to_string(), lambda.to_string()));
    }
    let mut boxes = Vec::new();
    for i in 0..lambda.len() {
        for j in (mu.part(i) + 1)..=lambda.part(i) {
            boxes.push((i as u32 + 1, j));
        }
    }
    Ok(SkewBoxes { boxes })
}

/// Whether the skew diagram `lambda / mu` is delta-balanced.
///
/// Two conditions: the contents pair up with sums `1 - delta`, and (for even
/// delta) a parity condition on the boxes with the two central contents
/// `1 - delta/2` and `-delta/2`: when exactly one such box lies in the bottom
/// row of those boxes, the number of pairs of them must be even.
pub fn is_balanced_pair(mu: &Partition, lambda: &Partition, delta: i64) -> Result<bool, PartitionError> {
    if delta == 0 {
        return Err(PartitionError::ZeroDelta);
    }
    let sk = skew(lambda, mu)?;
    let counts = sk.content_counts();
    let target = 1 - delta;
    for (&c, &k) in &counts {
        if counts.get(&(target - c)).copied().unwrap_or(0) != k {
            return Ok(false);
        }
    }
    if delta % 2 != 0 {
        // The self-paired central content must occur an even number of times.
        let c0 = target / 2; // exact: target is even here
        if counts.get(&c0).copied().unwrap_or(0) % 2 == 1 {
            return Ok(false);
        }
    } else {
        let a = 1 - delta / 2;
        let b = -delta / 2;
        let pairs = counts.get(&a).copied().unwrap_or(0);
        if pairs > 0 {
            let central: Vec<(u32, u32)> = sk
                .boxes
                .iter()
                .copied()
                .filter(|&(r, c)| {
                    let content = c as i64 - r as i64;
                    content == a || content == b
                })
                .collect();
            let bottom = central.iter().map(|&(r, _)| r).max().unwrap();
            let in_bottom = central.iter().filter(|&&(r, _)| r == bottom).count();
            if in_bottom == 1 && pairs % 2 == 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `lambda` and `mu` are delta-balanced: both skews over the
/// row-wise intersection are balanced.
pub fn is_balanced(lambda: &Partition, mu: &Partition, delta: i64) -> Result<bool, PartitionError> {
    if delta == 0 {
        return Err(PartitionError::ZeroDelta);
    }
    let meet = lambda.intersection(mu);
    Ok(is_balanced_pair(&meet, lambda, delta)? && is_balanced_pair(&meet, mu, delta)?)
}

/// All partitions of `n`, in lexicographically decreasing order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("1").transpose(), p("1"));
        assert_eq!(p("3,1").transpose(), p("2,1,1"));
        assert_eq!(p("5,2,1,1,1").transpose(), p("5,2,1,1,1"));
    }

    #[test]
    fn transpose_involution() {
        for n in 0..=12u32 {
            for q in partitions_of(n) {
                assert_eq!(q.transpose().transpose(), q);
            }
        }
    }

    #[test]
    fn skew_examples() {
        assert_eq!(skew(&p("2,2"), &Partition::empty()).unwrap().contents(), vec![-1, 0, 0, 1]);
        assert!(skew(&p("2,1"), &p("2,1")).unwrap().boxes.is_empty());
        assert_eq!(skew(&p("1,1"), &Partition::empty()).unwrap().contents(), vec![-1, 0]);
        assert!(skew(&p("1"), &p("2")).is_err());
    }

    #[test]
    fn balanced_examples() {
        assert!(is_balanced_pair(&Partition::empty(), &p("2,2"), 1).unwrap());
        assert!(is_balanced_pair(&p("3,1"), &p("3,1"), 5).unwrap());
        assert!(!is_balanced_pair(&Partition::empty(), &p("1,1"), 2).unwrap());
        assert!(is_balanced(&Partition::empty(), &p("2,2"), 1).unwrap());
        assert!(is_balanced(&p("2,2"), &p("3,2,1"), 1).unwrap());
        assert_eq!(is_balanced(&p("1"), &p("1"), 0), Err(PartitionError::ZeroDelta));
    }

    #[test]
    fn addable_removable() {
        assert!(Partition::empty().removable().is_empty());
        assert_eq!(p("1").addable(), vec![p("2"), p("1,1")]);
        assert_eq!(p("2,2").removable(), vec![p("2,1")]);
        for n in 0..=10u32 {
            for q in partitions_of(n) {
                assert_eq!(q.addable().len(), q.removable().len() + 1);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("521^3"), p("5,2,1,1,1"));
        assert_eq!(p("5,2,1^3"), p("5,2,1,1,1"));
        assert_eq!(p("4^4"), p("4,4,4,4"));
        assert_eq!(p("0"), Partition::empty());
        assert_eq!(p("5,2,1,1,1").to_string(), "5,2,1,1,1");
        assert_eq!(Partition::empty().to_string(), "0");
        assert!("2,3".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(10).len(), 42);
    }
}
