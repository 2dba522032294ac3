//! Integer partitions and compositions with the dominance order.
//!
//! A [`Partition`] is always stored in canonical form: positive parts in weakly
//! decreasing order. Compositions are a separate type, so a partition and an
//! unsorted composition can never be confused.
//!
//! The derived `Ord` on [`Partition`] is lexicographic on the part lists. It is
//! a linear extension of dominance and is what fixes every output order in this
//! crate, but it is not the dominance order itself; use [`Partition::dominance`]
//! or [`dominance_leq`] for that.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// Result of comparing two partitions in the dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptySize);
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition { parts, reason: "parts must be positive" });
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition { parts, reason: "parts must be weakly decreasing" });
        }
        Ok(Partition { parts })
    }

    /// The one-part partition `(n)`.
    pub fn row(n: usize) -> Result<Self> {
        Partition::new(vec![n])
    }

    /// The partition `(1, ..., 1)` of `n`.
    pub fn column(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySize);
        }
        Ok(Partition { parts: vec![1; n] })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Partial sums `λ_1, λ_1+λ_2, ...`.
    pub fn prefix_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// The dual partition: its i-th part counts the parts of `self` that are at least i.
    pub fn dual(&self) -> Partition {
        let largest = self.parts[0];
        let parts = (1..=largest).map(|i| self.parts.iter().filter(|&&p| p >= i).count()).collect();
        Partition { parts }
    }

    /// `d_λ = Σ_{i<j} λ_i λ_j`, the dimension of the unipotent radical of the
    /// standard parabolic of type λ.
    pub fn d(&self) -> usize {
        let n = self.n();
        let squares: usize = self.parts.iter().map(|p| p * p).sum();
        (n * n - squares) / 2
    }

    /// Every part multiplied by `factor`.
    pub fn scale(&self, factor: usize) -> Result<Partition> {
        if factor == 0 {
            return Err(Error::InvalidParameter("scale factor must be at least 1".into()));
        }
        Ok(Partition { parts: self.parts.iter().map(|p| p * factor).collect() })
    }

    /// If every part is divisible by `factor`, the partition with every part divided.
    pub fn unscale(&self, factor: usize) -> Option<Partition> {
        if factor == 0 || self.parts.iter().any(|p| p % factor != 0) {
            return None;
        }
        Some(Partition { parts: self.parts.iter().map(|p| p / factor).collect() })
    }

    pub fn dominance(&self, other: &Partition) -> Result<Dominance> {
        check_same_size(self, other)?;
        if self == other {
            return Ok(Dominance::Equal);
        }
        let le = prefix_leq(self, other);
        let ge = prefix_leq(other, self);
        Ok(match (le, ge) {
            (true, false) => Dominance::Less,
            (false, true) => Dominance::Greater,
            (true, true) => Dominance::Equal,
            (false, false) => Dominance::Incomparable,
        })
    }

    /// Number of permutations of `n` objects modulo the Young subgroup: `n!/∏λ_i!`.
    pub fn multinomial(&self) -> num_bigint::BigInt {
        let fact = |m: usize| (1..=m).fold(num_bigint::BigInt::from(1u32), |acc, k| acc * k);
        let denom = self.parts.iter().fold(num_bigint::BigInt::from(1u32), |acc, &p| acc * fact(p));
        fact(self.n()) / denom
    }
}

fn check_same_size(a: &Partition, b: &Partition) -> Result<()> {
    let (left, right) = (a.n(), b.n());
    if left != right {
        return Err(Error::SizeMismatch { left, right });
    }
    Ok(())
}

// Shorter prefix sums are padded with the full sum.
fn prefix_leq(mu: &Partition, lambda: &Partition) -> bool {
    let len = mu.len().max(lambda.len());
    let (mut sm, mut sl) = (0usize, 0usize);
    for i in 0..len {
        sm += mu.parts.get(i).copied().unwrap_or(0);
        sl += lambda.parts.get(i).copied().unwrap_or(0);
        if sm > sl {
            return false;
        }
    }
    true
}

/// `μ ≤ λ` in the dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    check_same_size(mu, lambda)?;
    Ok(prefix_leq(mu, lambda))
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// Parses `"3,1,1"`, `"(3,1,1)"` or `"[3,1,1]"`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let trimmed = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    trimmed
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}"))))
        .collect()
}

/// An ordered list of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CompositionWire", into = "CompositionWire")]
pub struct Composition {
    parts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CompositionWire {
    composition: Vec<usize>,
}

impl TryFrom<CompositionWire> for Composition {
    type Error = Error;

    fn try_from(w: CompositionWire) -> Result<Self> {
        Composition::new(w.composition)
    }
}

impl From<Composition> for CompositionWire {
    fn from(c: Composition) -> Self {
        CompositionWire { composition: c.parts }
    }
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptySize);
        }
        if parts.contains(&0) {
            return Err(Error::InvalidComposition { parts });
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The partition obtained by sorting the parts in decreasing order.
    pub fn sort_to_partition(&self) -> Partition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Inverse of [`composition_from_subset`]: the partial sums strictly below n.
    pub fn to_subset(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.parts.len().saturating_sub(1));
        for &p in &self.parts[..self.parts.len() - 1] {
            acc += p;
            out.push(acc);
        }
        out
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_parts(s)?)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn sort_to_partition(c: &Composition) -> Partition {
    c.sort_to_partition()
}

/// The composition `(i_1, i_2 - i_1, ..., n - i_r)` attached to a subset
/// `{i_1 < ... < i_r}` of `{1, ..., n-1}`.
pub fn composition_from_subset(subset: &[usize], n: usize) -> Result<Composition> {
    if n == 0 {
        return Err(Error::EmptySize);
    }
    let mut prev = 0;
    let mut parts = Vec::with_capacity(subset.len() + 1);
    for &i in subset {
        if i == 0 || i >= n {
            return Err(Error::SubsetOutOfRange { index: i, max: n - 1 });
        }
        if i <= prev {
            return Err(Error::SubsetNotIncreasing);
        }
        parts.push(i - prev);
        prev = i;
    }
    parts.push(n - prev);
    Composition::new(parts)
}

/// Gathers all parts of the given partitions and sorts them.
pub fn induce_partition(tuple: &[Partition]) -> Result<Partition> {
    if tuple.is_empty() {
        return Err(Error::InvalidParameter("cannot induce from an empty tuple".into()));
    }
    let mut parts: Vec<usize> = tuple.iter().flat_map(|p| p.parts.iter().copied()).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition { parts })
}

pub fn scale_partition(lambda: &Partition, d: usize) -> Result<Partition> {
    lambda.scale(d)
}

pub fn dual(lambda: &Partition) -> Partition {
    lambda.dual()
}

pub fn d_of(lambda: &Partition) -> usize {
    lambda.d()
}

/// All partitions of `n`, lexicographically decreasing: `(n)` first, `(1,...,1)` last.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::EmptySize);
    }
    let mut out = Vec::new();
    let mut current = vec![n];
    loop {
        out.push(Partition { parts: current.clone() });
        // Rightmost part greater than one.
        let Some(pos) = current.iter().rposition(|&p| p > 1) else {
            break;
        };
        let ones = current.len() - pos - 1;
        let head = current[pos] - 1;
        current.truncate(pos);
        current.push(head);
        let mut rest = ones + 1;
        while rest > 0 {
            let part = head.min(rest);
            current.push(part);
            rest -= part;
        }
    }
    Ok(out)
}

/// Elements of `set` with no strictly smaller element of `set` in the dominance order,
/// returned in the input order with duplicates removed.
pub fn minimal_elements(set: &[Partition]) -> Result<Vec<Partition>> {
    if let Some(first) = set.first() {
        for p in set {
            check_same_size(first, p)?;
        }
    }
    let mut out: Vec<Partition> = Vec::new();
    for candidate in set {
        if out.contains(candidate) {
            continue;
        }
        let dominated = set
            .iter()
            .any(|other| other != candidate && prefix_leq(other, candidate));
        if !dominated {
            out.push(candidate.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumerates_small_cases() {
        assert_eq!(enumerate_partitions(2).unwrap(), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(enumerate_partitions(5).unwrap().len(), 7);
        assert_eq!(enumerate_partitions(6).unwrap().len(), 11);
        assert_eq!(
            enumerate_partitions(4).unwrap(),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        assert_eq!(enumerate_partitions(0), Err(Error::EmptySize));
    }

    #[test]
    fn enumeration_is_lex_decreasing_and_counts_match() {
        // p(n) for n = 1..=12
        let counts = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (i, &c) in counts.iter().enumerate() {
            let all = enumerate_partitions(i + 1).unwrap();
            assert_eq!(all.len(), c);
            assert!(all.windows(2).all(|w| w[0] > w[1]));
            assert!(all.iter().all(|l| l.n() == i + 1));
        }
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).is_err());
        assert!(Composition::new(vec![1, 0, 2]).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(p(&[4]).dual(), p(&[1, 1, 1, 1]));
        assert_eq!(p(&[2, 1]).dual(), p(&[2, 1]));
        assert_eq!(p(&[3, 1]).dual(), p(&[2, 1, 1]));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1]), &p(&[2])).unwrap());
        assert!(!dominance_leq(&p(&[3, 3]), &p(&[4, 1, 1])).unwrap());
        assert!(!dominance_leq(&p(&[4, 1, 1]), &p(&[3, 3])).unwrap());
        assert_eq!(p(&[3, 3]).dominance(&p(&[4, 1, 1])).unwrap(), Dominance::Incomparable);
        assert!(dominance_leq(&p(&[2, 2, 1, 1]), &p(&[3, 2, 1])).unwrap());
        assert_eq!(p(&[2, 2, 1, 1]).dominance(&p(&[3, 2, 1])).unwrap(), Dominance::Less);
        assert_eq!(
            dominance_leq(&p(&[2]), &p(&[2, 1])),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn d_examples() {
        assert_eq!(p(&[2, 1]).d(), 2);
        assert_eq!(p(&[5]).d(), 0);
        assert_eq!(Partition::column(5).unwrap().d(), 10);
        assert_eq!(p(&[3, 3]).d(), 9);
        assert_eq!(p(&[4, 1, 1]).d(), 9);
    }

    #[test]
    fn sorting_compositions() {
        let c = |v: &[usize]| Composition::new(v.to_vec()).unwrap();
        assert_eq!(c(&[1, 3, 2]).sort_to_partition(), p(&[3, 2, 1]));
        assert_eq!(c(&[2, 2]).sort_to_partition(), p(&[2, 2]));
        assert_eq!(c(&[1, 1, 4]).sort_to_partition(), p(&[4, 1, 1]));
    }

    #[test]
    fn compositions_from_subsets() {
        assert_eq!(composition_from_subset(&[], 4).unwrap().parts(), &[4]);
        assert_eq!(composition_from_subset(&[1, 2, 3], 4).unwrap().parts(), &[1, 1, 1, 1]);
        assert_eq!(composition_from_subset(&[2, 3], 5).unwrap().parts(), &[2, 1, 2]);
        assert_eq!(
            composition_from_subset(&[5], 5),
            Err(Error::SubsetOutOfRange { index: 5, max: 4 })
        );
        assert_eq!(composition_from_subset(&[3, 2], 5), Err(Error::SubsetNotIncreasing));
    }

    #[test]
    fn subset_round_trip() {
        for n in 1..=10usize {
            for mask in 0u32..(1 << (n - 1)) {
                let subset: Vec<usize> = (1..n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                let c = composition_from_subset(&subset, n).unwrap();
                assert_eq!(c.n(), n);
                assert_eq!(c.to_subset(), subset);
            }
        }
    }

    #[test]
    fn inducing_and_scaling() {
        assert_eq!(induce_partition(&[p(&[2, 1]), p(&[2])]).unwrap(), p(&[2, 2, 1]));
        assert_eq!(induce_partition(&[p(&[1]), p(&[1])]).unwrap(), p(&[1, 1]));
        assert_eq!(induce_partition(&[p(&[3]), p(&[2, 2])]).unwrap(), p(&[3, 2, 2]));
        assert_eq!(p(&[2, 1]).scale(3).unwrap(), p(&[6, 3]));
        assert_eq!(p(&[1, 1]).scale(2).unwrap(), p(&[2, 2]));
        assert_eq!(p(&[3, 1]).scale(1).unwrap(), p(&[3, 1]));
        assert_eq!(p(&[6, 3]).unscale(3), Some(p(&[2, 1])));
        assert_eq!(p(&[6, 2]).unscale(3), None);
    }

    #[test]
    fn minimal_elements_examples() {
        assert_eq!(minimal_elements(&[p(&[2]), p(&[1, 1])]).unwrap(), vec![p(&[1, 1])]);
        assert_eq!(
            minimal_elements(&[p(&[3, 3]), p(&[4, 1, 1])]).unwrap(),
            vec![p(&[3, 3]), p(&[4, 1, 1])]
        );
        assert_eq!(minimal_elements(&[p(&[3, 1])]).unwrap(), vec![p(&[3, 1])]);
        assert!(minimal_elements(&[p(&[2]), p(&[1, 1, 1])]).is_err());
    }

    #[test]
    fn row_and_column_are_extremes() {
        for n in 1..=8 {
            let all = enumerate_partitions(n).unwrap();
            let row = Partition::row(n).unwrap();
            let col = Partition::column(n).unwrap();
            for l in &all {
                assert!(dominance_leq(l, &row).unwrap());
                assert!(dominance_leq(&col, l).unwrap());
            }
        }
    }

    #[test]
    fn serde_shapes() {
        let json = serde_json::to_string(&p(&[3, 1, 1])).unwrap();
        assert_eq!(json, "[3,1,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
        let c = Composition::new(vec![1, 3]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"composition":[1,3]}"#);
        assert_eq!(serde_json::from_str::<Composition>(&json).unwrap(), c);
    }

    #[test]
    fn parses_text() {
        assert_eq!("(3,1,1)".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("2, 1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("x".parse::<Partition>().is_err());
    }
}
