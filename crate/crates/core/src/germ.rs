//! Germ-coefficient maps `c: 𝔓(n) → ℤ` and everything computed from them.
//!
//! A [`CoefficientMap`] stands in for a finite-length representation near the
//! identity: it records the integers `c(λ)` such that the representation and
//! `Σ c(λ) · ind_{P_λ}^G 1` agree on a small open subgroup. No representation
//! theory is modelled beyond that. Twisting by a character leaves `c`
//! unchanged, which holds here trivially since a map carries no character data.
//!
//! Maps with negative or zero minimal values are accepted (they describe virtual
//! representations); [`CoefficientMap::check_minimal_positivity`] flags them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cosets::{base_count, check_q_d, SubgroupFamily, SubgroupSpec};
use crate::error::{Error, Result};
use crate::partition::{dominance_leq, enumerate_partitions, induce_partition, minimal_elements, Partition};
use crate::qpoly::QPoly;

/// A finitely supported integer-valued function on partitions of `n`.
///
/// Iteration and serialization follow the crate-wide partition order: `(n)` first,
/// `(1,...,1)` last.
#[derive(Clone, PartialEq, Eq)]
pub struct CoefficientMap {
    n: usize,
    entries: BTreeMap<Partition, BigInt>,
}

impl CoefficientMap {
    /// The zero map on partitions of `n`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySize);
        }
        Ok(CoefficientMap { n, entries: BTreeMap::new() })
    }

    pub fn from_pairs<I, V>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, V)>,
        V: Into<BigInt>,
    {
        let mut map = CoefficientMap::zero(n)?;
        for (lambda, value) in pairs {
            map.add_to(&lambda, &value.into())?;
        }
        Ok(map)
    }

    /// `1_λ`.
    pub fn indicator(lambda: &Partition) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(lambda.clone(), BigInt::one());
        CoefficientMap { n: lambda.n(), entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, lambda: &Partition) -> BigInt {
        self.entries.get(lambda).cloned().unwrap_or_default()
    }

    /// Sets `c(λ)`, dropping the entry when the value is zero.
    pub fn set(&mut self, lambda: &Partition, value: BigInt) -> Result<()> {
        self.check_partition(lambda)?;
        if value.is_zero() {
            self.entries.remove(lambda);
        } else {
            self.entries.insert(lambda.clone(), value);
        }
        Ok(())
    }

    fn add_to(&mut self, lambda: &Partition, value: &BigInt) -> Result<()> {
        let updated = self.get(lambda) + value;
        self.set(lambda, updated)
    }

    fn check_partition(&self, lambda: &Partition) -> Result<()> {
        if lambda.n() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: lambda.n() });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in partition order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.entries.iter().rev()
    }

    pub fn support(&self) -> Vec<Partition> {
        self.iter().map(|(l, _)| l.clone()).collect()
    }

    /// Dominance-minimal elements of the support.
    pub fn support_min(&self) -> Vec<Partition> {
        minimal_elements(&self.support()).expect("support lies in a single 𝔓(n)")
    }

    /// Lists every minimal support element with its value; the map can only come
    /// from an actual representation if all of them are positive.
    pub fn check_minimal_positivity(&self) -> PositivityReport {
        let entries: Vec<MinimalEntry> = self
            .support_min()
            .into_iter()
            .map(|lambda| {
                let value = self.get(&lambda);
                let positive = value.is_positive();
                MinimalEntry { partition: lambda, value, positive }
            })
            .collect();
        let pass = entries.iter().all(|e| e.positive);
        PositivityReport { entries, pass }
    }

    /// `d(π) = max d_λ` over the support; the degree of every dimension polynomial
    /// barring cancellation in its top coefficient.
    pub fn gk_dimension(&self) -> Result<usize> {
        self.entries.keys().map(Partition::d).max().ok_or(Error::ZeroMap)
    }

    /// `P(X) = Σ_λ |P_λ\G/K| c(λ) X^{d_λ}`, where `K` is the depth-0 member of the
    /// family or the subgroup whose counts were supplied.
    pub fn dimension_polynomial(&self, counts: &BaseCounts, q: u64, d: u32) -> Result<DimensionPolynomial> {
        check_q_d(q, d)?;
        let t = BigInt::from(q).pow(d);
        let mut poly = QPoly::zero();
        for (lambda, value) in self.iter() {
            let count = counts.count(lambda, &t)?;
            poly = &poly + &QPoly::monomial(count * value, lambda.d());
        }
        let formal_degree = self.gk_dimension().unwrap_or(0);
        Ok(DimensionPolynomial { poly, q, d, family: counts.family(), base_depth: 0, formal_degree })
    }

    /// `dim V^K` for `K` the member of `spec` at depth `spec.depth`, via the
    /// dimension polynomial. This is the asymptotic formula: for a general
    /// representation it is only valid once `K` is small enough.
    pub fn dim_fixed(&self, spec: &SubgroupSpec) -> Result<BigInt> {
        let poly = self.dimension_polynomial(&BaseCounts::Family(spec.family), spec.q, spec.d)?;
        Ok(poly.eval_at_depth(spec.depth))
    }

    pub fn checked_add(&self, other: &CoefficientMap) -> Result<CoefficientMap> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let mut out = self.clone();
        for (lambda, value) in other.iter() {
            out.add_to(lambda, value)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &CoefficientMap) -> Result<CoefficientMap> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> CoefficientMap {
        self.scalar(&BigInt::from(-1))
    }

    pub fn scalar(&self, k: &BigInt) -> CoefficientMap {
        if k.is_zero() {
            return CoefficientMap { n: self.n, entries: BTreeMap::new() };
        }
        let entries = self.entries.iter().map(|(l, v)| (l.clone(), v * k)).collect();
        CoefficientMap { n: self.n, entries }
    }
}

impl fmt::Debug for CoefficientMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefficientMap{{n={}", self.n)?;
        for (l, v) in self.iter() {
            write!(f, ", {l}: {v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for CoefficientMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "{{}}");
        }
        let body: Vec<String> = self.iter().map(|(l, v)| format!("{l}: {v}")).collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct MapWire {
    n: usize,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    partition: Partition,
    #[serde(with = "crate::bigint_serde")]
    value: BigInt,
}

impl Serialize for CoefficientMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .iter()
            .map(|(l, v)| EntryWire { partition: l.clone(), value: v.clone() })
            .collect();
        MapWire { n: self.n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = MapWire::deserialize(d)?;
        let mut map = CoefficientMap::zero(wire.n).map_err(D::Error::custom)?;
        for e in wire.entries {
            if map.entries.contains_key(&e.partition) {
                return Err(D::Error::custom(format!("duplicate entry for {}", e.partition)));
            }
            map.set(&e.partition, e.value).map_err(D::Error::custom)?;
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalEntry {
    pub partition: Partition,
    #[serde(with = "crate::bigint_serde")]
    pub value: BigInt,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub entries: Vec<MinimalEntry>,
    pub pass: bool,
}

/// Where the base counts `|P_λ\G/K|` come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCounts {
    Family(SubgroupFamily),
    /// Counts for some other subgroup, keyed by partition.
    Custom(BTreeMap<Partition, BigInt>),
}

impl BaseCounts {
    fn count(&self, lambda: &Partition, t: &BigInt) -> Result<BigInt> {
        match self {
            BaseCounts::Family(family) => Ok(base_count(lambda, *family)?.eval(t)),
            BaseCounts::Custom(counts) => counts
                .get(lambda)
                .cloned()
                .ok_or_else(|| Error::MissingBaseCount(lambda.to_string())),
        }
    }

    fn family(&self) -> Option<SubgroupFamily> {
        match self {
            BaseCounts::Family(f) => Some(*f),
            BaseCounts::Custom(_) => None,
        }
    }
}

/// A dimension polynomial together with the data needed to read it.
///
/// `dim V^{K_j} = P(t^j)` with `t = q^d`, where `K_j` is `j` steps below the
/// base subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionPolynomial {
    pub poly: QPoly,
    pub q: u64,
    pub d: u32,
    /// `None` when built from custom base counts.
    pub family: Option<SubgroupFamily>,
    pub base_depth: u32,
    /// `max d_λ` over the support of the map.
    pub formal_degree: usize,
}

impl DimensionPolynomial {
    pub fn t(&self) -> BigInt {
        BigInt::from(self.q).pow(self.d)
    }

    /// Degree of the polynomial itself, which is below `formal_degree` exactly when
    /// the top coefficients cancel.
    pub fn actual_degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// `Σ_{d_λ = d(π)} |P_λ\G/K| c(λ)`.
    pub fn top_coefficient(&self) -> BigInt {
        self.poly.coeff(self.formal_degree)
    }

    pub fn has_top_cancellation(&self) -> bool {
        self.top_coefficient().is_zero()
    }

    /// Value `j` steps below the base subgroup.
    pub fn eval_at_depth(&self, j: u32) -> BigInt {
        self.poly.eval(&self.t().pow(j))
    }

    /// The polynomial based `steps` further down: `P(t^steps · X)`.
    pub fn deepen(&self, steps: u32) -> DimensionPolynomial {
        DimensionPolynomial {
            poly: self.poly.substitute_scaled(&self.t().pow(steps)),
            base_depth: self.base_depth + steps,
            ..self.clone()
        }
    }
}

/// The coefficient map of a parabolically induced representation:
/// `c(λ) = Σ ∏ c_i(λ_i)` over tuples `(λ_1, ..., λ_r)` inducing to `λ`.
pub fn induce_maps(maps: &[CoefficientMap]) -> Result<CoefficientMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("cannot induce from an empty list of maps".into()))?;
    let mut acc = first.clone();
    for next in rest {
        let mut out = CoefficientMap::zero(acc.n + next.n)?;
        for (la, va) in acc.iter() {
            for (lb, vb) in next.iter() {
                let lambda = induce_partition(&[la.clone(), lb.clone()])?;
                out.add_to(&lambda, &(va * vb))?;
            }
        }
        acc = out;
    }
    Ok(acc)
}

fn transfer_sign(n: usize, d: usize) -> BigInt {
    if (d * n - n).is_multiple_of(2) {
        BigInt::one()
    } else {
        BigInt::from(-1)
    }
}

/// From `GL_{dn}(F)` to `GL_n(D)`: `c'(λ) = (-1)^{dn-n} c(dλ)`. Entries of `c`
/// at partitions not of the form `dλ` are dropped.
pub fn lj_transfer(c: &CoefficientMap, n: usize, d: usize) -> Result<CoefficientMap> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("n and d must be at least 1".into()));
    }
    if c.n != d * n {
        return Err(Error::SizeMismatch { left: c.n, right: d * n });
    }
    let sign = transfer_sign(n, d);
    let mut out = CoefficientMap::zero(n)?;
    for (kappa, value) in c.iter() {
        if let Some(lambda) = kappa.unscale(d) {
            out.set(&lambda, &sign * value)?;
        }
    }
    Ok(out)
}

/// Section of [`lj_transfer`]: `c'(dλ) = (-1)^{dn-n} c(λ)`, zero elsewhere.
pub fn jl_transfer(c: &CoefficientMap, d: usize) -> Result<CoefficientMap> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let sign = transfer_sign(c.n, d);
    let mut out = CoefficientMap::zero(c.n * d)?;
    for (lambda, value) in c.iter() {
        out.set(&lambda.scale(d)?, &sign * value)?;
    }
    Ok(out)
}

/// `c((n)) = (-1)^{n-1} dim π_{dn}` for an essentially square-integrable
/// representation whose Jacquet–Langlands transfer to the division algebra has
/// dimension `dim`.
pub fn square_integrable_top_coeff(dim: u64, n: usize) -> Result<BigInt> {
    if dim == 0 || n == 0 {
        return Err(Error::InvalidParameter("dimension and n must be at least 1".into()));
    }
    let value = BigInt::from(dim);
    Ok(if n % 2 == 1 { value } else { -value })
}

/// `m(ξ_λ, π_{P_μ})` for all `λ, μ ∈ 𝔓(n)`; rows are indexed by `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityMatrix {
    n: usize,
    partitions: Vec<Partition>,
    rows: Vec<Vec<u64>>,
}

impl MultiplicityMatrix {
    /// `entry(λ, μ)` gives `M[λ][μ]`; partitions are taken in the crate-wide order.
    pub fn from_fn(n: usize, mut entry: impl FnMut(&Partition, &Partition) -> Result<u64>) -> Result<Self> {
        let partitions = enumerate_partitions(n)?;
        let mut rows = Vec::with_capacity(partitions.len());
        for lambda in &partitions {
            let row = partitions.iter().map(|mu| entry(lambda, mu)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(MultiplicityMatrix { n, partitions, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn index_of(&self, lambda: &Partition) -> Result<usize> {
        self.partitions
            .iter()
            .position(|p| p == lambda)
            .ok_or(Error::SizeMismatch { left: self.n, right: lambda.n() })
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Result<u64> {
        Ok(self.rows[self.index_of(lambda)?][self.index_of(mu)?])
    }

    /// `M[λ][λ] = 1` and `M[λ][μ] = 0` unless `μ ≤ λ`.
    pub fn check_unitriangular(&self) -> Result<()> {
        if self.partitions != enumerate_partitions(self.n)?
            || self.rows.len() != self.partitions.len()
            || self.rows.iter().any(|r| r.len() != self.partitions.len())
        {
            return Err(Error::NotUnitriangular("matrix is not indexed by all of 𝔓(n)".into()));
        }
        for (i, lambda) in self.partitions.iter().enumerate() {
            for (j, mu) in self.partitions.iter().enumerate() {
                let value = self.rows[i][j];
                if i == j && value != 1 {
                    return Err(Error::NotUnitriangular(format!("M[{lambda}][{lambda}] = {value}")));
                }
                if i != j && value != 0 && !dominance_leq(mu, lambda)? {
                    return Err(Error::NotUnitriangular(format!(
                        "M[{lambda}][{mu}] = {value} but {mu} is not below {lambda}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `m(λ) = Σ_μ c(μ) M[λ][μ]`.
pub fn forward_multiplicities(c: &CoefficientMap, m: &MultiplicityMatrix) -> Result<CoefficientMap> {
    if c.n != m.n {
        return Err(Error::SizeMismatch { left: c.n, right: m.n });
    }
    let mut out = CoefficientMap::zero(c.n)?;
    for lambda in &m.partitions {
        let mut total = BigInt::zero();
        for (mu, value) in c.iter() {
            total += value * BigInt::from(m.get(lambda, mu)?);
        }
        out.set(lambda, total)?;
    }
    Ok(out)
}

/// Recovers `c` from the multiplicities `m(λ) = m(ξ_λ, π)` by upward induction
/// along dominance: `c(λ) = m(λ) - Σ_{μ<λ} c(μ) M[λ][μ]`.
pub fn solve_from_multiplicities(m: &CoefficientMap, matrix: &MultiplicityMatrix) -> Result<CoefficientMap> {
    matrix.check_unitriangular()?;
    if m.n != matrix.n {
        return Err(Error::SizeMismatch { left: m.n, right: matrix.n });
    }
    let mut c = CoefficientMap::zero(m.n)?;
    // Reverse of the crate order is lexicographically increasing, a linear
    // extension of dominance, so every μ < λ is solved before λ.
    for (i, lambda) in matrix.partitions.iter().enumerate().rev() {
        let mut value = m.get(lambda);
        for (j, mu) in matrix.partitions.iter().enumerate().skip(i + 1) {
            let entry = matrix.rows[i][j];
            if entry != 0 {
                value -= c.get(mu) * BigInt::from(entry);
            }
        }
        c.set(lambda, value)?;
    }
    Ok(c)
}

/// Dimensions of the degenerate Whittaker spaces at the minimal support: the
/// restriction of `c` to its dominance-minimal support.
pub fn whittaker_dims(c: &CoefficientMap) -> Result<Vec<(Partition, BigInt)>> {
    let report = c.check_minimal_positivity();
    if let Some(bad) = report.entries.iter().find(|e| !e.positive) {
        return Err(Error::MinimalNotPositive { partition: bad.partition.to_string(), value: bad.value.to_string() });
    }
    Ok(report.entries.into_iter().map(|e| (e.partition, e.value)).collect())
}
