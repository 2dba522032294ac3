//! Brute-force checks over a finite field `F_q`, `q` prime.
//!
//! Everything here is split (`d = 1`) and lives at depth one, where the
//! quotient `K_0 / K_1` is `GL_n(F_q)`. At that depth the character condition
//! defining `ξ_λ`-isotypic vectors reduces to a linear one: the trace pairing
//! with a lattice vanishes mod `P` exactly when `k A_λ k⁻¹` lies in `𝔫_μ(F_q)`.
//! No roots of unity are ever built.
//!
//! The conditions counted are stable under left multiplication by the diagonal
//! torus `T`, which acts freely on `GL_n(F_q)`. Enumeration therefore walks
//! one representative per `T`-orbit (each row scaled so its first nonzero entry
//! is 1) and multiplies back by `|T| = (q-1)^n`. The size guard applies to the
//! number of representatives actually visited.

mod fq;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::MultiplicityMatrix;
use crate::partition::{enumerate_partitions, Partition};

pub use fq::{FqMatrix, MAX_Q};

use fq::{check_prime, inv_mod, rref_in_place};

/// Default cap on enumerated elements; override with `GERMKIT_ORACLE_CAP`.
pub const DEFAULT_CAP: u128 = 10_000_000;

pub const CAP_ENV: &str = "GERMKIT_ORACLE_CAP";

pub fn oracle_cap() -> Result<u128> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{CAP_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn guard(size: u128) -> Result<()> {
    let cap = oracle_cap()?;
    if size > cap {
        return Err(Error::OracleBound { size, cap });
    }
    Ok(())
}

/// `|GL_n(F_q)| = ∏_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let qn = q.pow(n as u32);
    (0..n).map(|i| &qn - q.pow(i as u32)).product()
}

/// `|P_λ(F_q)| = q^{d_λ} ∏ |GL_{λ_i}(F_q)|`.
pub fn parabolic_order(lambda: &Partition, q: u64) -> BigInt {
    let levi: BigInt = lambda.parts().iter().map(|&m| gl_order(m, q)).product();
    BigInt::from(q).pow(lambda.d() as u32) * levi
}

/// `|GL_n(F_q)| / (q-1)^n`, the number of row-normalized invertible matrices.
pub fn torus_quotient_size(n: usize, q: u64) -> BigInt {
    gl_order(n, q) / BigInt::from(q - 1).pow(n as u32)
}

fn to_u128(v: &BigInt) -> u128 {
    u128::try_from(v).unwrap_or(u128::MAX)
}

/// Block structure of the standard parabolic `P_λ`: upper block triangular
/// with diagonal blocks of sizes `λ_1, ..., λ_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicShape {
    partition: Partition,
    block: Vec<usize>,
    starts: Vec<usize>,
}

impl ParabolicShape {
    pub fn new(lambda: &Partition) -> Self {
        let mut block = Vec::with_capacity(lambda.n());
        let mut starts = Vec::with_capacity(lambda.len());
        for (b, &size) in lambda.parts().iter().enumerate() {
            starts.push(block.len());
            block.extend(std::iter::repeat_n(b, size));
        }
        ParabolicShape { partition: lambda.clone(), block, starts }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.block.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block[i]
    }

    /// Strictly upper block triangular positions: `𝔫_λ`.
    pub fn in_nilradical(&self, i: usize, j: usize) -> bool {
        self.block[i] < self.block[j]
    }

    pub fn in_levi(&self, i: usize, j: usize) -> bool {
        self.block[i] == self.block[j]
    }

    /// Strictly lower block triangular positions: `𝔫_λ⁻`.
    pub fn in_opposite(&self, i: usize, j: usize) -> bool {
        self.block[i] > self.block[j]
    }

    pub fn nilradical_dim(&self) -> usize {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.in_nilradical(i, j)).count()
    }

    pub fn nilradical_contains(&self, x: &FqMatrix) -> bool {
        x.is_square() && x.rows() == self.n() && self.contains_raw(x.data())
    }

    fn contains_raw(&self, data: &[u32]) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.in_nilradical(i, j) || data[i * n + j] == 0))
    }
}

/// The Jordan type of a nilpotent matrix, read off as kernel jumps:
/// `λ_i = dim Ker X^i - dim Ker X^{i-1}`.
pub fn nilpotent_partition(x: &FqMatrix) -> Result<Partition> {
    if !x.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let n = x.rows();
    if n == 0 {
        return Err(Error::EmptySize);
    }
    let mut parts = Vec::new();
    let mut power = x.clone();
    let mut prev_kernel = 0;
    loop {
        let kernel = n - power.rank();
        parts.push(kernel - prev_kernel);
        if kernel == n {
            break;
        }
        prev_kernel = kernel;
        power = power.mul(x)?;
    }
    Partition::new(parts)
}

/// `A_λ`: kills `e_1, ..., e_{λ_1}` and sends the `j`-th vector of each later
/// block to the `j`-th vector of the block before it.
pub fn build_a_lambda(lambda: &Partition, q: u64) -> Result<FqMatrix> {
    let n = lambda.n();
    let mut a = FqMatrix::zero(q, n, n)?;
    let starts = ParabolicShape::new(lambda).starts;
    for b in 1..lambda.len() {
        for j in 0..lambda.parts()[b] {
            a.set(starts[b - 1] + j, starts[b] + j, 1);
        }
    }
    Ok(a)
}

fn normalized_vectors(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        let count = (q as usize).pow(tail as u32);
        for mut code in 0..count {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = (code % q as usize) as u32;
                code /= q as usize;
            }
            out.push(v);
        }
    }
    out
}

struct Walker<'a, S, F> {
    n: usize,
    q: u32,
    vectors: &'a [Vec<u32>],
    rows: Vec<u32>,
    echelon: Vec<(usize, Vec<u32>)>,
    step: &'a F,
    state: S,
}

impl<S, F: Fn(&mut S, &[u32])> Walker<'_, S, F> {
    /// Reduces `v` against the current rows; `None` when `v` is in their span.
    fn reduce(&self, v: &[u32]) -> Option<(usize, Vec<u32>)> {
        let q = self.q as u64;
        let mut w = v.to_vec();
        for (p, e) in &self.echelon {
            let f = w[*p];
            if f == 0 {
                continue;
            }
            let f = (self.q - f) as u64;
            for (wi, &ei) in w.iter_mut().zip(e) {
                *wi = ((*wi as u64 + f * ei as u64) % q) as u32;
            }
        }
        let p = w.iter().position(|&x| x != 0)?;
        let inv = inv_mod(w[p], self.q) as u64;
        for wi in &mut w {
            *wi = (*wi as u64 * inv % q) as u32;
        }
        Some((p, w))
    }

    fn push(&mut self, depth: usize, v: &[u32]) -> bool {
        match self.reduce(v) {
            Some(reduced) => {
                self.rows[depth * self.n..(depth + 1) * self.n].copy_from_slice(v);
                self.echelon.push(reduced);
                true
            }
            None => false,
        }
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.n {
            (self.step)(&mut self.state, &self.rows);
            return;
        }
        for v in self.vectors {
            if self.push(depth, v) {
                self.descend(depth + 1);
                self.echelon.pop();
            }
        }
    }
}

/// Folds `step` over one representative of every left `T`-orbit in
/// `GL_n(F_q)`, in parallel over the choice of first row. Each representative
/// is passed as a row-major slice.
fn fold_torus_reps<S, I, F, M>(n: usize, q: u32, init: I, step: F, merge: M) -> Result<S>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[u32]) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    if n == 0 {
        return Err(Error::EmptySize);
    }
    guard(to_u128(&torus_quotient_size(n, q as u64)))?;
    let vectors = normalized_vectors(n, q);
    let result = vectors
        .par_iter()
        .map(|first| {
            let mut walker = Walker {
                n,
                q,
                vectors: &vectors,
                rows: vec![0; n * n],
                echelon: Vec::with_capacity(n),
                step: &step,
                state: init(),
            };
            walker.push(0, first);
            walker.descend(1);
            walker.state
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// `|P_λ(F_q) \ GL_n(F_q)|` counted two ways.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetCount {
    pub partition: Partition,
    pub q: u64,
    /// Distinct left `P_λ`-orbits found by enumeration.
    #[serde(with = "crate::bigint_serde")]
    pub orbit_count: BigInt,
    /// `|GL_n(F_q)| / |P_λ(F_q)|`.
    #[serde(with = "crate::bigint_serde")]
    pub order_quotient: BigInt,
}

/// Canonical form of the flag `span(rows in blocks ≥ b)` for `b ≥ 2`, which
/// determines the left `P_λ`-orbit of a matrix.
fn flag_key(rows: &[u32], n: usize, q: u32, starts: &[usize]) -> Vec<u32> {
    let mut key = Vec::new();
    for &s in starts.iter().skip(1) {
        let mut block = rows[s * n..].to_vec();
        rref_in_place(&mut block, n - s, n, q);
        key.extend_from_slice(&block);
    }
    key
}

/// Counts left `P_λ`-orbits on `GL_n(F_q)` exhaustively and compares with the
/// order quotient. Disagreement, or orbits of unequal size, is reported as an
/// invariant violation.
pub fn count_parabolic_cosets(lambda: &Partition, q: u64) -> Result<CosetCount> {
    let qq = check_prime(q)?;
    let n = lambda.n();
    let starts = ParabolicShape::new(lambda).starts;
    let orbits = fold_torus_reps(
        n,
        qq,
        HashMap::<Vec<u32>, u64>::new,
        |acc, rows| *acc.entry(flag_key(rows, n, qq, &starts)).or_default() += 1,
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )?;
    let (order_quotient, rem) = gl_order(n, q).div_rem(&parabolic_order(lambda, q));
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!("|GL_{n}(F_{q})| / |P_{lambda}(F_{q})|")));
    }
    let expected_size = parabolic_order(lambda, q) / BigInt::from(q - 1).pow(n as u32);
    if let Some(size) = orbits.values().find(|&&s| BigInt::from(s) != expected_size) {
        return Err(Error::OracleMismatch(format!(
            "a P_{lambda} orbit has {size} torus representatives, expected {expected_size}"
        )));
    }
    let orbit_count = BigInt::from(orbits.len());
    if orbit_count != order_quotient {
        return Err(Error::OracleMismatch(format!(
            "P_{lambda} over F_{q}: {orbit_count} orbits but order quotient {order_quotient}"
        )));
    }
    Ok(CosetCount { partition: lambda.clone(), q, orbit_count, order_quotient })
}

fn conjugate_raw(k: &[u32], a: &[u32], n: usize, q: u32) -> Vec<u32> {
    let q64 = q as u64;
    let mut aug = vec![0u32; n * 2 * n];
    for i in 0..n {
        aug[i * 2 * n..i * 2 * n + n].copy_from_slice(&k[i * n..(i + 1) * n]);
        aug[i * 2 * n + n + i] = 1;
    }
    rref_in_place(&mut aug, n, 2 * n, q);
    let kinv = |i: usize, j: usize| aug[i * 2 * n + n + j] as u64;
    let mut ka = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            ka[i * n + j] = (0..n).map(|l| k[i * n + l] as u64 * a[l * n + j] as u64).sum::<u64>() % q64;
        }
    }
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = ((0..n).map(|l| ka[i * n + l] * kinv(l, j)).sum::<u64>() % q64) as u32;
        }
    }
    out
}

/// `#{k : k A_λ k⁻¹ ∈ 𝔫_μ}` for each `μ` in `mus`, divided by `|P_μ(F_q)|`.
fn xi_row(lambda: &Partition, mus: &[Partition], q: u64) -> Result<Vec<u64>> {
    let qq = check_prime(q)?;
    let n = lambda.n();
    if let Some(mu) = mus.iter().find(|m| m.n() != n) {
        return Err(Error::SizeMismatch { left: n, right: mu.n() });
    }
    let a = build_a_lambda(lambda, q)?;
    let shapes: Vec<ParabolicShape> = mus.iter().map(ParabolicShape::new).collect();
    let counts = fold_torus_reps(
        n,
        qq,
        || vec![0u64; shapes.len()],
        |acc, k| {
            let x = conjugate_raw(k, a.data(), n, qq);
            for (slot, shape) in acc.iter_mut().zip(&shapes) {
                if shape.contains_raw(&x) {
                    *slot += 1;
                }
            }
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
    )?;
    let torus = BigInt::from(q - 1).pow(n as u32);
    counts
        .into_iter()
        .zip(mus)
        .map(|(count, mu)| {
            let (m, rem) = (BigInt::from(count) * &torus).div_rem(&parabolic_order(mu, q));
            if !rem.is_zero() {
                return Err(Error::InexactDivision(format!("ξ-count for λ={lambda}, μ={mu} over F_{q}")));
            }
            u64::try_from(&m).map_err(|_| Error::InvalidParameter("multiplicity overflows u64".into()))
        })
        .collect()
}

/// `m(ξ_λ, π_{P_μ}) = #{k ∈ GL_n(F_q) : k A_λ k⁻¹ ∈ 𝔫_μ(F_q)} / |P_μ(F_q)|`.
pub fn xi_multiplicity(lambda: &Partition, mu: &Partition, q: u64) -> Result<u64> {
    Ok(xi_row(lambda, std::slice::from_ref(mu), q)?[0])
}

/// `M[λ][μ] = m(ξ_λ, π_{P_μ})` over all of `𝔓(n)`.
pub fn multiplicity_matrix(n: usize, q: u64) -> Result<MultiplicityMatrix> {
    let partitions = enumerate_partitions(n)?;
    let mut rows = HashMap::new();
    for lambda in &partitions {
        rows.insert(lambda.clone(), xi_row(lambda, &partitions, q)?);
    }
    let index = |p: &Partition| partitions.iter().position(|x| x == p).expect("partition of n");
    MultiplicityMatrix::from_fn(n, |l, m| Ok(rows[l][index(m)]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotentCount {
    pub n: usize,
    pub q: u64,
    /// `q^{n² - n}`.
    #[serde(with = "crate::bigint_serde")]
    pub expected: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub observed: BigInt,
}

/// Counts nilpotent matrices in `M_n(F_q)` by visiting all `q^{n²}` of them.
pub fn count_nilpotent(n: usize, q: u64) -> Result<NilpotentCount> {
    let qq = check_prime(q)?;
    if n == 0 {
        return Err(Error::EmptySize);
    }
    let total = BigInt::from(q).pow((n * n) as u32);
    guard(to_u128(&total))?;
    let total = u64::try_from(&total).expect("guarded above");
    let observed = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let mut c = code;
            let data = (0..n * n)
                .map(|_| {
                    let v = (c % q) as u32;
                    c /= q;
                    v
                })
                .collect();
            FqMatrix::from_raw(qq, n, n, data).is_nilpotent()
        })
        .count();
    Ok(NilpotentCount {
        n,
        q,
        expected: BigInt::from(q).pow((n * n - n) as u32),
        observed: BigInt::from(observed),
    })
}

/// `|B(F_q) \ GL_n(F_q)|`, the number of complete flags.
pub fn complete_flags(n: usize, q: u64) -> BigInt {
    let column = Partition::column(n.max(1)).expect("n ≥ 1");
    gl_order(n, q) / parabolic_order(&column, q)
}
