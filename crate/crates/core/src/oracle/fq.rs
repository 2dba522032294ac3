use std::fmt;

use crate::cosets::is_prime;
use crate::error::{Error, Result};

/// Largest field size the oracle accepts; keeps every product of two entries
/// inside `u32`.
pub const MAX_Q: u32 = 65_521;

pub(crate) fn check_prime(q: u64) -> Result<u32> {
    if !is_prime(q) {
        return Err(Error::InvalidParameter(format!("oracle field size must be prime, got {q}")));
    }
    if q > MAX_Q as u64 {
        return Err(Error::InvalidParameter(format!("oracle field size {q} exceeds {MAX_Q}")));
    }
    Ok(q as u32)
}

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    let (mut r0, mut r1) = (q as i64, (a % q) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    s0.rem_euclid(q as i64) as u32
}

/// A dense matrix over the prime field `F_q`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zero(q: u64, rows: usize, cols: usize) -> Result<Self> {
        let q = check_prime(q)?;
        Ok(FqMatrix { q, rows, cols, data: vec![0; rows * cols] })
    }

    pub fn identity(q: u64, n: usize) -> Result<Self> {
        let mut m = FqMatrix::zero(q, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from integer rows, reducing every entry mod `q`.
    pub fn from_rows(q: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("rows of unequal length".into()));
        }
        let mut m = FqMatrix::zero(q, rows.len(), cols)?;
        let qi = m.q as i64;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = v.rem_euclid(qi) as u32;
            }
        }
        Ok(m)
    }

    pub(crate) fn from_raw(q: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FqMatrix { q, rows, cols, data }
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = (v % self.q as u64) as u32;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.cols.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_compatible(&self, other: &FqMatrix) -> Result<()> {
        if self.q != other.q {
            return Err(Error::InvalidParameter(format!("fields differ: F_{} and F_{}", self.q, other.q)));
        }
        if self.cols != other.rows {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_compatible(other)?;
        let q = self.q as u64;
        let mut data = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                }
                data[i * other.cols + j] = (acc % q) as u32;
            }
        }
        Ok(FqMatrix::from_raw(self.q, self.rows, other.cols, data))
    }

    pub fn pow(&self, e: u32) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidParameter("power of a non-square matrix".into()));
        }
        let mut result = FqMatrix::identity(self.q(), self.rows)?;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Reduced row echelon form, together with the pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols, m.q);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = vec![0u32; n * 2 * n];
        for i in 0..n {
            aug[i * 2 * n..i * 2 * n + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            aug[i * 2 * n + n + i] = 1;
        }
        let pivots = rref_in_place(&mut aug, n, 2 * n, self.q);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            data[i * n..(i + 1) * n].copy_from_slice(&aug[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(FqMatrix::from_raw(self.q, n, n, data))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `X^n = 0` for an `n×n` matrix.
    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_ok_and(|p| p.is_zero())
    }
}

/// Row-reduces an `rows × cols` block in place and returns the pivot columns.
pub(crate) fn rref_in_place(data: &mut [u32], rows: usize, cols: usize, q: u32) -> Vec<usize> {
    let q64 = q as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else { continue };
        if p != r {
            for k in 0..cols {
                data.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = inv_mod(data[r * cols + c], q) as u64;
        for k in c..cols {
            data[r * cols + k] = (data[r * cols + k] as u64 * inv % q64) as u32;
        }
        for i in 0..rows {
            let f = data[i * cols + c];
            if i == r || f == 0 {
                continue;
            }
            let f = (q - f) as u64;
            for k in c..cols {
                let v = data[i * cols + k] as u64 + f * data[r * cols + k] as u64;
                data[i * cols + k] = (v % q64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqMatrix(F_{}, {:?})", self.q, self.to_rows())
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_p() {
        for q in [2u32, 3, 5, 7, 65_521] {
            for a in 1..q.min(50) {
                assert_eq!(a as u64 * inv_mod(a, q) as u64 % q as u64, 1);
            }
        }
    }

    #[test]
    fn arithmetic() {
        let a = FqMatrix::from_rows(5, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FqMatrix::identity(5, 2).unwrap());
        assert_eq!(a.rank(), 2);
        let singular = FqMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
        let neg = FqMatrix::from_rows(3, &[vec![-1, 7]]).unwrap();
        assert_eq!(neg.to_rows(), vec![vec![2, 1]]);
        assert_eq!(a.pow(0).unwrap(), FqMatrix::identity(5, 2).unwrap());
        assert_eq!(a.pow(3).unwrap(), a.mul(&a).unwrap().mul(&a).unwrap());
    }

    #[test]
    fn nilpotency() {
        let j = FqMatrix::from_rows(2, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert!(j.is_nilpotent());
        assert!(!FqMatrix::identity(2, 3).unwrap().is_nilpotent());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(FqMatrix::zero(4, 2, 2).is_err());
        assert!(FqMatrix::zero(1, 2, 2).is_err());
        let a = FqMatrix::identity(2, 2).unwrap();
        let b = FqMatrix::identity(3, 2).unwrap();
        assert!(a.mul(&b).is_err());
    }
}
