//! Univariate polynomials with arbitrary-precision integer coefficients.
//!
//! The same type carries the q-analog counts (variable `q`, or `t = q^d`) and the
//! dimension polynomials (variable `X`); the variable name only matters when
//! printing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Coefficients indexed by exponent, constant term first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "QPolyWire", into = "QPolyWire")]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct QPolyWire(#[serde(with = "crate::bigint_serde::vec")] Vec<BigInt>);

impl TryFrom<QPolyWire> for QPoly {
    type Error = Error;

    fn try_from(w: QPolyWire) -> Result<Self> {
        Ok(QPoly::from_coeffs(w.0))
    }
}

impl From<QPoly> for QPolyWire {
    fn from(p: QPoly) -> Self {
        QPolyWire(p.coeffs)
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        QPoly::from_coeffs(vec![c.into()])
    }

    /// `c · X^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        QPoly::from_coeffs(coeffs)
    }

    /// The variable itself.
    pub fn x() -> Self {
        QPoly::monomial(1, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, v: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    pub fn eval_u64(&self, v: u64) -> BigInt {
        self.eval(&BigInt::from(v))
    }

    pub fn scalar_mul(&self, k: &BigInt) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(c·X)`.
    pub fn substitute_scaled(&self, c: &BigInt) -> QPoly {
        let mut power = BigInt::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power *= c;
        }
        QPoly::from_coeffs(coeffs)
    }

    /// Long division; fails unless the division is exact over the integers.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        let (quot, rem) = self.div_rem(divisor)?;
        if !rem.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / ({divisor}) leaves {rem}")));
        }
        Ok(quot)
    }

    /// Division with remainder, requiring every quotient coefficient to be integral.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::InexactDivision("division by the zero polynomial".into()));
        };
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((QPoly::zero(), self.clone()));
        };
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "leading coefficient {lead} does not divide {top}"
                )));
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| &acc * self)
    }

    /// Descending-degree rendering such as `q^2+2q+1`.
    pub fn display_desc(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            if c.is_negative() {
                out.push('-');
            } else if !first {
                out.push('+');
            }
            out.push_str(&term(&c.abs(), k, var));
        }
        out
    }

    /// Ascending-degree rendering such as `-1 + 4X`.
    pub fn display_asc(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&term(&c.abs(), k, var));
        }
        out
    }
}

fn term(abs: &BigInt, k: usize, var: &str) -> String {
    let coeff = if abs.is_one() && k > 0 { String::new() } else { abs.to_string() };
    match k {
        0 => coeff,
        1 => format!("{coeff}{var}"),
        _ => format!("{coeff}{var}^{k}"),
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_desc("q"))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({})", self.display_desc("q"))
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;

            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        -&self
    }
}

/// `[m]_q = 1 + q + ... + q^{m-1}`.
pub fn q_int(m: usize) -> Result<QPoly> {
    if m == 0 {
        return Err(Error::InvalidParameter("q-integer [m]_q needs m >= 1".into()));
    }
    Ok(QPoly::from_coeffs(vec![BigInt::one(); m]))
}

/// `[n!]_q = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: usize) -> Result<QPoly> {
    if n == 0 {
        return Err(Error::InvalidParameter("q-factorial needs n >= 1".into()));
    }
    let mut acc = QPoly::one();
    for m in 1..=n {
        acc = &acc * &q_int(m)?;
    }
    Ok(acc)
}

/// `[n!]_q / ∏ [λ_i!]_q`, computed by exact polynomial division.
pub fn q_multinomial(lambda: &Partition) -> Result<QPoly> {
    let numerator = q_factorial(lambda.n())?;
    let mut denominator = QPoly::one();
    for &part in lambda.parts() {
        denominator = &denominator * &q_factorial(part)?;
    }
    numerator.div_exact(&denominator)
}

pub fn eval_at(p: &QPoly, v: &BigInt) -> BigInt {
    p.eval(v)
}
