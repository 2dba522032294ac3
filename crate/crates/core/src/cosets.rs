//! Closed-form double-coset counts `|P_λ \ G / K|` for the standard Moy–Prasad
//! families of `GL_n(D)`, and the depth-scaling law.
//!
//! All base counts are polynomials in `t = q^d`, where `q` is the residue field
//! size of the base field and `d` the reduced degree of `D`. Deepening a pro-p
//! family by one step multiplies the count for `P_λ` by `t^{d_λ}`.
//!
//! Arbitrary points of the building are not modelled. For a subgroup outside the
//! named families, supply its base counts directly and use [`scale_count`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::qpoly::{q_multinomial, QPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupFamily {
    /// `K_0 = GL_n(O_D)`.
    VertexMax,
    /// `K_{1+j} = 1 + P_D^{1+j} M_n(O_D)`.
    VertexCongruence,
    /// `I_0`, the Iwahori subgroup.
    Iwahori,
    /// `I_{j+1/2}`, starting at the pro-p Iwahori subgroup.
    ProPIwahoriHalf,
    /// `I_{1+j}`.
    IwahoriCongruence,
}

impl SubgroupFamily {
    pub const ALL: [SubgroupFamily; 5] = [
        SubgroupFamily::VertexMax,
        SubgroupFamily::VertexCongruence,
        SubgroupFamily::Iwahori,
        SubgroupFamily::ProPIwahoriHalf,
        SubgroupFamily::IwahoriCongruence,
    ];

    /// Parahoric families exist at depth 0 only.
    pub fn is_parahoric(self) -> bool {
        matches!(self, SubgroupFamily::VertexMax | SubgroupFamily::Iwahori)
    }

    pub fn name(self) -> &'static str {
        match self {
            SubgroupFamily::VertexMax => "VertexMax",
            SubgroupFamily::VertexCongruence => "VertexCongruence",
            SubgroupFamily::Iwahori => "Iwahori",
            SubgroupFamily::ProPIwahoriHalf => "ProPIwahoriHalf",
            SubgroupFamily::IwahoriCongruence => "IwahoriCongruence",
        }
    }

    /// Conventional name of the member at depth `j`, e.g. `K_3` or `I_5/2`.
    pub fn member_symbol(self, j: u32) -> String {
        match self {
            SubgroupFamily::VertexMax => "K_0".into(),
            SubgroupFamily::Iwahori => "I_0".into(),
            SubgroupFamily::VertexCongruence => format!("K_{}", j + 1),
            SubgroupFamily::IwahoriCongruence => format!("I_{}", j + 1),
            SubgroupFamily::ProPIwahoriHalf => format!("I_{}/2", 2 * j + 1),
        }
    }
}

impl fmt::Display for SubgroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts the variant names and the short chain names `K0`, `K`, `I0`, `Ihalf`, `I`.
impl FromStr for SubgroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s.trim().to_ascii_lowercase().as_str() {
            "k0" | "vertexmax" | "vertex-max" => SubgroupFamily::VertexMax,
            "k" | "kchain" | "vertexcongruence" | "vertex-congruence" => SubgroupFamily::VertexCongruence,
            "i0" | "iwahori" => SubgroupFamily::Iwahori,
            "ihalf" | "propiwahorihalf" | "pro-p-iwahori-half" => SubgroupFamily::ProPIwahoriHalf,
            "i" | "ichain" | "iwahoricongruence" | "iwahori-congruence" => SubgroupFamily::IwahoriCongruence,
            _ => return Err(Error::Parse(format!("unknown subgroup family {s:?}"))),
        };
        Ok(family)
    }
}

/// A member of a named family: `family` at depth `depth`, for residue size `q`
/// and reduced degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub family: SubgroupFamily,
    pub depth: u32,
    pub q: u64,
    pub d: u32,
}

impl SubgroupSpec {
    pub fn new(family: SubgroupFamily, depth: u32, q: u64, d: u32) -> Result<Self> {
        check_q_d(q, d)?;
        if family.is_parahoric() && depth > 0 {
            return Err(Error::UnsupportedSubgroup(format!(
                "{family} is parahoric and exists at depth 0 only"
            )));
        }
        Ok(SubgroupSpec { family, depth, q, d })
    }

    /// `t = q^d`.
    pub fn t(&self) -> BigInt {
        BigInt::from(self.q).pow(self.d)
    }

    /// Same family one step deeper.
    pub fn deeper(&self, steps: u32) -> Result<Self> {
        SubgroupSpec::new(self.family, self.depth + steps, self.q, self.d)
    }
}

pub(crate) fn check_q_d(q: u64, d: u32) -> Result<()> {
    if !is_prime_power(q) {
        return Err(Error::InvalidParameter(format!("q = {q} is not a prime power")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|k| q.is_multiple_of(*k)).expect("q >= 2 has a prime factor");
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    rest == 1
}

/// `|P_λ \ G / K|` for the depth-0 member of `family`, as a polynomial in `t = q^d`.
pub fn base_count(lambda: &Partition, family: SubgroupFamily) -> Result<QPoly> {
    let poly = match family {
        SubgroupFamily::VertexMax => QPoly::one(),
        SubgroupFamily::VertexCongruence => q_multinomial(lambda)?,
        SubgroupFamily::Iwahori | SubgroupFamily::ProPIwahoriHalf => QPoly::constant(lambda.multinomial()),
        // Generalises |B\G/I_1| = 2t for n = 2; validated against the GL_2 catalog only.
        SubgroupFamily::IwahoriCongruence => QPoly::monomial(lambda.multinomial(), lambda.d()),
    };
    Ok(poly)
}

/// `|P_λ \ G / K|` for `K` the member of `spec.family` at depth `spec.depth`.
pub fn count_at_depth(lambda: &Partition, spec: &SubgroupSpec) -> Result<BigInt> {
    if spec.family.is_parahoric() && spec.depth > 0 {
        return Err(Error::UnsupportedSubgroup(format!("{} has no depth {}", spec.family, spec.depth)));
    }
    let base = base_count(lambda, spec.family)?.eval(&spec.t());
    scale_count(&base, lambda, spec.q, spec.d, spec.depth)
}

/// Applies the depth-scaling law to a user-supplied base count:
/// `base · (q^d)^{d_λ · j}`.
pub fn scale_count(base: &BigInt, lambda: &Partition, q: u64, d: u32, j: u32) -> Result<BigInt> {
    check_q_d(q, d)?;
    let exponent = d as u64 * lambda.d() as u64 * j as u64;
    Ok(base * BigInt::from(q).pow(exponent_u32(exponent)?))
}

/// `[G_{x,r} ∩ P_λ : G_{x,r+1/d} ∩ P_λ] = q^{d(n² − d_λ)}`.
pub fn parabolic_index(lambda: &Partition, q: u64, d: u32) -> Result<BigInt> {
    check_q_d(q, d)?;
    let n = lambda.n() as u64;
    let exponent = d as u64 * (n * n - lambda.d() as u64);
    Ok(BigInt::from(q).pow(exponent_u32(exponent)?))
}

fn exponent_u32(e: u64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::InvalidParameter(format!("exponent {e} is too large")))
}

/// Members of the standard `GL_2(D)` chain
/// `K_0 ⊃ I_0 ⊃ I_{1/2} ⊃ K_1 ⊃ I_1 ⊃ I_{3/2} ⊃ K_2 ⊃ ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gl2Level {
    /// `K_j`.
    K(u32),
    /// `I_j`.
    I(u32),
    /// `I_{j+1/2}`.
    IHalf(u32),
}

impl Gl2Level {
    /// Position in the chain, counting from `K_0 = 0`.
    fn position(self) -> u64 {
        match self {
            Gl2Level::K(j) => 3 * j as u64,
            Gl2Level::I(j) => 3 * j as u64 + 1,
            Gl2Level::IHalf(j) => 3 * j as u64 + 2,
        }
    }
}

impl fmt::Display for Gl2Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gl2Level::K(j) => write!(f, "K_{j}"),
            Gl2Level::I(j) => write!(f, "I_{j}"),
            Gl2Level::IHalf(j) => write!(f, "I_{}/2", 2 * j + 1),
        }
    }
}

/// Index of `to` in `from` for adjacent members of the `GL_2` chain, as a
/// polynomial in `t = q^d`.
pub fn gl2_chain_index(from: Gl2Level, to: Gl2Level) -> Result<QPoly> {
    if to.position() != from.position() + 1 {
        return Err(Error::InvalidParameter(format!("{from} and {to} are not adjacent in the chain")));
    }
    let index = match from {
        Gl2Level::K(0) => QPoly::from_i64s(&[1, 1]),
        Gl2Level::I(0) => QPoly::from_i64s(&[-1, 1]).pow(2),
        Gl2Level::K(_) => QPoly::x(),
        Gl2Level::I(_) => QPoly::monomial(1, 2),
        Gl2Level::IHalf(_) => QPoly::x(),
    };
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn spec(family: SubgroupFamily, j: u32, q: u64, d: u32) -> SubgroupSpec {
        SubgroupSpec::new(family, j, q, d).unwrap()
    }

    #[test]
    fn base_counts() {
        assert_eq!(base_count(&part(&[1, 1]), SubgroupFamily::VertexCongruence).unwrap(), QPoly::from_i64s(&[1, 1]));
        assert_eq!(base_count(&part(&[2, 1]), SubgroupFamily::Iwahori).unwrap(), QPoly::constant(3));
        assert_eq!(
            base_count(&part(&[1, 1]), SubgroupFamily::IwahoriCongruence).unwrap(),
            QPoly::from_i64s(&[0, 2])
        );
        for n in 1..=5 {
            for family in SubgroupFamily::ALL {
                assert_eq!(base_count(&Partition::row(n).unwrap(), family).unwrap(), QPoly::one());
            }
        }
    }

    #[test]
    fn gl2_counts_along_the_chain() {
        let b = part(&[1, 1]);
        for q in [2u64, 3, 5, 4] {
            for d in 1..=2u32 {
                let t = BigInt::from(q).pow(d);
                for j in 0..5u32 {
                    let tj = t.clone().pow(j);
                    let half = count_at_depth(&b, &spec(SubgroupFamily::ProPIwahoriHalf, j, q, d)).unwrap();
                    assert_eq!(half, BigInt::from(2) * &tj);
                    let k = count_at_depth(&b, &spec(SubgroupFamily::VertexCongruence, j, q, d)).unwrap();
                    assert_eq!(k, (&t + 1) * &tj);
                    let i = count_at_depth(&b, &spec(SubgroupFamily::IwahoriCongruence, j, q, d)).unwrap();
                    assert_eq!(i, BigInt::from(2) * &t * &tj);
                }
            }
        }
    }

    #[test]
    fn scaling_law_holds_for_every_family() {
        for n in 1..=5 {
            for lambda in enumerate_partitions(n).unwrap() {
                for family in [
                    SubgroupFamily::VertexCongruence,
                    SubgroupFamily::ProPIwahoriHalf,
                    SubgroupFamily::IwahoriCongruence,
                ] {
                    let base = count_at_depth(&lambda, &spec(family, 0, 3, 2)).unwrap();
                    for j in 0..=5 {
                        let got = count_at_depth(&lambda, &spec(family, j, 3, 2)).unwrap();
                        let expected = &base * BigInt::from(9u32).pow(lambda.d() as u32 * j);
                        assert_eq!(got, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn parahorics_reject_depth() {
        assert!(SubgroupSpec::new(SubgroupFamily::VertexMax, 1, 2, 1).is_err());
        assert!(SubgroupSpec::new(SubgroupFamily::Iwahori, 2, 2, 1).is_err());
        assert!(SubgroupSpec::new(SubgroupFamily::VertexCongruence, 0, 6, 1).is_err());
        assert!(SubgroupSpec::new(SubgroupFamily::VertexCongruence, 0, 4, 0).is_err());
    }

    #[test]
    fn parabolic_indices() {
        for n in 1..=4usize {
            let row = Partition::row(n).unwrap();
            let col = Partition::column(n).unwrap();
            for (q, d) in [(2u64, 1u32), (3, 2)] {
                let qb = BigInt::from(q);
                assert_eq!(parabolic_index(&row, q, d).unwrap(), qb.clone().pow((d as usize * n * n) as u32));
                assert_eq!(
                    parabolic_index(&col, q, d).unwrap(),
                    qb.pow((d as usize * n * (n + 1) / 2) as u32)
                );
            }
        }
        assert_eq!(parabolic_index(&part(&[1, 1]), 2, 1).unwrap(), BigInt::from(8));
    }

    #[test]
    fn chain_indices() {
        use Gl2Level::*;
        assert_eq!(gl2_chain_index(K(0), I(0)).unwrap(), QPoly::from_i64s(&[1, 1]));
        assert_eq!(gl2_chain_index(I(0), IHalf(0)).unwrap(), QPoly::from_i64s(&[1, -2, 1]));
        assert_eq!(gl2_chain_index(IHalf(0), K(1)).unwrap(), QPoly::x());
        assert_eq!(gl2_chain_index(K(1), I(1)).unwrap(), QPoly::x());
        assert_eq!(gl2_chain_index(I(1), IHalf(1)).unwrap(), QPoly::monomial(1, 2));
        assert_eq!(gl2_chain_index(IHalf(1), K(2)).unwrap(), QPoly::x());
        assert!(gl2_chain_index(K(0), IHalf(0)).is_err());
        assert!(gl2_chain_index(I(0), K(0)).is_err());
    }

    #[test]
    fn chain_products_match_group_orders() {
        use Gl2Level::*;
        let chain = [K(0), I(0), IHalf(0), K(1), I(1), IHalf(1), K(2)];
        let product = |from: usize, to: usize| {
            chain[from..=to]
                .windows(2)
                .fold(QPoly::one(), |acc, w| &acc * &gl2_chain_index(w[0], w[1]).unwrap())
        };
        // [K_0 : K_1] = |GL_2(F_t)| = (t^2 - 1)(t^2 - t)
        let gl2_order = &QPoly::from_i64s(&[-1, 0, 1]) * &QPoly::from_i64s(&[0, -1, 1]);
        assert_eq!(product(0, 3), gl2_order);
        // [K_1 : K_2] = t^{n^2} = t^4
        assert_eq!(product(3, 6), QPoly::monomial(1, 4));
        // [I_0 : I_1] = (t-1)^2 t^2
        assert_eq!(product(1, 4), &QPoly::from_i64s(&[1, -2, 1]) * &QPoly::monomial(1, 2));
    }

    #[test]
    fn growth_exponent_is_antitone() {
        for n in 1..=6 {
            let all = enumerate_partitions(n).unwrap();
            for a in &all {
                for b in &all {
                    if crate::partition::dominance_leq(a, b).unwrap() {
                        assert!(a.d() >= b.d());
                    }
                }
            }
        }
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("K".parse::<SubgroupFamily>().unwrap(), SubgroupFamily::VertexCongruence);
        assert_eq!("Ihalf".parse::<SubgroupFamily>().unwrap(), SubgroupFamily::ProPIwahoriHalf);
        assert_eq!("IwahoriCongruence".parse::<SubgroupFamily>().unwrap(), SubgroupFamily::IwahoriCongruence);
        assert!("J".parse::<SubgroupFamily>().is_err());
        assert_eq!(SubgroupFamily::ProPIwahoriHalf.member_symbol(2), "I_5/2");
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u64> = (1..=32).filter(|&q| is_prime_power(q)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]);
        assert!(is_prime(31) && !is_prime(1) && !is_prime(9));
    }
}
