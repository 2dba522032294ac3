//! Fixed-vector dimensions for irreducible representations of `GL_2(D)`.
//!
//! Every finite-length representation has `dim π^K = a + b · |B\G/K|` for the
//! pro-p subgroups `K` of the three Moy–Prasad chains, with the pair `(a, b)`
//! additive in `π`. This module tabulates `(a, b)` for the standard classes and
//! evaluates the three chain formulas, with `t = q^d`:
//!
//! * `I_{1/2+j}`: `a + 2b t^j`
//! * `K_{1+j}`: `a + (t+1) b t^j`
//! * `I_{1+j}`: `a + 2t b t^j`
//!
//! The formulas are taken to hold from `j = 0` on. A negative value is reported
//! as [`Error::BelowValidity`] since it can only mean the class needs a larger
//! starting depth (supercuspidals of positive level do).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cosets::{check_q_d, is_prime, SubgroupFamily, SubgroupSpec};
use crate::error::{Error, Result};
use crate::germ::CoefficientMap;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChainMember {
    /// `I_{1/2+j}`
    IHalf,
    /// `K_{1+j}`
    Kchain,
    /// `I_{1+j}`
    Ichain,
}

impl ChainMember {
    pub const ALL: [ChainMember; 3] = [ChainMember::IHalf, ChainMember::Kchain, ChainMember::Ichain];

    pub fn family(self) -> SubgroupFamily {
        match self {
            ChainMember::IHalf => SubgroupFamily::ProPIwahoriHalf,
            ChainMember::Kchain => SubgroupFamily::VertexCongruence,
            ChainMember::Ichain => SubgroupFamily::IwahoriCongruence,
        }
    }

    /// The subgroup `j` steps down the chain.
    pub fn spec(self, j: u32, q: u64, d: u32) -> Result<SubgroupSpec> {
        SubgroupSpec::new(self.family(), j, q, d)
    }

    /// `|B\G/K|` for the member at depth `j`, as a multiple of `t^j`.
    fn base(self, t: &BigInt) -> BigInt {
        match self {
            ChainMember::IHalf => BigInt::from(2),
            ChainMember::Kchain => t + 1,
            ChainMember::Ichain => t * 2,
        }
    }
}

impl fmt::Display for ChainMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMember::IHalf => "IHalf",
            ChainMember::Kchain => "Kchain",
            ChainMember::Ichain => "Ichain",
        })
    }
}

impl FromStr for ChainMember {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ihalf" | "i-half" => Ok(ChainMember::IHalf),
            "kchain" | "k" => Ok(ChainMember::Kchain),
            "ichain" | "i" => Ok(ChainMember::Ichain),
            _ => Err(Error::InvalidParameter(format!("unknown chain member {s:?}; expected IHalf, Kchain or Ichain"))),
        }
    }
}

/// Classes of irreducible representations of `GL_2(D)` with known `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gl2Rep {
    /// A finite-dimensional irreducible of the given dimension.
    FiniteDim(u64),
    /// `ind_B^G σ` with `dim σ` given.
    PrincipalSeries(u64),
    /// A character twist of the Steinberg representation.
    SteinbergTwist,
    /// The cuspidal subrepresentation of a reducible Steinberg, which occurs only
    /// in characteristic `ℓ | q^d + 1`.
    CuspidalSteinberg,
    /// The Speh representation `Z(Δ_{ρ,2})` for `dim ρ > 1`: `a = dim π_{ρ,2}`,
    /// and `b` is known only through `b_Z + b_L = dim σ`.
    SpehPair { dim_pi2: u64, b: Option<u64> },
    /// The essentially square-integrable `L(Δ_{ρ,2})`: `a = -dim π_{ρ,2}`.
    EssSquareIntegrablePair { dim_pi2: u64, b: Option<u64> },
    /// A minimal supercuspidal of `GL_2(F)` (so `d = 1`) with normalized level
    /// `level_halves / 2`.
    SupercuspidalGLn2F { level_halves: u32 },
    /// A supersingular mod-p representation of `GL_2(Q_p)`; see
    /// [`modp_supersingular_dims`].
    ModPSupersingular { twist_of_pi0: bool },
}

impl Gl2Rep {
    /// Splits `ind_B^G σ` into its Speh and square-integrable factors with
    /// `b_Z = b_speh` and `b_L = dim σ - b_speh`, both required positive.
    pub fn speh_split(dim_pi2: u64, dim_sigma: u64, b_speh: u64) -> Result<(Gl2Rep, Gl2Rep)> {
        if dim_pi2 == 0 {
            return Err(Error::InvalidParameter("dim π_{ρ,2} must be at least 1".into()));
        }
        if b_speh == 0 || b_speh >= dim_sigma {
            return Err(Error::InvalidParameter(format!(
                "both Whittaker dimensions must be positive: b_Z = {b_speh}, b_L = {}",
                dim_sigma as i128 - b_speh as i128
            )));
        }
        Ok((
            Gl2Rep::SpehPair { dim_pi2, b: Some(b_speh) },
            Gl2Rep::EssSquareIntegrablePair { dim_pi2, b: Some(dim_sigma - b_speh) },
        ))
    }

    pub fn name(&self) -> String {
        match self {
            Gl2Rep::FiniteDim(k) => format!("finite-dimensional (dim {k})"),
            Gl2Rep::PrincipalSeries(s) => format!("ind_B^G σ (dim σ = {s})"),
            Gl2Rep::SteinbergTwist => "St ⊗ χ".into(),
            Gl2Rep::CuspidalSteinberg => "cSt".into(),
            Gl2Rep::SpehPair { dim_pi2, .. } => format!("Z(Δ_ρ,2) (dim π_ρ,2 = {dim_pi2})"),
            Gl2Rep::EssSquareIntegrablePair { dim_pi2, .. } => format!("L(Δ_ρ,2) (dim π_ρ,2 = {dim_pi2})"),
            Gl2Rep::SupercuspidalGLn2F { level_halves } => format!("supercuspidal, level {}", half_str(*level_halves)),
            Gl2Rep::ModPSupersingular { twist_of_pi0: true } => "supersingular π_0 ⊗ χ (mod p)".into(),
            Gl2Rep::ModPSupersingular { twist_of_pi0: false } => "supersingular, not a twist of π_0 (mod p)".into(),
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} must be at least 1")));
        match *self {
            Gl2Rep::FiniteDim(0) => bad("dimension"),
            Gl2Rep::PrincipalSeries(0) => bad("dim σ"),
            Gl2Rep::SpehPair { dim_pi2: 0, .. } | Gl2Rep::EssSquareIntegrablePair { dim_pi2: 0, .. } => {
                bad("dim π_{ρ,2}")
            }
            Gl2Rep::SpehPair { b: Some(0), .. } | Gl2Rep::EssSquareIntegrablePair { b: Some(0), .. } => {
                bad("b for an infinite-dimensional irreducible")
            }
            _ => Ok(()),
        }
    }
}

fn half_str(h: u32) -> String {
    if h.is_multiple_of(2) {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

/// `(a_π, b_π)` for the class. Supercuspidals need `d = 1`; the Speh pair
/// needs an explicit `b`.
pub fn ab_coefficients(rep: &Gl2Rep, q: u64, d: u32) -> Result<(BigInt, BigInt)> {
    check_q_d(q, d)?;
    rep.check()?;
    let pair = |a: i64, b: i64| Ok((BigInt::from(a), BigInt::from(b)));
    match *rep {
        Gl2Rep::FiniteDim(k) => Ok((BigInt::from(k), BigInt::zero())),
        Gl2Rep::PrincipalSeries(s) => Ok((BigInt::zero(), BigInt::from(s))),
        Gl2Rep::SteinbergTwist => pair(-1, 1),
        Gl2Rep::CuspidalSteinberg => pair(-2, 1),
        Gl2Rep::SpehPair { dim_pi2, b } => match b {
            Some(b) => Ok((BigInt::from(dim_pi2), BigInt::from(b))),
            None => Err(Error::SymbolicCoefficient(rep.name())),
        },
        Gl2Rep::EssSquareIntegrablePair { dim_pi2, b } => match b {
            Some(b) => Ok((-BigInt::from(dim_pi2), BigInt::from(b))),
            None => Err(Error::SymbolicCoefficient(rep.name())),
        },
        Gl2Rep::SupercuspidalGLn2F { level_halves } => {
            if d != 1 {
                return Err(Error::InvalidParameter("the supercuspidal formula is for GL_2(F), d = 1".into()));
            }
            Ok((-supercuspidal_jl_dim(level_halves, q), BigInt::from(1)))
        }
        Gl2Rep::ModPSupersingular { .. } => Err(Error::InvalidParameter(
            "mod-p supersingular classes have no (a, b) pair; use modp_supersingular_dims".into(),
        )),
    }
}

/// Dimension of the representation of the quaternion units attached to a
/// minimal supercuspidal of level `ℓ`: `2q^ℓ` for integral `ℓ`, else
/// `(q+1)q^{ℓ-1/2}`.
pub fn supercuspidal_jl_dim(level_halves: u32, q: u64) -> BigInt {
    let q = BigInt::from(q);
    if level_halves.is_multiple_of(2) {
        q.pow(level_halves / 2) * 2
    } else {
        (&q + 1) * q.pow(level_halves / 2)
    }
}

/// The chain formula for arbitrary `(a, b)`, without any validity check.
pub fn chain_dimension(a: &BigInt, b: &BigInt, member: ChainMember, j: u32, q: u64, d: u32) -> Result<BigInt> {
    check_q_d(q, d)?;
    let t = BigInt::from(q).pow(d);
    Ok(a + member.base(&t) * b * t.pow(j))
}

/// `dim π^K` for `K` the member at depth `j` of the given chain.
pub fn dim_invariants(rep: &Gl2Rep, member: ChainMember, j: u32, q: u64, d: u32) -> Result<BigInt> {
    let (a, b) = ab_coefficients(rep, q, d)?;
    let value = chain_dimension(&a, &b, member, j, q, d)?;
    if value.is_negative() {
        return Err(Error::BelowValidity { value: value.to_string(), j });
    }
    Ok(value)
}

/// `{(2): a, (1,1): b}`.
pub fn to_coefficient_map(rep: &Gl2Rep, q: u64, d: u32) -> Result<CoefficientMap> {
    let (a, b) = ab_coefficients(rep, q, d)?;
    CoefficientMap::from_pairs(2, [(Partition::row(2)?, a), (Partition::column(2)?, b)])
}

/// Dimensions for supersingular mod-p representations of `GL_2(Q_p)`, `p` odd:
/// `-2 + 4p^j` on `I_{1/2+j}`, and `a' + 2(p+1)p^j` on `K_{1+j}` with `a' = -3`
/// for twists of `π_0` and `-4` otherwise. No formula is known for `I_{1+j}`.
pub fn modp_supersingular_dims(twist_of_pi0: bool, member: ChainMember, j: u32, p: u64) -> Result<BigInt> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParameter(format!("p must be an odd prime, got {p}")));
    }
    let (a, b) = (BigInt::from(-2), BigInt::from(2));
    let pj = BigInt::from(p).pow(j);
    match member {
        ChainMember::IHalf => Ok(a + b * 2 * pj),
        ChainMember::Kchain => {
            let a_prime = BigInt::from(if twist_of_pi0 { -3 } else { -4 });
            Ok(a_prime + BigInt::from(p + 1) * b * pj)
        }
        ChainMember::Ichain => Err(Error::InvalidParameter("no I_{1+j} formula for supersingular classes".into())),
    }
}

/// One row of the catalog at fixed `(q, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub class: String,
    #[serde(with = "crate::bigint_serde::option")]
    pub a: Option<BigInt>,
    #[serde(with = "crate::bigint_serde::option")]
    pub b: Option<BigInt>,
    /// Values for `j = 0, 1, ...` per chain member; `None` where a parameter is
    /// undetermined or no formula exists. Negative values are kept and flagged.
    pub dims: Vec<ChainRow>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub member: ChainMember,
    #[serde(with = "crate::bigint_serde::option_vec")]
    pub values: Option<Vec<BigInt>>,
}

/// Representative members of every class, evaluated for `j ≤ max_j`.
pub fn catalog(q: u64, d: u32, max_j: u32) -> Result<Vec<CatalogRow>> {
    check_q_d(q, d)?;
    let mut reps = vec![
        Gl2Rep::FiniteDim(1),
        Gl2Rep::PrincipalSeries(1),
        Gl2Rep::PrincipalSeries(2),
        Gl2Rep::SteinbergTwist,
        Gl2Rep::CuspidalSteinberg,
        Gl2Rep::SpehPair { dim_pi2: 1, b: None },
        Gl2Rep::EssSquareIntegrablePair { dim_pi2: 1, b: None },
    ];
    if d == 1 {
        reps.extend((0..=3).map(|h| Gl2Rep::SupercuspidalGLn2F { level_halves: h }));
    }
    let mut rows = Vec::new();
    for rep in reps {
        rows.push(catalog_row(&rep, q, d, max_j)?);
    }
    if d == 1 && is_prime(q) && q != 2 {
        for twist in [true, false] {
            rows.push(modp_row(twist, q, max_j)?);
        }
    }
    Ok(rows)
}

fn catalog_row(rep: &Gl2Rep, q: u64, d: u32, max_j: u32) -> Result<CatalogRow> {
    match ab_coefficients(rep, q, d) {
        Ok((a, b)) => {
            let mut below = false;
            let mut dims = Vec::new();
            for member in ChainMember::ALL {
                let values = (0..=max_j)
                    .map(|j| chain_dimension(&a, &b, member, j, q, d))
                    .collect::<Result<Vec<_>>>()?;
                below |= values.iter().any(Signed::is_negative);
                dims.push(ChainRow { member, values: Some(values) });
            }
            let note = below.then(|| "negative entries lie below the validity threshold".to_string());
            Ok(CatalogRow { class: rep.name(), a: Some(a), b: Some(b), dims, note })
        }
        Err(Error::SymbolicCoefficient(_)) => {
            let name = match rep {
                Gl2Rep::SpehPair { .. } => "Z(Δ_ρ,2)",
                _ => "L(Δ_ρ,2)",
            };
            let sign = if matches!(rep, Gl2Rep::SpehPair { .. }) { "" } else { "-" };
            Ok(CatalogRow {
                class: format!("{name}, dim ρ > 1"),
                a: None,
                b: None,
                dims: ChainMember::ALL.iter().map(|&member| ChainRow { member, values: None }).collect(),
                note: Some(format!("a = {sign}dim π_ρ,2; b_Z + b_L = dim σ with both positive")),
            })
        }
        Err(e) => Err(e),
    }
}

fn modp_row(twist: bool, p: u64, max_j: u32) -> Result<CatalogRow> {
    let rep = Gl2Rep::ModPSupersingular { twist_of_pi0: twist };
    let mut dims = Vec::new();
    for member in ChainMember::ALL {
        let values = match member {
            ChainMember::Ichain => None,
            _ => Some((0..=max_j).map(|j| modp_supersingular_dims(twist, member, j, p)).collect::<Result<_>>()?),
        };
        dims.push(ChainRow { member, values });
    }
    let a_prime = if twist { -3 } else { -4 };
    Ok(CatalogRow {
        class: rep.name(),
        a: Some(BigInt::from(-2)),
        b: Some(BigInt::from(2)),
        dims,
        note: Some(format!("K-chain uses a' = {a_prime}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(rep: Gl2Rep, q: u64, d: u32) -> (i64, i64) {
        let (a, b) = ab_coefficients(&rep, q, d).unwrap();
        (i64::try_from(a).unwrap(), i64::try_from(b).unwrap())
    }

    #[test]
    fn ab_table() {
        assert_eq!(ab(Gl2Rep::SteinbergTwist, 3, 1), (-1, 1));
        assert_eq!(ab(Gl2Rep::FiniteDim(1), 3, 1), (1, 0));
        assert_eq!(ab(Gl2Rep::PrincipalSeries(3), 2, 2), (0, 3));
        assert_eq!(ab(Gl2Rep::CuspidalSteinberg, 2, 1), (-2, 1));
        assert_eq!(ab(Gl2Rep::SupercuspidalGLn2F { level_halves: 1 }, 3, 1), (-4, 1));
        assert_eq!(ab(Gl2Rep::SupercuspidalGLn2F { level_halves: 2 }, 3, 1), (-6, 1));
        assert_eq!(ab(Gl2Rep::SupercuspidalGLn2F { level_halves: 3 }, 5, 1), (-30, 1));
    }

    #[test]
    fn additivity() {
        for (q, d) in [(2, 1), (3, 2)] {
            let (a1, b1) = ab(Gl2Rep::FiniteDim(1), q, d);
            let (a2, b2) = ab(Gl2Rep::SteinbergTwist, q, d);
            assert_eq!((a1 + a2, b1 + b2), ab(Gl2Rep::PrincipalSeries(1), q, d));
        }
    }

    #[test]
    fn speh_pairs() {
        let (z, l) = Gl2Rep::speh_split(6, 4, 1).unwrap();
        let (az, bz) = ab(z, 3, 2);
        let (al, bl) = ab(l, 3, 2);
        assert_eq!(az + al, 0);
        assert_eq!(bz + bl, 4);
        assert!(Gl2Rep::speh_split(6, 4, 0).is_err());
        assert!(Gl2Rep::speh_split(6, 4, 4).is_err());
        assert!(Gl2Rep::speh_split(6, 1, 1).is_err());
        let symbolic = Gl2Rep::SpehPair { dim_pi2: 6, b: None };
        assert!(matches!(ab_coefficients(&symbolic, 3, 2), Err(Error::SymbolicCoefficient(_))));
    }

    #[test]
    fn chain_values() {
        let st = Gl2Rep::SteinbergTwist;
        assert_eq!(dim_invariants(&st, ChainMember::Kchain, 0, 3, 1).unwrap(), BigInt::from(3));
        let ps = Gl2Rep::PrincipalSeries(5);
        assert_eq!(dim_invariants(&ps, ChainMember::Ichain, 1, 2, 1).unwrap(), BigInt::from(40));
        for member in ChainMember::ALL {
            for j in 0..4 {
                assert_eq!(dim_invariants(&Gl2Rep::FiniteDim(3), member, j, 5, 2).unwrap(), BigInt::from(3));
            }
        }
    }

    #[test]
    fn depth_zero_supercuspidal() {
        // Cuspidal representations of GL_2(F_q) have dimension q - 1 and no
        // vectors fixed by the unipotent radical of the Borel.
        let sc = Gl2Rep::SupercuspidalGLn2F { level_halves: 0 };
        for q in [2, 3, 5, 7] {
            assert_eq!(dim_invariants(&sc, ChainMember::Kchain, 0, q, 1).unwrap(), BigInt::from(q - 1));
            assert_eq!(dim_invariants(&sc, ChainMember::IHalf, 0, q, 1).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn validity_threshold() {
        let sc = Gl2Rep::SupercuspidalGLn2F { level_halves: 1 };
        let err = dim_invariants(&sc, ChainMember::IHalf, 0, 3, 1).unwrap_err();
        assert!(matches!(err, Error::BelowValidity { j: 0, .. }));
        assert!(err.is_invariant_violation());
        assert_eq!(dim_invariants(&sc, ChainMember::IHalf, 1, 3, 1).unwrap(), BigInt::from(2));
        assert!(ab_coefficients(&sc, 3, 2).is_err());
    }

    #[test]
    fn modp_values() {
        assert_eq!(modp_supersingular_dims(false, ChainMember::IHalf, 0, 3).unwrap(), BigInt::from(2));
        assert_eq!(modp_supersingular_dims(true, ChainMember::Kchain, 0, 3).unwrap(), BigInt::from(5));
        assert_eq!(modp_supersingular_dims(false, ChainMember::Kchain, 1, 3).unwrap(), BigInt::from(20));
        assert!(modp_supersingular_dims(true, ChainMember::IHalf, 0, 2).is_err());
        assert!(modp_supersingular_dims(true, ChainMember::IHalf, 0, 9).is_err());
        assert!(modp_supersingular_dims(true, ChainMember::Ichain, 0, 3).is_err());
        let rep = Gl2Rep::ModPSupersingular { twist_of_pi0: true };
        assert!(to_coefficient_map(&rep, 3, 1).is_err());
    }

    #[test]
    fn coefficient_maps() {
        let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
        let st = to_coefficient_map(&Gl2Rep::SteinbergTwist, 2, 1).unwrap();
        assert_eq!(st, CoefficientMap::from_pairs(2, [(p(&[2]), -1), (p(&[1, 1]), 1)]).unwrap());
        let ps = to_coefficient_map(&Gl2Rep::PrincipalSeries(1), 2, 1).unwrap();
        assert_eq!(ps, CoefficientMap::from_pairs(2, [(p(&[1, 1]), 1)]).unwrap());
        let cst = to_coefficient_map(&Gl2Rep::CuspidalSteinberg, 2, 1).unwrap();
        assert_eq!(cst, CoefficientMap::from_pairs(2, [(p(&[2]), -2), (p(&[1, 1]), 1)]).unwrap());
    }

    #[test]
    fn catalog_shape() {
        let rows = catalog(3, 1, 2).unwrap();
        assert_eq!(rows.len(), 13);
        let st = rows.iter().find(|r| r.class == "St ⊗ χ").unwrap();
        assert_eq!(st.dims[1].values.as_ref().unwrap()[0], BigInt::from(3));
        assert_eq!(catalog(2, 2, 1).unwrap().len(), 7);
        assert!(catalog(4, 1, 1).unwrap().iter().all(|r| !r.class.contains("mod p")));
    }
}
