//! Exact orders and order-based invariants for the finite simple groups.
//!
//! The centerpiece is [`GroupSpec`]: a parsed description of a finite simple
//! group — classical, exceptional, alternating, or sporadic — optionally
//! extended by a subgroup of its outer automorphism group, with the order
//! computed exactly as a [`FactoredNat`].  Orders of the groups of Lie type
//! are assembled from cyclotomic values `Phi_m(q)` so every factor enters
//! already partially factored; the standard formulas can be found in Dixon &
//! Mortimer, *Permutation Groups* (1996), or the Atlas of Finite Groups.
//!
//! On top of the order machinery sit three consumers:
//!
//! * [`artin`] extracts from a factored order the invariants used in Emil
//!   Artin's analysis of order coincidences among the simple groups
//!   (*Comm. Pure Appl. Math.* 8 (1955), 455–472): the dominant prime `r`,
//!   its exponent, and the two largest multiplicative orders of `r` modulo
//!   the remaining prime divisors.
//! * [`same_order_scan`] enumerates every finite simple group of order up to
//!   a bound and reports the isomorphism classes that share an order.
//! * [`max_subgroup_orders`] tabulates the orders of the standard families
//!   of large subgroups of `Sym(n)` and `Alt(n)` (intransitive, imprimitive,
//!   affine, diagonal, product-action wreath, and — for `n <= 12` — the
//!   embedded almost simple groups), and [`coincidence_scan`] looks for
//!   order coincidences inside those tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::factnum::{
    cyclotomic_value_factored, factorial_factored, modpow_u64, multiplicative_order, sieve_primes,
    wreath_order, ExactRational, FactnumError, FactoredNat, DEFAULT_FACTORIAL_BOUND,
};

/// Largest degree accepted for alternating and symmetric groups, and for the
/// subgroup-order tables.
pub const MAX_DEGREE: u64 = 200;

/// Largest field size accepted for groups of Lie type.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Largest dimension accepted for the classical families.
pub const MAX_DIMENSION: u32 = 25;

/// Errors produced by catalog queries.
#[derive(Debug, Error)]
pub enum CatalogError {
    /// The family parameters do not describe a simple group in the supported
    /// range (wrong parity, solvable small case, out-of-range size, ...).
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
    /// A label passed to [`GroupSpec::parse`] was not recognized.
    #[error("unrecognized group label {0:?}")]
    UnknownLabel(String),
    /// A degree argument fell outside the supported range.
    #[error("degree {n} is outside the supported range {min}..={max}")]
    NOutOfRange { n: u64, min: u64, max: u64 },
    /// The order has no strictly dominant prime-power part.
    #[error("no dominant prime power: {0}")]
    NoDominant(String),
    /// The invariant `omega` is undefined (or would equal `psi`) because the
    /// order has no prime divisors outside its dominant part.
    #[error("omega undefined: {0}")]
    OmegaEqualsPsi(String),
    /// Arithmetic failure bubbled up from the factored-integer layer.
    #[error(transparent)]
    Factnum(#[from] FactnumError),
}

/// A family of finite simple groups together with its defining parameters.
///
/// Classical families carry the *dimension* of the natural module, so the
/// symplectic groups are `PSp(2m, q)` with even first argument and the odd
/// orthogonal groups are `POmega(2m+1, q)` with odd first argument.
/// `Symmetric(n)` is included (although not simple) because the order
/// tables and invariants are routinely evaluated on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `Alt(n)`, simple for `n >= 5`.
    Alternating(u64),
    /// `Sym(n)`; not simple, but a first-class citizen of the order tables.
    Symmetric(u64),
    /// `PSL(d, q)`, `d >= 2`, excluding the solvable `PSL(2, 2)` and
    /// `PSL(2, 3)`.
    Linear(u32, u64),
    /// `PSU(d, q)`, `d >= 3`, excluding the solvable `PSU(3, 2)`.
    Unitary(u32, u64),
    /// `PSp(2m, q)`, first argument even and at least 4, excluding
    /// `PSp(4, 2)`.
    Symplectic(u32, u64),
    /// `POmega(2m+1, q)`, first argument odd and at least 7, `q` odd.
    OrthogonalOdd(u32, u64),
    /// `POmegaPlus(2m, q)`, first argument even and at least 8.
    OrthogonalPlus(u32, u64),
    /// `POmegaMinus(2m, q)`, first argument even and at least 8.
    OrthogonalMinus(u32, u64),
    /// Suzuki groups `Sz(q)`, `q = 2^f` with `f` odd and at least 3.
    Suzuki(u64),
    /// `G2(q)`, `q >= 3` (the derived subgroup of `G2(2)` is `PSU(3, 3)`).
    G2(u64),
    /// Ree groups `Ree(q)` of type `2G2`, `q = 3^f` with `f` odd, `f >= 3`.
    Ree(u64),
    /// Triality groups `3D4(q)`.
    TrialityD4(u64),
    /// `F4(q)`.
    F4(u64),
    /// Ree groups `2F4(q)` of type `2F4`, `q = 2^f` with `f` odd, `f >= 3`;
    /// the Tits group `2F4(2)'` is catalogued as the sporadic entry `Tits`.
    F4Twisted(u64),
    /// `E6(q)`.
    E6(u64),
    /// Twisted `2E6(q)`.
    E6Twisted(u64),
    /// `E7(q)`.
    E7(u64),
    /// `E8(q)`.
    E8(u64),
    /// One of the 26 sporadic groups or the Tits group, by canonical name.
    Sporadic(String),
}

/// Name, outer automorphism group order, and factored order of each sporadic
/// group (plus the Tits group, which behaves like one for cataloguing
/// purposes).  Orders follow the Atlas of Finite Groups.
const SPORADIC_TABLE: &[(&str, u64, &[(u64, u32)])] = &[
    ("M11", 1, &[(2, 4), (3, 2), (5, 1), (11, 1)]),
    ("M12", 2, &[(2, 6), (3, 3), (5, 1), (11, 1)]),
    ("M22", 2, &[(2, 7), (3, 2), (5, 1), (7, 1), (11, 1)]),
    ("M23", 1, &[(2, 7), (3, 2), (5, 1), (7, 1), (11, 1), (23, 1)]),
    ("M24", 1, &[(2, 10), (3, 3), (5, 1), (7, 1), (11, 1), (23, 1)]),
    ("J1", 1, &[(2, 3), (3, 1), (5, 1), (7, 1), (11, 1), (19, 1)]),
    ("J2", 2, &[(2, 7), (3, 3), (5, 2), (7, 1)]),
    ("J3", 2, &[(2, 7), (3, 5), (5, 1), (17, 1), (19, 1)]),
    (
        "J4",
        1,
        &[
            (2, 21),
            (3, 3),
            (5, 1),
            (7, 1),
            (11, 3),
            (23, 1),
            (29, 1),
            (31, 1),
            (37, 1),
            (43, 1),
        ],
    ),
    (
        "Co1",
        1,
        &[(2, 21), (3, 9), (5, 4), (7, 2), (11, 1), (13, 1), (23, 1)],
    ),
    ("Co2", 1, &[(2, 18), (3, 6), (5, 3), (7, 1), (11, 1), (23, 1)]),
    ("Co3", 1, &[(2, 10), (3, 7), (5, 3), (7, 1), (11, 1), (23, 1)]),
    (
        "Fi22",
        2,
        &[(2, 17), (3, 9), (5, 2), (7, 1), (11, 1), (13, 1)],
    ),
    (
        "Fi23",
        1,
        &[
            (2, 18),
            (3, 13),
            (5, 2),
            (7, 1),
            (11, 1),
            (13, 1),
            (17, 1),
            (23, 1),
        ],
    ),
    (
        "Fi24'",
        2,
        &[
            (2, 21),
            (3, 16),
            (5, 2),
            (7, 3),
            (11, 1),
            (13, 1),
            (17, 1),
            (23, 1),
            (29, 1),
        ],
    ),
    ("HS", 2, &[(2, 9), (3, 2), (5, 3), (7, 1), (11, 1)]),
    ("McL", 2, &[(2, 7), (3, 6), (5, 3), (7, 1), (11, 1)]),
    ("He", 2, &[(2, 10), (3, 3), (5, 2), (7, 3), (17, 1)]),
    ("Ru", 1, &[(2, 14), (3, 3), (5, 3), (7, 1), (13, 1), (29, 1)]),
    (
        "Suz",
        2,
        &[(2, 13), (3, 7), (5, 2), (7, 1), (11, 1), (13, 1)],
    ),
    (
        "ON",
        2,
        &[(2, 9), (3, 4), (5, 1), (7, 3), (11, 1), (19, 1), (31, 1)],
    ),
    (
        "HN",
        2,
        &[(2, 14), (3, 6), (5, 6), (7, 1), (11, 1), (19, 1)],
    ),
    (
        "Ly",
        1,
        &[
            (2, 8),
            (3, 7),
            (5, 6),
            (7, 1),
            (11, 1),
            (31, 1),
            (37, 1),
            (67, 1),
        ],
    ),
    (
        "Th",
        1,
        &[(2, 15), (3, 10), (5, 3), (7, 2), (13, 1), (19, 1), (31, 1)],
    ),
    (
        "B",
        1,
        &[
            (2, 41),
            (3, 13),
            (5, 6),
            (7, 2),
            (11, 1),
            (13, 1),
            (17, 1),
            (19, 1),
            (23, 1),
            (31, 1),
            (47, 1),
        ],
    ),
    (
        "M",
        1,
        &[
            (2, 46),
            (3, 20),
            (5, 9),
            (7, 6),
            (11, 2),
            (13, 3),
            (17, 1),
            (19, 1),
            (23, 1),
            (29, 1),
            (31, 1),
            (41, 1),
            (47, 1),
            (59, 1),
            (71, 1),
        ],
    ),
    ("Tits", 2, &[(2, 11), (3, 3), (5, 2), (13, 1)]),
];

fn sporadic_entry(name: &str) -> Option<&'static (&'static str, u64, &'static [(u64, u32)])> {
    SPORADIC_TABLE.iter().find(|(n, _, _)| *n == name)
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Splits `q` as `p^f` with `p` prime, if possible.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    for d in 2..=q {
        if d * d > q {
            break;
        }
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut f = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        f += 1;
    }
    if rest == 1 {
        Some((p, f))
    } else {
        None
    }
}

/// `q^e - 1` assembled as the product of the cyclotomic values `Phi_m(q)`
/// over the divisors `m` of `e`, each factored separately.
fn q_pow_minus_one(q: u64, e: u32) -> Result<FactoredNat, FactnumError> {
    let mut acc = FactoredNat::one();
    for m in 1..=e {
        if e % m == 0 {
            acc = acc.mul(&cyclotomic_value_factored(m, q as i64)?);
        }
    }
    Ok(acc)
}

/// `q^e + 1` assembled as the product of `Phi_m(q)` over `m | 2e`, `m` not
/// dividing `e`.
fn q_pow_plus_one(q: u64, e: u32) -> Result<FactoredNat, FactnumError> {
    let mut acc = FactoredNat::one();
    for m in 1..=(2 * e) {
        if (2 * e) % m == 0 && e % m != 0 {
            acc = acc.mul(&cyclotomic_value_factored(m, q as i64)?);
        }
    }
    Ok(acc)
}

/// `gcd(4, q^m - 1)` without computing `q^m`.
fn gcd4_pow_minus_one(q: u64, m: u32) -> u64 {
    let r = modpow_u64(q % 4, m as u64, 4);
    match (r + 3) % 4 {
        0 => 4,
        2 => 2,
        _ => 1,
    }
}

/// `gcd(4, q^m + 1)` without computing `q^m`.
fn gcd4_pow_plus_one(q: u64, m: u32) -> u64 {
    let r = modpow_u64(q % 4, m as u64, 4);
    match (r + 1) % 4 {
        0 => 4,
        2 => 2,
        _ => 1,
    }
}

impl Family {
    /// Checks that the parameters land on a simple group (or `Sym(n)`) in
    /// the supported range.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::InvalidParameters(msg));
        let check_q = |q: u64| -> Result<(u64, u32), CatalogError> {
            if q > MAX_FIELD_SIZE {
                return Err(CatalogError::InvalidParameters(format!(
                    "field size {q} exceeds the supported maximum {MAX_FIELD_SIZE}"
                )));
            }
            prime_power(q).ok_or_else(|| {
                CatalogError::InvalidParameters(format!("{q} is not a prime power"))
            })
        };
        let check_dim = |d: u32, min: u32| -> Result<(), CatalogError> {
            if d < min || d > MAX_DIMENSION {
                Err(CatalogError::InvalidParameters(format!(
                    "dimension {d} is outside the supported range {min}..={MAX_DIMENSION}"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            Family::Alternating(n) | Family::Symmetric(n) => {
                if !(5..=MAX_DEGREE).contains(&n) {
                    bad(format!("degree {n} is outside the supported range 5..={MAX_DEGREE}"))
                } else {
                    Ok(())
                }
            }
            Family::Linear(d, q) => {
                check_q(q)?;
                check_dim(d, 2)?;
                if d == 2 && q <= 3 {
                    bad(format!("PSL(2,{q}) is solvable"))
                } else {
                    Ok(())
                }
            }
            Family::Unitary(d, q) => {
                check_q(q)?;
                check_dim(d, 3)?;
                if (d, q) == (3, 2) {
                    bad("PSU(3,2) is solvable".into())
                } else {
                    Ok(())
                }
            }
            Family::Symplectic(dim, q) => {
                check_q(q)?;
                check_dim(dim, 4)?;
                if dim % 2 != 0 {
                    bad(format!("symplectic dimension {dim} must be even"))
                } else if (dim, q) == (4, 2) {
                    bad("PSp(4,2) is isomorphic to Sym(6) and is not simple".into())
                } else {
                    Ok(())
                }
            }
            Family::OrthogonalOdd(dim, q) => {
                let (p, _) = check_q(q)?;
                check_dim(dim, 7)?;
                if dim % 2 == 0 {
                    bad(format!("odd orthogonal dimension {dim} must be odd"))
                } else if p == 2 {
                    bad(format!(
                        "POmega({dim},{q}) in characteristic 2 coincides with PSp({},{q})",
                        dim - 1
                    ))
                } else {
                    Ok(())
                }
            }
            Family::OrthogonalPlus(dim, q) | Family::OrthogonalMinus(dim, q) => {
                check_q(q)?;
                check_dim(dim, 8)?;
                if dim % 2 != 0 {
                    bad(format!("even orthogonal dimension {dim} must be even"))
                } else {
                    Ok(())
                }
            }
            Family::Suzuki(q) => {
                let (p, f) = check_q(q)?;
                if p != 2 || f % 2 == 0 || f < 3 {
                    bad(format!(
                        "Sz(q) requires q = 2^f with f odd and f >= 3; got q = {q}"
                    ))
                } else {
                    Ok(())
                }
            }
            Family::G2(q) => {
                check_q(q)?;
                if q < 3 {
                    bad("G2(2) is not simple; its derived subgroup is PSU(3,3)".into())
                } else {
                    Ok(())
                }
            }
            Family::Ree(q) => {
                let (p, f) = check_q(q)?;
                if p != 3 || f % 2 == 0 || f < 3 {
                    bad(format!(
                        "Ree(q) requires q = 3^f with f odd and f >= 3; got q = {q}"
                    ))
                } else {
                    Ok(())
                }
            }
            Family::F4Twisted(q) => {
                let (p, f) = check_q(q)?;
                if p != 2 || f % 2 == 0 || f < 3 {
                    bad(format!(
                        "2F4(q) requires q = 2^f with f odd and f >= 3 (for q = 2 see the Tits group); got q = {q}"
                    ))
                } else {
                    Ok(())
                }
            }
            Family::TrialityD4(q)
            | Family::F4(q)
            | Family::E6(q)
            | Family::E6Twisted(q)
            | Family::E7(q)
            | Family::E8(q) => check_q(q).map(|_| ()),
            Family::Sporadic(ref name) => {
                if sporadic_entry(name).is_some() {
                    Ok(())
                } else {
                    Err(CatalogError::UnknownLabel(name.clone()))
                }
            }
        }
    }

    /// The order of the simple group (or of `Sym(n)`), exactly factored.
    pub fn base_order(&self) -> Result<FactoredNat, CatalogError> {
        self.validate()?;
        let two = FactoredNat::from_u64(2)?;
        let ord = match *self {
            Family::Alternating(n) => {
                factorial_factored(n, DEFAULT_FACTORIAL_BOUND)?.div_exact(&two)?
            }
            Family::Symmetric(n) => factorial_factored(n, DEFAULT_FACTORIAL_BOUND)?,
            Family::Linear(d, q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, f * d * (d - 1) / 2)?;
                for i in 2..=d {
                    ord = ord.mul(&q_pow_minus_one(q, i)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(d as u64, q - 1))?)?
            }
            Family::Unitary(d, q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, f * d * (d - 1) / 2)?;
                for i in 2..=d {
                    let factor = if i % 2 == 0 {
                        q_pow_minus_one(q, i)?
                    } else {
                        q_pow_plus_one(q, i)?
                    };
                    ord = ord.mul(&factor);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(d as u64, q + 1))?)?
            }
            Family::Symplectic(dim, q) | Family::OrthogonalOdd(dim, q) => {
                // POmega(2m+1, q) and PSp(2m, q) have equal orders; the odd
                // orthogonal arm passes dim = 2m + 1.
                let m = dim / 2;
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, f * m * m)?;
                for i in 1..=m {
                    ord = ord.mul(&q_pow_minus_one(q, 2 * i)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(2, q - 1))?)?
            }
            Family::OrthogonalPlus(dim, q) => {
                let m = dim / 2;
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, f * m * (m - 1))?;
                ord = ord.mul(&q_pow_minus_one(q, m)?);
                for i in 1..m {
                    ord = ord.mul(&q_pow_minus_one(q, 2 * i)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd4_pow_minus_one(q, m))?)?
            }
            Family::OrthogonalMinus(dim, q) => {
                let m = dim / 2;
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, f * m * (m - 1))?;
                ord = ord.mul(&q_pow_plus_one(q, m)?);
                for i in 1..m {
                    ord = ord.mul(&q_pow_minus_one(q, 2 * i)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd4_pow_plus_one(q, m))?)?
            }
            Family::Suzuki(q) => {
                let (p, f) = prime_power(q).expect("validated");
                FactoredNat::from_prime_power(p, 2 * f)?
                    .mul(&q_pow_plus_one(q, 2)?)
                    .mul(&q_pow_minus_one(q, 1)?)
            }
            Family::G2(q) => {
                let (p, f) = prime_power(q).expect("validated");
                FactoredNat::from_prime_power(p, 6 * f)?
                    .mul(&q_pow_minus_one(q, 6)?)
                    .mul(&q_pow_minus_one(q, 2)?)
            }
            Family::Ree(q) => {
                let (p, f) = prime_power(q).expect("validated");
                FactoredNat::from_prime_power(p, 3 * f)?
                    .mul(&q_pow_plus_one(q, 3)?)
                    .mul(&q_pow_minus_one(q, 1)?)
            }
            Family::TrialityD4(q) => {
                let (p, f) = prime_power(q).expect("validated");
                // q^8 + q^4 + 1 = Phi_3(q) Phi_6(q) Phi_12(q).
                FactoredNat::from_prime_power(p, 12 * f)?
                    .mul(&cyclotomic_value_factored(3, q as i64)?)
                    .mul(&cyclotomic_value_factored(6, q as i64)?)
                    .mul(&cyclotomic_value_factored(12, q as i64)?)
                    .mul(&q_pow_minus_one(q, 6)?)
                    .mul(&q_pow_minus_one(q, 2)?)
            }
            Family::F4(q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, 24 * f)?;
                for e in [2u32, 6, 8, 12] {
                    ord = ord.mul(&q_pow_minus_one(q, e)?);
                }
                ord
            }
            Family::F4Twisted(q) => {
                let (p, f) = prime_power(q).expect("validated");
                FactoredNat::from_prime_power(p, 12 * f)?
                    .mul(&q_pow_plus_one(q, 6)?)
                    .mul(&q_pow_minus_one(q, 4)?)
                    .mul(&q_pow_plus_one(q, 3)?)
                    .mul(&q_pow_minus_one(q, 1)?)
            }
            Family::E6(q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, 36 * f)?;
                for e in [2u32, 5, 6, 8, 9, 12] {
                    ord = ord.mul(&q_pow_minus_one(q, e)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(3, q - 1))?)?
            }
            Family::E6Twisted(q) => {
                let (p, f) = prime_power(q).expect("validated");
                let ord = FactoredNat::from_prime_power(p, 36 * f)?
                    .mul(&q_pow_minus_one(q, 2)?)
                    .mul(&q_pow_plus_one(q, 5)?)
                    .mul(&q_pow_minus_one(q, 6)?)
                    .mul(&q_pow_minus_one(q, 8)?)
                    .mul(&q_pow_plus_one(q, 9)?)
                    .mul(&q_pow_minus_one(q, 12)?);
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(3, q + 1))?)?
            }
            Family::E7(q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, 63 * f)?;
                for e in [2u32, 6, 8, 10, 12, 14, 18] {
                    ord = ord.mul(&q_pow_minus_one(q, e)?);
                }
                ord.div_exact(&FactoredNat::from_u64(gcd_u64(2, q - 1))?)?
            }
            Family::E8(q) => {
                let (p, f) = prime_power(q).expect("validated");
                let mut ord = FactoredNat::from_prime_power(p, 120 * f)?;
                for e in [2u32, 8, 12, 14, 18, 20, 24, 30] {
                    ord = ord.mul(&q_pow_minus_one(q, e)?);
                }
                ord
            }
            Family::Sporadic(ref name) => {
                let (_, _, factors) = sporadic_entry(name).expect("validated");
                FactoredNat::from_factors(factors.to_vec())?
            }
        };
        Ok(ord)
    }

    /// The order of the outer automorphism group.  Assumes `validate` has
    /// passed.
    pub fn out_order(&self) -> u64 {
        let field = |q: u64| prime_power(q).expect("validated");
        match *self {
            Family::Alternating(6) => 4,
            Family::Alternating(_) => 2,
            Family::Symmetric(6) => 2,
            Family::Symmetric(_) => 1,
            Family::Linear(d, q) => {
                let (_, f) = field(q);
                gcd_u64(d as u64, q - 1) * f as u64 * if d >= 3 { 2 } else { 1 }
            }
            Family::Unitary(d, q) => {
                let (_, f) = field(q);
                gcd_u64(d as u64, q + 1) * 2 * f as u64
            }
            Family::Symplectic(dim, q) => {
                let (p, f) = field(q);
                if dim == 4 && p == 2 {
                    2 * f as u64
                } else {
                    gcd_u64(2, q - 1) * f as u64
                }
            }
            Family::OrthogonalOdd(_, q) => {
                let (_, f) = field(q);
                2 * f as u64
            }
            Family::OrthogonalPlus(dim, q) => {
                let m = dim / 2;
                let (_, f) = field(q);
                let graph = if m == 4 { 6 } else { 2 };
                gcd4_pow_minus_one(q, m) * graph * f as u64
            }
            Family::OrthogonalMinus(dim, q) => {
                let m = dim / 2;
                let (_, f) = field(q);
                gcd4_pow_plus_one(q, m) * 2 * f as u64
            }
            Family::Suzuki(q) | Family::F4Twisted(q) | Family::Ree(q) => field(q).1 as u64,
            Family::G2(q) => {
                let (p, f) = field(q);
                if p == 3 {
                    2 * f as u64
                } else {
                    f as u64
                }
            }
            Family::TrialityD4(q) => 3 * field(q).1 as u64,
            Family::F4(q) => {
                let (p, f) = field(q);
                if p == 2 {
                    2 * f as u64
                } else {
                    f as u64
                }
            }
            Family::E6(q) => {
                let (_, f) = field(q);
                gcd_u64(3, q - 1) * 2 * f as u64
            }
            Family::E6Twisted(q) => {
                let (_, f) = field(q);
                gcd_u64(3, q + 1) * 2 * f as u64
            }
            Family::E7(q) => {
                let (_, f) = field(q);
                gcd_u64(2, q - 1) * f as u64
            }
            Family::E8(q) => field(q).1 as u64,
            Family::Sporadic(ref name) => sporadic_entry(name).expect("validated").1,
        }
    }

    /// The canonical representative of this family's isomorphism class, if
    /// it is one of the classical coincidences and this spelling is not the
    /// canonical one.
    ///
    /// Every exceptional isomorphism among the supported parameters is
    /// covered: `PSL(2,4) = PSL(2,5) = Alt(5)`, `PSL(2,9) = Alt(6)`,
    /// `PSL(3,2) = PSL(2,7)`, `Alt(8) = PSL(4,2)`, and
    /// `PSU(4,2) = PSp(4,3)`.  Representatives follow common usage: the
    /// small alternating groups keep their alternating names, while the
    /// order-20160 class is written `PSL(4,2)` to keep it visibly distinct
    /// from `PSL(3,4)`.
    pub fn canonical_alias(&self) -> Option<Family> {
        match *self {
            Family::Linear(2, 4) | Family::Linear(2, 5) => Some(Family::Alternating(5)),
            Family::Linear(2, 9) => Some(Family::Alternating(6)),
            Family::Linear(3, 2) => Some(Family::Linear(2, 7)),
            Family::Alternating(8) => Some(Family::Linear(4, 2)),
            Family::Unitary(4, 2) => Some(Family::Symplectic(4, 3)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Alternating(n) => write!(f, "Alt({n})"),
            Family::Symmetric(n) => write!(f, "Sym({n})"),
            Family::Linear(d, q) => write!(f, "PSL({d},{q})"),
            Family::Unitary(d, q) => write!(f, "PSU({d},{q})"),
            Family::Symplectic(d, q) => write!(f, "PSp({d},{q})"),
            Family::OrthogonalOdd(d, q) => write!(f, "POmega({d},{q})"),
            Family::OrthogonalPlus(d, q) => write!(f, "POmegaPlus({d},{q})"),
            Family::OrthogonalMinus(d, q) => write!(f, "POmegaMinus({d},{q})"),
            Family::Suzuki(q) => write!(f, "Sz({q})"),
            Family::G2(q) => write!(f, "G2({q})"),
            Family::Ree(q) => write!(f, "Ree({q})"),
            Family::TrialityD4(q) => write!(f, "3D4({q})"),
            Family::F4(q) => write!(f, "F4({q})"),
            Family::F4Twisted(q) => write!(f, "2F4({q})"),
            Family::E6(q) => write!(f, "E6({q})"),
            Family::E6Twisted(q) => write!(f, "2E6({q})"),
            Family::E7(q) => write!(f, "E7({q})"),
            Family::E8(q) => write!(f, "E8({q})"),
            Family::Sporadic(ref name) => f.write_str(name),
        }
    }
}

/// A group from the catalog: a [`Family`] member, optionally extended by an
/// outer automorphism subgroup of the given index.
///
/// The extension multiplier only fixes the *order* of the extension — when
/// the outer automorphism group has several subgroups of one index, all of
/// them share the order computed here.  The canonical text form is
/// `Family(args)` or `Family(args).k`; [`GroupSpec::parse`] also accepts the
/// common shorthand labels `PGL(d,q)`, `PGU(d,q)`, `PGSp(2m,q)`,
/// `PGammaL(d,q)`, `PSU(4,3).D8`, `2F4(2)'`, and `O'N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
    extension_multiplier: u64,
}

impl GroupSpec {
    /// Wraps a validated family with an extension of index
    /// `extension_multiplier`, which must divide the order of the outer
    /// automorphism group.
    pub fn new(family: Family, extension_multiplier: u64) -> Result<Self, CatalogError> {
        family.validate()?;
        if extension_multiplier == 0 {
            return Err(CatalogError::InvalidParameters(
                "extension multiplier must be positive".into(),
            ));
        }
        let out = family.out_order();
        if out % extension_multiplier != 0 {
            return Err(CatalogError::InvalidParameters(format!(
                "extension multiplier {extension_multiplier} does not divide |Out({family})| = {out}"
            )));
        }
        Ok(GroupSpec {
            family,
            extension_multiplier,
        })
    }

    /// The unextended group.
    pub fn simple(family: Family) -> Result<Self, CatalogError> {
        Self::new(family, 1)
    }

    /// The underlying family.
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Index of the extension over the base group (1 for the group itself).
    pub fn extension_multiplier(&self) -> u64 {
        self.extension_multiplier
    }

    /// The exactly factored group order.
    pub fn order(&self) -> Result<FactoredNat, CatalogError> {
        let base = self.family.base_order()?;
        if self.extension_multiplier == 1 {
            return Ok(base);
        }
        Ok(base.mul(&FactoredNat::from_u64(self.extension_multiplier)?))
    }

    /// Parses a group label.
    ///
    /// Grammar: `Name(args)` optionally followed by `.k` for a numeric
    /// extension index, a sporadic-group name, or one of the shorthand
    /// labels listed on [`GroupSpec`].  The shorthands expand to the
    /// corresponding extension index — e.g. `PGL(2,5)` is `PSL(2,5).2` and
    /// `PGammaL(2,9)` is `PSL(2,9).4` — and a further `.k` suffix multiplies
    /// on top, so `PGU(3,8).3` has order `9 |PSU(3,8)|`.
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let t = text.trim();
        // Shorthand labels that do not fit the Name(args).k grammar.
        match t {
            "PSU(4,3).D8" => return Self::new(Family::Unitary(4, 3), 8),
            "2F4(2)'" => return Self::new(Family::Sporadic("Tits".into()), 1),
            "O'N" => return Self::new(Family::Sporadic("ON".into()), 1),
            _ => {}
        }
        // Optional trailing numeric extension index.
        let (head, suffix) = match t.rsplit_once('.') {
            Some((h, s)) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => {
                let mult: u64 = s.parse().map_err(|_| {
                    CatalogError::InvalidParameters(format!("extension index {s:?} out of range"))
                })?;
                (h, mult)
            }
            _ => (t, 1),
        };
        if sporadic_entry(head).is_some() {
            return Self::new(Family::Sporadic(head.to_string()), suffix);
        }
        let Some((name, rest)) = head.split_once('(') else {
            return Err(CatalogError::UnknownLabel(text.to_string()));
        };
        let Some(args_text) = rest.strip_suffix(')') else {
            return Err(CatalogError::UnknownLabel(text.to_string()));
        };
        let args: Vec<u64> = args_text
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u64>()
                    .map_err(|_| CatalogError::UnknownLabel(text.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let arg = |i: usize| -> Result<u64, CatalogError> {
            args.get(i)
                .copied()
                .ok_or_else(|| CatalogError::UnknownLabel(text.to_string()))
        };
        let expect_args = |k: usize| -> Result<(), CatalogError> {
            if args.len() == k {
                Ok(())
            } else {
                Err(CatalogError::UnknownLabel(text.to_string()))
            }
        };
        let dim_arg = |i: usize| -> Result<u32, CatalogError> {
            u32::try_from(arg(i)?)
                .map_err(|_| CatalogError::InvalidParameters(format!("dimension out of range in {text:?}")))
        };
        // Shorthands for the standard extensions of the classical groups:
        // the base family plus the implied extension index.
        let (family, implied) = match name {
            "Alt" => {
                expect_args(1)?;
                (Family::Alternating(arg(0)?), 1)
            }
            "Sym" => {
                expect_args(1)?;
                (Family::Symmetric(arg(0)?), 1)
            }
            "PSL" => {
                expect_args(2)?;
                (Family::Linear(dim_arg(0)?, arg(1)?), 1)
            }
            "PSU" => {
                expect_args(2)?;
                (Family::Unitary(dim_arg(0)?, arg(1)?), 1)
            }
            "PSp" => {
                expect_args(2)?;
                (Family::Symplectic(dim_arg(0)?, arg(1)?), 1)
            }
            "POmega" => {
                expect_args(2)?;
                (Family::OrthogonalOdd(dim_arg(0)?, arg(1)?), 1)
            }
            "POmegaPlus" => {
                expect_args(2)?;
                (Family::OrthogonalPlus(dim_arg(0)?, arg(1)?), 1)
            }
            "POmegaMinus" => {
                expect_args(2)?;
                (Family::OrthogonalMinus(dim_arg(0)?, arg(1)?), 1)
            }
            "Sz" => {
                expect_args(1)?;
                (Family::Suzuki(arg(0)?), 1)
            }
            "G2" => {
                expect_args(1)?;
                (Family::G2(arg(0)?), 1)
            }
            "Ree" => {
                expect_args(1)?;
                (Family::Ree(arg(0)?), 1)
            }
            "3D4" => {
                expect_args(1)?;
                (Family::TrialityD4(arg(0)?), 1)
            }
            "F4" => {
                expect_args(1)?;
                (Family::F4(arg(0)?), 1)
            }
            "2F4" => {
                expect_args(1)?;
                (Family::F4Twisted(arg(0)?), 1)
            }
            "E6" => {
                expect_args(1)?;
                (Family::E6(arg(0)?), 1)
            }
            "2E6" => {
                expect_args(1)?;
                (Family::E6Twisted(arg(0)?), 1)
            }
            "E7" => {
                expect_args(1)?;
                (Family::E7(arg(0)?), 1)
            }
            "E8" => {
                expect_args(1)?;
                (Family::E8(arg(0)?), 1)
            }
            "PGL" => {
                expect_args(2)?;
                let (d, q) = (dim_arg(0)?, arg(1)?);
                (Family::Linear(d, q), gcd_u64(d as u64, q.saturating_sub(1)))
            }
            "PGU" => {
                expect_args(2)?;
                let (d, q) = (dim_arg(0)?, arg(1)?);
                (Family::Unitary(d, q), gcd_u64(d as u64, q + 1))
            }
            "PGSp" => {
                expect_args(2)?;
                let (d, q) = (dim_arg(0)?, arg(1)?);
                (Family::Symplectic(d, q), gcd_u64(2, q.saturating_sub(1)))
            }
            "PGammaL" => {
                expect_args(2)?;
                let (d, q) = (dim_arg(0)?, arg(1)?);
                let f = prime_power(q)
                    .map(|(_, f)| f as u64)
                    .unwrap_or(1);
                (
                    Family::Linear(d, q),
                    gcd_u64(d as u64, q.saturating_sub(1)) * f,
                )
            }
            _ => return Err(CatalogError::UnknownLabel(text.to_string())),
        };
        Self::new(family, implied * suffix)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.extension_multiplier == 1 {
            write!(f, "{}", self.family)
        } else {
            write!(f, "{}.{}", self.family, self.extension_multiplier)
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Order-profile invariants of a factored integer, after Emil Artin's
/// analysis of order coincidences among the classical simple groups.
///
/// For an order `N` with strictly dominant prime power `r^ell`, let `S` be
/// the set of multiplicative orders of `r` modulo the other prime divisors
/// of `N`.  Then `omega = max S`, `psi` is the largest element of
/// `S \ {omega}` (zero when `S` has a single element), and the two derived
/// ratios are `f1 = ell / omega` and `f2 = omega / (omega - psi) - 2 f1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArtinInvariants {
    /// The prime whose power dominates the order.
    pub dominant_prime: u64,
    /// Exponent of the dominant prime in the order.
    pub ell: u32,
    /// Largest multiplicative order of the dominant prime modulo another
    /// prime divisor.
    pub omega: u64,
    /// Largest multiplicative order strictly below `omega` (as a set), or
    /// zero when all auxiliary primes give the same order.
    pub psi: u64,
    /// `ell / omega`.
    pub f1: ExactRational,
    /// `omega / (omega - psi) - 2 ell / omega`.
    pub f2: ExactRational,
}

/// Computes the [`ArtinInvariants`] of an exactly factored order.
///
/// Errors with [`CatalogError::NoDominant`] when the order is 1 (or has
/// tied maximal prime powers, which cannot happen for distinct primes), and
/// with [`CatalogError::OmegaEqualsPsi`] when the order is a prime power so
/// there are no auxiliary primes to measure.
pub fn artin(order: &FactoredNat) -> Result<ArtinInvariants, CatalogError> {
    let (r, _) = order
        .dominant_prime()
        .map_err(|e| CatalogError::NoDominant(e.to_string()))?;
    let ell = order.valuation(r);
    let r_signed = i64::try_from(r).map_err(|_| {
        CatalogError::InvalidParameters(format!("dominant prime {r} is too large"))
    })?;
    let mut orders = BTreeSet::new();
    for &(s, _) in order.factors() {
        if s != r {
            orders.insert(multiplicative_order(r_signed, s)?);
        }
    }
    let Some(&omega) = orders.iter().next_back() else {
        return Err(CatalogError::OmegaEqualsPsi(format!(
            "order {} is a power of {r}; no auxiliary primes remain",
            order
        )));
    };
    let psi = orders.iter().rev().nth(1).copied().unwrap_or(0);
    let f1 = ExactRational::new(ell as i64, omega as i64);
    let f2 = ExactRational::new(omega as i64, (omega - psi) as i64).sub(&f1.add(&f1));
    Ok(ArtinInvariants {
        dominant_prime: r,
        ell,
        omega,
        psi,
        f1,
        f2,
    })
}

/// A set of pairwise non-isomorphic simple groups sharing one order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderCollision {
    /// The shared order.
    pub order: FactoredNat,
    /// The groups, canonically named and sorted by label.
    pub members: Vec<GroupSpec>,
}

/// Largest scan bound for which the field-size cap `2^20` still covers
/// every candidate group.
const MAX_SCAN_BOUND: u128 = (MAX_FIELD_SIZE as u128).pow(3) / 4;

/// Enumerates all finite simple groups of order at most `bound` and returns
/// the isomorphism classes that share an order, sorted by order.
///
/// Exceptional isomorphisms are collapsed to one representative each (see
/// [`Family::canonical_alias`]), so every reported collision is a genuine
/// pair of non-isomorphic groups.
pub fn same_order_scan(bound: u128) -> Result<Vec<OrderCollision>, CatalogError> {
    if bound > MAX_SCAN_BOUND {
        return Err(CatalogError::InvalidParameters(format!(
            "scan bound {bound} exceeds the supported maximum {MAX_SCAN_BOUND}"
        )));
    }
    let mut entries: Vec<(FactoredNat, GroupSpec)> = Vec::new();
    let push = |family: Family, entries: &mut Vec<(FactoredNat, GroupSpec)>| -> Result<bool, CatalogError> {
        if family.validate().is_err() {
            return Ok(true); // skip, but keep iterating this parameter line
        }
        let order = family.base_order()?;
        if !order.le_u128(bound) {
            return Ok(false);
        }
        if family.canonical_alias().is_none() {
            entries.push((order, GroupSpec::simple(family)?));
        }
        Ok(true)
    };

    // Alternating groups; orders grow monotonically with n.
    for n in 5..=MAX_DEGREE {
        if !push(Family::Alternating(n), &mut entries)? {
            break;
        }
    }
    // Sporadic groups.
    for (name, _, _) in SPORADIC_TABLE {
        push(Family::Sporadic(name.to_string()), &mut entries)?;
    }

    // Groups of Lie type.  For each family and rank the order is strictly
    // increasing in q, and for each family it is increasing in the rank at
    // the smallest valid q, so both loops can stop at the first overflow.
    let q_cap = {
        // |PSL(2,q)| >= (q^3 - q)/2 >= q^3/4 is the slowest-growing order,
        // so q beyond (4 bound)^(1/3) cannot contribute anywhere.
        let cap = (4.0 * bound as f64).powf(1.0 / 3.0) as u64 + 16;
        cap.min(MAX_FIELD_SIZE)
    };
    let prime_powers = prime_powers_up_to(q_cap);
    let scan_q = |make: &dyn Fn(u64) -> Family,
                      entries: &mut Vec<(FactoredNat, GroupSpec)>|
     -> Result<bool, CatalogError> {
        let mut any = false;
        for &q in &prime_powers {
            let family = make(q);
            if family.validate().is_err() {
                continue;
            }
            let order = family.base_order()?;
            if !order.le_u128(bound) {
                break;
            }
            any = true;
            if family.canonical_alias().is_none() {
                entries.push((order, GroupSpec::simple(family)?));
            }
        }
        Ok(any)
    };

    for d in 2..=MAX_DIMENSION {
        if !scan_q(&|q| Family::Linear(d, q), &mut entries)? {
            break;
        }
    }
    for d in 3..=MAX_DIMENSION {
        if !scan_q(&|q| Family::Unitary(d, q), &mut entries)? {
            break;
        }
    }
    for m in 2..=MAX_DIMENSION / 2 {
        if !scan_q(&|q| Family::Symplectic(2 * m, q), &mut entries)? {
            break;
        }
    }
    for m in 3..=MAX_DIMENSION / 2 {
        if !scan_q(&|q| Family::OrthogonalOdd(2 * m + 1, q), &mut entries)? {
            break;
        }
    }
    for m in 4..=MAX_DIMENSION / 2 {
        if !scan_q(&|q| Family::OrthogonalPlus(2 * m, q), &mut entries)? {
            break;
        }
    }
    for m in 4..=MAX_DIMENSION / 2 {
        if !scan_q(&|q| Family::OrthogonalMinus(2 * m, q), &mut entries)? {
            break;
        }
    }
    scan_q(&Family::Suzuki, &mut entries)?;
    scan_q(&Family::G2, &mut entries)?;
    scan_q(&Family::Ree, &mut entries)?;
    scan_q(&Family::TrialityD4, &mut entries)?;
    scan_q(&Family::F4, &mut entries)?;
    scan_q(&Family::F4Twisted, &mut entries)?;
    scan_q(&Family::E6, &mut entries)?;
    scan_q(&Family::E6Twisted, &mut entries)?;
    scan_q(&Family::E7, &mut entries)?;
    scan_q(&Family::E8, &mut entries)?;

    let mut classes: BTreeMap<Vec<(u64, u32)>, Vec<GroupSpec>> = BTreeMap::new();
    for (order, spec) in entries {
        classes.entry(order.factors().to_vec()).or_default().push(spec);
    }
    let mut collisions = Vec::new();
    for (factors, mut members) in classes {
        if members.len() >= 2 {
            members.sort_by_key(|s| s.to_string());
            collisions.push(OrderCollision {
                order: FactoredNat::from_factors(factors)?,
                members,
            });
        }
    }
    collisions.sort_by_key(|c| c.order.to_biguint());
    Ok(collisions)
}

fn prime_powers_up_to(cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in sieve_primes(cap) {
        let mut v = p;
        loop {
            out.push(v);
            match v.checked_mul(p) {
                Some(w) if w <= cap => v = w,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// The ambient group of a subgroup-order table: `Sym(n)` or `Alt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    Symmetric,
    Alternating,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Symmetric => f.write_str("Sym"),
            Ambient::Alternating => f.write_str("Alt"),
        }
    }
}

/// The construction behind an entry of the subgroup-order table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MaxSubgroupKind {
    /// `Sym(m) x Sym(k)` fixing a subset, `m + k = n`, `m != k`.
    Intransitive { small_part: u64, large_part: u64 },
    /// `Sym(m) wr Sym(k)` preserving a partition into `k` blocks of size
    /// `m`, `n = mk`.
    Imprimitive { block_size: u64, block_count: u64 },
    /// `AGL(k, p)` on the points of affine space, `n = p^k`.
    Affine { characteristic: u64, dimension: u32 },
    /// `(T x T).(Out(T) x 2)` acting on the cosets of the diagonal,
    /// `n = |T|`.
    Diagonal { socle: String, copies: u32 },
    /// `Sym(m) wr Sym(k)` in product action, `n = m^k`, `m >= 5`, `k >= 2`.
    PrimitiveWreath { base_degree: u64, copies: u32 },
    /// An almost simple group in one of the sporadic small-degree primitive
    /// actions (tabulated for `n <= 12`).
    AlmostSimple { label: String },
}

/// One row of the subgroup-order table for `Sym(n)` or `Alt(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct MaxSubgroupEntry {
    /// Which standard construction produces the subgroup.
    pub kind: MaxSubgroupKind,
    /// Exact order of the subgroup (already intersected with `Alt(n)` when
    /// the ambient group is alternating).
    pub order: FactoredNat,
    /// Human-readable name of the subgroup.
    pub description: String,
}

/// Tabulated small-degree primitive actions of almost simple groups:
/// `(degree, ambient, label, order)`.  The Alternating rows are the groups
/// already contained in `Alt(n)`; the Symmetric rows are the ones that use
/// odd permutations.  After Dixon & Mortimer, *Permutation Groups* (1996),
/// Appendix B.
const EMBEDDED_TABLE: &[(u64, Ambient, &str, u64)] = &[
    (6, Ambient::Symmetric, "PGL(2,5)", 120),
    (6, Ambient::Alternating, "PSL(2,5)", 60),
    (7, Ambient::Alternating, "PSL(3,2)", 168),
    (8, Ambient::Symmetric, "PGL(2,7)", 336),
    (8, Ambient::Alternating, "PSL(2,7)", 168),
    (9, Ambient::Alternating, "PGammaL(2,8)", 1512),
    (10, Ambient::Symmetric, "PGammaL(2,9)", 1440),
    (10, Ambient::Alternating, "M10", 720),
    (11, Ambient::Alternating, "M11", 7920),
    (11, Ambient::Alternating, "PSL(2,11)", 660),
    (12, Ambient::Symmetric, "PGL(2,11)", 1320),
    (12, Ambient::Alternating, "M12", 95040),
    (12, Ambient::Alternating, "PSL(2,11)", 660),
];

/// Degree up to which [`EMBEDDED_TABLE`] makes the subgroup tables complete.
pub const EMBEDDED_TABLE_LIMIT: u64 = 12;

/// Orders of the standard families of large subgroups of `Sym(n)` or
/// `Alt(n)`, for `5 <= n <= 200`.
///
/// The table covers the intransitive, imprimitive, affine, diagonal, and
/// product-action wreath constructions for all `n`, plus the embedded
/// almost simple actions for `n <= 12`; beyond degree 12 entries of that
/// last kind exist but are not tabulated here.  In the alternating case
/// each order is the order of the intersection with `Alt(n)`: the subgroup
/// order is halved exactly when the construction contains odd permutations.
/// Whether an entry is actually *maximal* in the ambient group is not
/// decided here — every parameter choice is listed.
pub fn max_subgroup_orders(n: u64, ambient: Ambient) -> Result<Vec<MaxSubgroupEntry>, CatalogError> {
    if !(5..=MAX_DEGREE).contains(&n) {
        return Err(CatalogError::NOutOfRange {
            n,
            min: 5,
            max: MAX_DEGREE,
        });
    }
    let two = FactoredNat::from_u64(2)?;
    // `contained_in_alt` says whether the construction consists of even
    // permutations only; when it does not, the alternating table halves.
    let finish = |order: FactoredNat, contained_in_alt: bool| -> Result<FactoredNat, CatalogError> {
        match ambient {
            Ambient::Symmetric => Ok(order),
            Ambient::Alternating if contained_in_alt => Ok(order),
            Ambient::Alternating => Ok(order.div_exact(&two)?),
        }
    };
    let describe = |name: String, contained_in_alt: bool| -> String {
        match ambient {
            Ambient::Symmetric => name,
            Ambient::Alternating if contained_in_alt => format!("{name} (inside Alt({n}))"),
            Ambient::Alternating => format!("even part of {name}"),
        }
    };
    let mut entries = Vec::new();

    // Intransitive: Sym(m) x Sym(k) with m + k = n and m != k.  Always
    // contains a transposition.
    for m in 1..=(n - 1) / 2 {
        let k = n - m;
        let order = factorial_factored(m, DEFAULT_FACTORIAL_BOUND)?
            .mul(&factorial_factored(k, DEFAULT_FACTORIAL_BOUND)?);
        entries.push(MaxSubgroupEntry {
            kind: MaxSubgroupKind::Intransitive {
                small_part: m,
                large_part: k,
            },
            order: finish(order, false)?,
            description: describe(format!("Sym({m}) x Sym({k})"), false),
        });
    }

    // Imprimitive: Sym(m) wr Sym(k) preserving k blocks of size m.  A
    // transposition inside one block is odd.
    for m in 2..n {
        if n % m == 0 {
            let k = n / m;
            if k < 2 {
                continue;
            }
            let order = wreath_order(m, k, DEFAULT_FACTORIAL_BOUND)?;
            entries.push(MaxSubgroupEntry {
                kind: MaxSubgroupKind::Imprimitive {
                    block_size: m,
                    block_count: k,
                },
                order: finish(order, false)?,
                description: describe(
                    format!("Sym({m}) wr Sym({k}) on {k} blocks of {m}"),
                    false,
                ),
            });
        }
    }

    // Affine: AGL(k, p) on p^k points.  The group sits inside Alt(n)
    // exactly when p = 2 and k >= 3: translations are products of 2^(k-1)
    // transpositions and transvections fix a hyperplane, so all generators
    // are even; for odd p a generating scalar map is a product of p^(k-1)
    // cycles of even length.
    if let Some((p, k)) = prime_power(n) {
        let mut order = FactoredNat::from_prime_power(p, k + k * (k - 1) / 2)?;
        for j in 1..=k {
            order = order.mul(&q_pow_minus_one(p, j)?);
        }
        let contained_in_alt = p == 2 && k >= 3;
        entries.push(MaxSubgroupEntry {
            kind: MaxSubgroupKind::Affine {
                characteristic: p,
                dimension: k,
            },
            order: finish(order, contained_in_alt)?,
            description: describe(format!("AGL({k},{p})"), contained_in_alt),
        });
    }

    // Diagonal: (T x T).(Out(T) x 2) on the cosets of the diagonal copy of
    // T, so n = |T|.  In the supported range only |T| = 60 and |T| = 168
    // occur.  Both extensions use odd permutations (an outer automorphism
    // acts oddly on the cosets), so the alternating table halves.
    let diagonal_socle: Option<(&str, Family)> = match n {
        60 => Some(("Alt(5)", Family::Alternating(5))),
        168 => Some(("PSL(2,7)", Family::Linear(2, 7))),
        _ => None,
    };
    if let Some((socle_name, socle)) = diagonal_socle {
        let t = socle.base_order()?;
        let order = t
            .mul(&t)
            .mul(&FactoredNat::from_u64(socle.out_order())?)
            .mul(&two);
        entries.push(MaxSubgroupEntry {
            kind: MaxSubgroupKind::Diagonal {
                socle: socle_name.to_string(),
                copies: 2,
            },
            order: finish(order, false)?,
            description: describe(
                format!("({socle_name} x {socle_name}).(Out x 2) in diagonal action"),
                false,
            ),
        });
    }

    // Product action: Sym(m) wr Sym(k) on m^k points, m >= 5.  The base
    // transpositions move m^(k-1) pairs and the top transpositions move
    // m^(k-1)(m-1)/2 pairs, so the wreath product is contained in Alt(n)
    // exactly when m is even and either k >= 3 or m is divisible by 4.
    for m in 5..=n {
        let mut power = m * m;
        let mut k = 2u32;
        while power <= n {
            if power == n {
                let order = wreath_order(m, k as u64, DEFAULT_FACTORIAL_BOUND)?;
                let contained_in_alt = m % 2 == 0 && (k >= 3 || m % 4 == 0);
                entries.push(MaxSubgroupEntry {
                    kind: MaxSubgroupKind::PrimitiveWreath {
                        base_degree: m,
                        copies: k,
                    },
                    order: finish(order, contained_in_alt)?,
                    description: describe(
                        format!("Sym({m}) wr Sym({k}) in product action"),
                        contained_in_alt,
                    ),
                });
            }
            match power.checked_mul(m) {
                Some(next) if next <= n => {
                    power = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }

    // Embedded almost simple actions, tabulated through degree 12.  Each
    // row is recorded per ambient group, so no parity adjustment applies.
    for &(deg, amb, label, order) in EMBEDDED_TABLE {
        if deg == n && amb == ambient {
            entries.push(MaxSubgroupEntry {
                kind: MaxSubgroupKind::AlmostSimple {
                    label: label.to_string(),
                },
                order: FactoredNat::from_u64(order)?,
                description: label.to_string(),
            });
        }
    }

    Ok(entries)
}

/// A set of same-order entries inside one subgroup-order table.
#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceFinding {
    /// Degree of the ambient group.
    pub n: u64,
    /// Whether the table was for `Sym(n)` or `Alt(n)`.
    pub ambient: Ambient,
    /// The shared subgroup order.
    pub order: FactoredNat,
    /// The entries sharing it.
    pub members: Vec<MaxSubgroupEntry>,
    /// What explains the coincidence.
    pub classification: String,
}

/// Result of [`coincidence_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceReport {
    /// Largest degree scanned.
    pub n_max: u64,
    /// Degree up to which the embedded almost simple entries are complete;
    /// coincidences involving untabulated embedded groups above this degree
    /// are not visible to the scan.
    pub embedded_table_limit: u64,
    /// All order coincidences found, ordered by degree.
    pub findings: Vec<CoincidenceFinding>,
}

fn classify_coincidence(n: u64, members: &[MaxSubgroupEntry]) -> String {
    let mut kinds: Vec<std::mem::Discriminant<MaxSubgroupKind>> =
        members.iter().map(|e| std::mem::discriminant(&e.kind)).collect();
    kinds.dedup();
    let cross_kind = kinds.len() > 1;
    if n == 6 && cross_kind {
        "degree-6 coincidence: the members are exchanged by the exceptional outer automorphism \
         of the ambient group"
            .to_string()
    } else if !cross_kind {
        "same construction with distinct parameters".to_string()
    } else {
        "order coincidence outside the catalogued exceptional list".to_string()
    }
}

/// Scans the subgroup-order tables of `Sym(n)` and `Alt(n)` for
/// `5 <= n <= n_max` and reports every order shared by two or more entries
/// of one table.
pub fn coincidence_scan(n_max: u64) -> Result<CoincidenceReport, CatalogError> {
    if !(5..=MAX_DEGREE).contains(&n_max) {
        return Err(CatalogError::NOutOfRange {
            n: n_max,
            min: 5,
            max: MAX_DEGREE,
        });
    }
    let mut findings = Vec::new();
    for n in 5..=n_max {
        for ambient in [Ambient::Symmetric, Ambient::Alternating] {
            let entries = max_subgroup_orders(n, ambient)?;
            let mut by_order: BTreeMap<Vec<(u64, u32)>, Vec<usize>> = BTreeMap::new();
            for (i, entry) in entries.iter().enumerate() {
                by_order
                    .entry(entry.order.factors().to_vec())
                    .or_default()
                    .push(i);
            }
            for (factors, indices) in by_order {
                if indices.len() < 2 {
                    continue;
                }
                let members: Vec<MaxSubgroupEntry> =
                    indices.into_iter().map(|i| entries[i].clone()).collect();
                findings.push(CoincidenceFinding {
                    n,
                    ambient,
                    order: FactoredNat::from_factors(factors)?,
                    classification: classify_coincidence(n, &members),
                    members,
                });
            }
        }
    }
    Ok(CoincidenceReport {
        n_max,
        embedded_table_limit: EMBEDDED_TABLE_LIMIT,
        findings,
    })
}
