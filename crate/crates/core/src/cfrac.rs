//! Negative (Hirzebruch–Jung) continued fractions
//!
//! `p/q = a₁ − 1/(a₂ − 1/(… − 1/aₗ))` with every `aᵢ ≥ 2`. The expansion is
//! unique, so a reduced pair `0 < q < p` and its coefficient list carry the
//! same information. The degenerate pair `(1, 0)` (the three-sphere) is
//! represented by the empty expansion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::to_usize;
use crate::error::{Error, Result};
use crate::serde_big;

/// Longest expansion the library is willing to materialize.
pub const MAX_EXPANSION_LEN: usize = 1 << 20;

/// A reduced fraction `p/q` together with its negative continued fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NegCFrac {
    #[serde(with = "serde_big::int")]
    p: BigInt,
    #[serde(with = "serde_big::int")]
    q: BigInt,
    #[serde(with = "serde_big::ints")]
    coeffs: Vec<BigInt>,
}

impl NegCFrac {
    /// Expansion of `p/q`; see [`expand`].
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        expand(p, q)
    }

    /// Rebuilds the fraction from a coefficient list (all entries `≥ 2`).
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        let (p, q) = evaluate(&coeffs)?;
        Ok(NegCFrac { p, q, coeffs })
    }

    /// The empty expansion standing for `S³ = L(1, 0)`.
    pub fn sphere() -> Self {
        NegCFrac {
            p: BigInt::one(),
            q: BigInt::zero(),
            coeffs: Vec::new(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of coefficients, `l = length(p/q)`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Only the sphere `(1, 0)` has no coefficients.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_sphere(&self) -> bool {
        self.is_empty()
    }

    /// `Σ (aᵢ − 1)`.
    pub fn excess(&self) -> BigInt {
        self.coeffs.iter().map(|a| a - 1).sum()
    }
}

impl fmt::Display for NegCFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Checks `0 < q < p` and `gcd(p, q) = 1`.
pub fn validate_pair(p: &BigInt, q: &BigInt) -> Result<()> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::domain(format!(
            "p and q must be positive, got ({p}, {q})"
        )));
    }
    if q >= p {
        return Err(Error::domain(format!("need 0 < q < p, got ({p}, {q})")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::domain(format!(
            "p = {p} and q = {q} are not coprime"
        )));
    }
    Ok(())
}

/// Negative continued fraction of `p/q`.
///
/// Accepts coprime `0 < q < p`, plus the degenerate `(1, 0)` which yields the
/// empty expansion. Anything else, including `q ≥ p`, is rejected rather than
/// reduced.
pub fn expand(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<NegCFrac> {
    let (p, q) = (p.into(), q.into());
    if p.is_one() && q.is_zero() {
        return Ok(NegCFrac::sphere());
    }
    validate_pair(&p, &q)?;

    let mut coeffs = Vec::new();
    let (mut num, mut den) = (p.clone(), q.clone());
    while !den.is_zero() {
        if coeffs.len() >= MAX_EXPANSION_LEN {
            return Err(Error::too_large(format!(
                "expansion of {p}/{q} is longer than {MAX_EXPANSION_LEN}"
            )));
        }
        // a = ⌈num/den⌉, then num/den = a − den/(a·den − num)
        let a = num.div_ceil(&den);
        let rest = &a * &den - &num;
        coeffs.push(a);
        num = den;
        den = rest;
    }
    Ok(NegCFrac { p, q, coeffs })
}

/// Value of `[a₁, …, aₗ]` as a reduced pair `(p, q)`.
pub fn evaluate(coeffs: &[BigInt]) -> Result<(BigInt, BigInt)> {
    let Some((last, rest)) = coeffs.split_last() else {
        return Err(Error::domain("empty expansion evaluates to 1/0"));
    };
    if let Some(bad) = coeffs.iter().find(|a| **a < BigInt::from(2)) {
        return Err(Error::domain(format!(
            "coefficient {bad} is smaller than 2"
        )));
    }
    let (mut num, mut den) = (last.clone(), BigInt::one());
    for a in rest.iter().rev() {
        let next = a * &num - &den;
        den = num;
        num = next;
    }
    // consecutive continuants are coprime
    debug_assert!(num.gcd(&den).is_one());
    Ok((num, den))
}

/// Column counts of the dots diagram: row `i` holds `aᵢ − 1` dots and starts
/// in the column of the last dot of row `i − 1`.
fn dot_columns(coeffs: &[BigInt]) -> Result<Vec<usize>> {
    let total: BigInt = coeffs.iter().map(|a| a - 2).sum::<BigInt>() + 1;
    let width = to_usize(&total, "dual expansion length")?;
    if width > MAX_EXPANSION_LEN {
        return Err(Error::too_large(format!(
            "dual expansion has {width} coefficients"
        )));
    }
    let mut columns = vec![0usize; width];
    let mut start = 0usize;
    for a in coeffs {
        let dots = to_usize(&(a - 1), "row length")?;
        for c in &mut columns[start..start + dots] {
            *c += 1;
        }
        start += dots - 1;
    }
    Ok(columns)
}

/// Expansion of `p/(p − q)` read off Riemenschneider's dots diagram:
/// `cⱼ = 1 + (number of dots in column j)`.
pub fn riemenschneider_dual(cf: &NegCFrac) -> Result<NegCFrac> {
    if cf.is_sphere() {
        return Err(Error::domain("the empty expansion has no dual"));
    }
    let coeffs = dot_columns(&cf.coeffs)?
        .into_iter()
        .map(|dots| BigInt::from(dots + 1))
        .collect();
    Ok(NegCFrac {
        p: cf.p.clone(),
        q: &cf.p - &cf.q,
        coeffs,
    })
}

/// `(length(p/q), length(p/(p − q)))`, each computed from its own expansion.
pub fn length_pair(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<(usize, usize)> {
    let (p, q) = (p.into(), q.into());
    validate_pair(&p, &q)?;
    let l = expand(p.clone(), q.clone())?.len();
    let dual = expand(p.clone(), &p - &q)?.len();
    Ok((l, dual))
}
