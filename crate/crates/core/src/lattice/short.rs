//! Exact enumeration of short vectors of a definite integral form.
//!
//! The form `A` (positive definite) is written as `xᵀAx = Σ dₖ (xₖ + Σⱼ₍ⱼ>ₖ₎ uₖⱼ xⱼ)²`
//! and coordinates are fixed from the last one down, each ranging over the
//! integers that keep the partial sum within budget. The factorization is
//! kept fraction free: with `Δₖ` the leading minors and `M` the Bareiss rows,
//! `dₖ = Δₖ/Δₖ₋₁` and `uₖⱼ = Mₖⱼ/Δₖ`, so a level test reads
//! `(Δₖ xₖ + Sₖ)² ≤ budget · Δₖ Δₖ₋₁` with the integer `Sₖ = Σⱼ Mₖⱼ xⱼ`.
//! Every comparison is exact and the enumeration is complete.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{floor_sqrt_rational, isqrt};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

use super::ComplementLattice;

/// Default coefficient bound for [`has_minus_one_vector`].
pub const DEFAULT_MINUS_ONE_BOUND: i64 = 10;

const MAX_SHORT_VECTORS: usize = 1 << 20;

struct Ldl {
    /// `Δ₋₁ = 1, Δ₀, …, Δₙ₋₁`, shifted by one.
    minors: Vec<BigInt>,
    /// Bareiss rows: `m[(k, j)]` for `j > k`.
    m: IntMatrix,
}

impl Ldl {
    fn delta(&self, k: usize) -> &BigInt {
        &self.minors[k + 1]
    }

    fn delta_before(&self, k: usize) -> &BigInt {
        &self.minors[k]
    }
}

fn ldl(a: &IntMatrix) -> Result<Ldl> {
    let n = a.rows();
    let mut m = a.clone();
    let mut minors = Vec::with_capacity(n + 1);
    minors.push(BigInt::one());
    for k in 0..n {
        let pivot = m[(k, k)].clone();
        if !pivot.is_positive() {
            return Err(Error::domain("form is not positive definite"));
        }
        let prev = minors[k].clone();
        for i in k + 1..n {
            for j in i..n {
                let v = (&pivot * &m[(i, j)] - &m[(k, i)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        minors.push(pivot);
    }
    Ok(Ldl { minors, m })
}

struct Search<'a> {
    f: &'a Ldl,
    x: Vec<BigInt>,
    found: Vec<Vec<BigInt>>,
}

impl Search<'_> {
    fn descend(&mut self, level: usize, budget: BigRational) -> Result<()> {
        let n = self.x.len();
        let mut s = BigInt::zero();
        for j in level + 1..n {
            if !self.x[j].is_zero() {
                s += &self.f.m[(level, j)] * &self.x[j];
            }
        }
        let dk = self.f.delta(level);
        let scale = dk * self.f.delta_before(level);
        // need (Δ x + S)² ≤ budget · scale
        let cap = &budget * BigRational::from_integer(scale.clone());
        let radius: BigInt = isqrt(&cap.floor().to_integer()) + 1;
        let low: BigInt = -&radius - &s;
        let high: BigInt = &radius - &s;
        let lo = low.div_ceil(dk);
        let hi = high.div_floor(dk);
        let mut v = lo;
        while v <= hi {
            let t = dk * &v + &s;
            let sq = BigRational::from_integer(&t * &t);
            if sq <= cap {
                self.x[level] = v.clone();
                if level == 0 {
                    if self.x.iter().any(|c| !c.is_zero()) {
                        if self.found.len() >= MAX_SHORT_VECTORS {
                            return Err(Error::too_large("too many short vectors"));
                        }
                        self.found.push(self.x.clone());
                    }
                } else {
                    let used = sq / BigRational::from_integer(scale.clone());
                    self.descend(level - 1, &budget - used)?;
                }
            }
            v += 1;
        }
        self.x[level] = BigInt::zero();
        Ok(())
    }
}

/// All nonzero `x ∈ Zⁿ` with `xᵀ A x ≤ bound`, for a positive definite
/// integral `A`, sorted lexicographically (both `x` and `−x` are listed).
pub fn short_vectors(a: &IntMatrix, bound: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    if a.rows() != a.cols() {
        return Err(Error::domain("form must be square"));
    }
    let n = a.rows();
    if n == 0 || bound.is_negative() {
        return Ok(Vec::new());
    }
    let f = ldl(a)?;
    let mut search = Search {
        f: &f,
        x: vec![BigInt::zero(); n],
        found: Vec::new(),
    };
    search.descend(n - 1, BigRational::from_integer(bound.clone()))?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}

fn negate(m: &IntMatrix) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = -&m[(i, j)];
        }
    }
    out
}

/// Whether the complement contains a vector of square `−1` whose coordinates
/// all lie in `[−bound, bound]`.
///
/// The search enumerates every vector of norm at most one, so the coefficient
/// box only filters the result: once `bound ≥`
/// [`minus_one_completeness_bound`], the answer covers the whole lattice.
/// A form that is not negative definite is reported as `false`.
pub fn has_minus_one_vector(c: &ComplementLattice, bound: &BigInt) -> bool {
    if c.rank() == 0 {
        return false;
    }
    let Ok(vectors) = short_vectors(&negate(&c.gram()), &BigInt::one()) else {
        return false;
    };
    let gram = c.gram();
    vectors.iter().any(|x| {
        x.iter().all(|v| v.abs() <= *bound) && {
            let n = x.len();
            let mut sq = BigInt::zero();
            for i in 0..n {
                for j in 0..n {
                    sq += &x[i] * &gram[(i, j)] * &x[j];
                }
            }
            sq == -BigInt::one()
        }
    })
}

/// Coefficient bound beyond which no vector of square `−1` can lie:
/// `|xᵢ| ≤ √((A⁻¹)ᵢᵢ)` whenever `xᵀAx ≤ 1`, with `A` the negated Gram matrix.
pub fn minus_one_completeness_bound(c: &ComplementLattice) -> Result<BigInt> {
    let a = negate(&c.gram());
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let (det, adj) = adjugate(&a)?;
    let best = (0..n).map(|i| adj[(i, i)].clone()).max().unwrap();
    Ok(floor_sqrt_rational(&BigRational::new(best, det)))
}

/// `(det A, adj A)` by fraction-free Gauss–Jordan elimination on `[A | I]`.
/// Pivots are leading minors, so `A` must be positive definite.
///
/// Only live columns are touched: at step `k` the left block is zero behind
/// the pivot, and right column `j > k` is still `Δₖ₋₁ eⱼ`, kept implicitly.
fn adjugate(a: &IntMatrix) -> Result<(BigInt, IntMatrix)> {
    adjugate_small(a).unwrap_or_else(|| adjugate_big(a))
}

fn adjugate_big(a: &IntMatrix) -> Result<(BigInt, IntMatrix)> {
    let n = a.rows();
    // columns 0..n hold A, n..2n the right block
    let mut m = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = m[(k, k)].clone();
        if !pivot.is_positive() {
            return Err(Error::domain("form is not positive definite"));
        }
        m[(k, n + k)] = prev.clone();
        for i in (0..n).filter(|&i| i != k) {
            let factor = m[(i, k)].clone();
            for j in (k + 1..n).chain(n..=n + k) {
                let v = (&pivot * &m[(i, j)] - &factor * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        // row k itself is unchanged in its live columns
        prev = pivot;
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            adj[(i, j)] = m[(i, n + j)].clone();
        }
    }
    Ok((prev, adj))
}

/// [`adjugate`] in `i128`; `None` as soon as anything overflows.
fn adjugate_small(a: &IntMatrix) -> Option<Result<(BigInt, IntMatrix)>> {
    let n = a.rows();
    let w = 2 * n;
    let mut m = vec![0i128; n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = i128::try_from(&a[(i, j)]).ok()?;
        }
    }
    let mut prev = 1i128;
    for k in 0..n {
        let pivot = m[k * w + k];
        if pivot <= 0 {
            return Some(Err(Error::domain("form is not positive definite")));
        }
        m[k * w + n + k] = prev;
        for i in (0..n).filter(|&i| i != k) {
            let factor = m[i * w + k];
            for j in (k + 1..n).chain(n..=n + k) {
                let v = pivot
                    .checked_mul(m[i * w + j])?
                    .checked_sub(factor.checked_mul(m[k * w + j])?)?;
                m[i * w + j] = v / prev;
            }
            m[i * w + k] = 0;
        }
        prev = pivot;
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            adj[(i, j)] = BigInt::from(m[i * w + n + j]);
        }
    }
    Some(Ok((BigInt::from(prev), adj)))
}
