//! Linking matrices of linear plumbings and the lattices built from them.
//!
//! For `p/q = [a₁, …, aₙ]` the linking matrix `Q` is tridiagonal with
//! diagonal `(−a₁, …, −aₙ)` and `+1` next to the diagonal. It is negative
//! definite with `|det Q| = p`, and every entry of `Q⁻¹` is strictly negative.
//!
//! Inverse and determinant use continuants. With `dᵢ = −aᵢ`,
//!
//! ```text
//! θ₀ = 1, θᵢ = dᵢ θᵢ₋₁ − θᵢ₋₂        (leading minors, θₙ = det Q)
//! φₙ₊₁ = 1, φᵢ = dᵢ φᵢ₊₁ − φᵢ₊₂       (trailing minors)
//! (Q⁻¹)ᵢⱼ = (−1)^(i+j) θᵢ₋₁ φⱼ₊₁ / θₙ   for i ≤ j
//! ```

mod embedding;
mod short;

pub use embedding::{
    filling_embedding, maximal_embedding, orthogonal_complement, ComplementLattice, Embedding,
    MAX_AMBIENT_RANK,
};
pub use short::{
    has_minus_one_vector, minus_one_completeness_bound, short_vectors, DEFAULT_MINUS_ONE_BOUND,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};

/// Tridiagonal linking matrix of a linear chain with weights `−aᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkingMatrix {
    coeffs: Vec<BigInt>,
}

/// Linking matrix of the chain `[a₁, …, aₙ]`; every `aᵢ ≥ 2`.
pub fn linking_matrix(coeffs: &[BigInt]) -> Result<LinkingMatrix> {
    if coeffs.is_empty() {
        return Err(Error::domain("linking matrix of an empty chain"));
    }
    if let Some(a) = coeffs.iter().find(|a| **a < BigInt::from(2)) {
        return Err(Error::domain(format!(
            "chain coefficient {a} is smaller than 2"
        )));
    }
    Ok(LinkingMatrix {
        coeffs: coeffs.to_vec(),
    })
}

impl LinkingMatrix {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn entry(&self, i: usize, j: usize) -> BigInt {
        let n = self.rank();
        assert!(i < n && j < n);
        if i == j {
            -&self.coeffs[i]
        } else if i.abs_diff(j) == 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                m[(i, j)] = self.entry(i, j);
            }
        }
        m
    }

    /// `θ₀, …, θₙ`.
    fn leading(&self) -> Vec<BigInt> {
        let mut theta = Vec::with_capacity(self.rank() + 1);
        theta.push(BigInt::one());
        let mut before = BigInt::zero();
        for a in &self.coeffs {
            let last = theta.last().unwrap();
            let next = -a * last - &before;
            before = last.clone();
            theta.push(next);
        }
        theta
    }

    /// `φ₁, …, φₙ₊₁` stored at indices `0..=n`.
    fn trailing(&self) -> Vec<BigInt> {
        let n = self.rank();
        let mut phi = vec![BigInt::zero(); n + 1];
        phi[n] = BigInt::one();
        let mut after = BigInt::zero();
        for i in (0..n).rev() {
            let next = -&self.coeffs[i] * &phi[i + 1] - &after;
            after = phi[i + 1].clone();
            phi[i] = next;
        }
        phi
    }

    /// Exact determinant; `|det| = p` and its sign is `(−1)ⁿ`.
    pub fn det(&self) -> BigInt {
        self.leading().pop().unwrap()
    }

    /// All leading principal minors alternate in sign.
    pub fn is_negative_definite(&self) -> bool {
        self.leading().iter().enumerate().all(|(k, m)| {
            if k % 2 == 0 {
                m.is_positive()
            } else {
                m.is_negative()
            }
        })
    }

    /// Integer adjugate-style numerators `N` with `Q⁻¹ = N / det`.
    fn inverse_numerators(&self) -> IntMatrix {
        let n = self.rank();
        let theta = self.leading();
        let phi = self.trailing();
        let mut num = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                // 0-based: θ_{i} (minor of the first i rows) times φ_{j+2} (rows after j)
                let mut v = &theta[i] * &phi[j + 1];
                if (i + j) % 2 == 1 {
                    v = -v;
                }
                num[(j, i)] = v.clone();
                num[(i, j)] = v;
            }
        }
        num
    }

    /// Exact inverse.
    pub fn inverse(&self) -> RatMatrix {
        let det = self.det();
        let num = self.inverse_numerators();
        let n = self.rank();
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = BigRational::new(num[(i, j)].clone(), det.clone());
            }
        }
        inv
    }

    /// `f(r) = rᵀ Q⁻¹ r`.
    pub fn qform(&self, r: &[BigInt]) -> Result<BigRational> {
        let n = self.rank();
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: r.len(),
            });
        }
        let num = self.inverse_numerators();
        let mut total = BigInt::zero();
        for i in 0..n {
            if r[i].is_zero() {
                continue;
            }
            let row: BigInt = (0..n).map(|j| &num[(i, j)] * &r[j]).sum();
            total += &r[i] * row;
        }
        Ok(BigRational::new(total, self.det()))
    }
}

/// Free-function form of [`LinkingMatrix::qform`].
pub fn qform(q: &LinkingMatrix, r: &[BigInt]) -> Result<BigRational> {
    q.qform(r)
}
