//! Maximal embedding of a linear chain into the diagonal lattice `⟨−1⟩ᵗ` and
//! its orthogonal complement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::to_usize;
use crate::cfrac::{expand, riemenschneider_dual};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::serde_big;

/// Largest ambient rank `t` accepted by [`maximal_embedding`].
pub const MAX_AMBIENT_RANK: usize = 2048;

/// Images of the chain vertices in `Zᵗ`, one row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    weights: Vec<BigInt>,
    rows: IntMatrix,
}

impl Embedding {
    /// Ambient rank `t = 1 + Σ(|wᵢ| − 1)`.
    pub fn t(&self) -> usize {
        self.rows.cols()
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    /// Gram matrix of the images under the form `⟨−1⟩ᵗ`.
    pub fn gram(&self) -> IntMatrix {
        negated_gram(&self.rows)
    }

    /// Whether every basis vector `eⱼ` appears in some image. An unused `eⱼ`
    /// would itself be a square `−1` vector orthogonal to the chain.
    pub fn uses_every_index(&self) -> bool {
        (0..self.t()).all(|j| (0..self.rows.rows()).any(|i| !self.rows[(i, j)].is_zero()))
    }
}

fn negated_gram(rows: &IntMatrix) -> IntMatrix {
    let mut g = rows.mul(&rows.transpose());
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let v = -&g[(i, j)];
            g[(i, j)] = v;
        }
    }
    g
}

/// Embeds the chain with weights `w₁, …, wₖ` (all `≤ −2`) into `⟨−1⟩ᵗ`.
///
/// Vertex `i` is sent to `+e_s − e_{s+1} − … − e_{s+|wᵢ|−1}` where `s` is the
/// last index used by vertex `i − 1`. Adjacent vertices therefore share exactly
/// one basis vector, with opposite signs, which makes every off-diagonal Gram
/// entry `+1`.
pub fn maximal_embedding(weights: &[BigInt]) -> Result<Embedding> {
    if weights.is_empty() {
        return Err(Error::domain("embedding of an empty chain"));
    }
    if let Some(w) = weights.iter().find(|w| **w > BigInt::from(-2)) {
        return Err(Error::domain(format!("weight {w} is larger than -2")));
    }
    let t_big: BigInt = weights.iter().map(|w| -w - 1).sum::<BigInt>() + 1;
    let t = to_usize(&t_big, "ambient rank")?;
    if t > MAX_AMBIENT_RANK {
        return Err(Error::too_large(format!(
            "ambient rank {t} exceeds {MAX_AMBIENT_RANK}"
        )));
    }
    let mut rows = IntMatrix::zeros(weights.len(), t);
    let mut start = 0usize;
    for (i, w) in weights.iter().enumerate() {
        let size = to_usize(&-w, "weight")?;
        rows[(i, start)] = BigInt::one();
        for j in start + 1..start + size {
            rows[(i, j)] = -BigInt::one();
        }
        start += size - 1;
    }
    Ok(Embedding {
        weights: weights.to_vec(),
        rows,
    })
}

/// Embedding of the chain bounding `L(p, p − q)`, the one whose orthogonal
/// complement models the maximal filling of `L(p, q)`.
pub fn filling_embedding(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Embedding> {
    let dual = riemenschneider_dual(&expand(p, q)?)?;
    let weights: Vec<BigInt> = dual.coeffs().iter().map(|c| -c).collect();
    maximal_embedding(&weights)
}

/// Orthogonal complement of an embedded chain, with a canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementLattice {
    /// Basis vectors in ambient coordinates, rows in Hermite normal form.
    #[serde(with = "serde_big::int_matrix")]
    basis: Vec<Vec<BigInt>>,
    #[serde(with = "serde_big::int_matrix")]
    gram: Vec<Vec<BigInt>>,
}

impl ComplementLattice {
    /// Wraps a Gram matrix directly, without ambient coordinates.
    pub fn from_gram(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::domain("Gram matrix must be square"));
        }
        if !IntMatrix::from_rows(gram.clone()).is_symmetric() {
            return Err(Error::domain("Gram matrix must be symmetric"));
        }
        Ok(ComplementLattice {
            basis: Vec::new(),
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn gram(&self) -> IntMatrix {
        IntMatrix::from_rows(self.gram.clone())
    }

    pub fn gram_rows(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        self.gram().det()
    }

    /// Sylvester's criterion on the negated Gram matrix.
    pub fn is_negative_definite(&self) -> bool {
        let mut neg = self.gram();
        for i in 0..neg.rows() {
            for j in 0..neg.cols() {
                let v = -&neg[(i, j)];
                neg[(i, j)] = v;
            }
        }
        let minors = neg.leading_minors();
        minors.len() == self.rank() && minors.iter().all(|m| m.is_positive())
    }
}

/// Subtracts `factor × row src` from `row dst`.
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        if m[(src, j)].is_zero() {
            continue;
        }
        let v = factor * &m[(src, j)];
        m[(dst, j)] -= v;
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

/// Unimodular row reduction of the first `cols` columns of `m`, starting at row
/// `from`. Returns the number of pivots found.
fn echelon(m: &mut IntMatrix, cols: usize, from: usize, reduce_above: bool) -> usize {
    let mut pivot_row = from;
    for col in 0..cols {
        if pivot_row == m.rows() {
            break;
        }
        loop {
            let best = (pivot_row..m.rows())
                .filter(|&i| !m[(i, col)].is_zero())
                .min_by(|&a, &b| m[(a, col)].abs().cmp(&m[(b, col)].abs()));
            let Some(best) = best else { break };
            swap_rows(m, pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m.rows() {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].div_floor(&m[(pivot_row, col)]);
                row_axpy(m, i, pivot_row, &factor);
                if !m[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m.rows() && !m[(pivot_row, col)].is_zero() {
            if m[(pivot_row, col)].is_negative() {
                for j in 0..m.cols() {
                    let v = -&m[(pivot_row, j)];
                    m[(pivot_row, j)] = v;
                }
            }
            if reduce_above {
                for i in from..pivot_row {
                    let factor = m[(i, col)].div_floor(&m[(pivot_row, col)]);
                    if !factor.is_zero() {
                        row_axpy(m, i, pivot_row, &factor);
                    }
                }
            }
            pivot_row += 1;
        }
    }
    pivot_row - from
}

/// Saturated integer kernel `{x ∈ Zᵗ : E x = 0}`, as rows in Hermite normal form.
fn integer_kernel(e: &IntMatrix) -> IntMatrix {
    let (n, t) = (e.rows(), e.cols());
    // [Eᵀ | I_t]: row operations record a unimodular transform in the right block
    let mut aug = IntMatrix::zeros(t, n + t);
    for i in 0..t {
        for j in 0..n {
            aug[(i, j)] = e[(j, i)].clone();
        }
        aug[(i, n + i)] = BigInt::one();
    }
    let rank = echelon(&mut aug, n, 0, false);
    let mut kernel = IntMatrix::zeros(t - rank, t);
    for (k, i) in (rank..t).enumerate() {
        for j in 0..t {
            kernel[(k, j)] = aug[(i, n + j)].clone();
        }
    }
    echelon(&mut kernel, t, 0, true);
    kernel
}

/// Orthogonal complement of the embedded chain inside `⟨−1⟩ᵗ`.
pub fn orthogonal_complement(e: &Embedding) -> ComplementLattice {
    let kernel = integer_kernel(e.rows());
    let gram = negated_gram(&kernel);
    ComplementLattice {
        basis: kernel.to_rows(),
        gram: gram.to_rows(),
    }
}
