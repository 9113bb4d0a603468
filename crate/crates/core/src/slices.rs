//! Basic-slice decompositions from the decrement walk on the continued fraction.
//!
//! Starting from `[a₁, …, aₙ]`, repeatedly lower the last coefficient by one;
//! whenever it reaches 1 it is dropped and the new last coefficient is lowered
//! instead. The values met along the way, from `[a₁, …, aₙ − 1]` down to `1`,
//! are the recorded slopes. Consecutive slopes bound a basic slice whose
//! contribution is the drop in numerator. The slices produced while working on
//! coefficient `aᵢ` form the block of component `i`; it has `aᵢ − 2` slices and
//! every one of them contributes the meridian multiplier `mᵢ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::{expand, NegCFrac};
use crate::error::{Error, Result};
use crate::serde_big;
use crate::tight::{EulerClass, Rotation, TightStructure};

/// Most basic slices a decomposition may have.
pub const MAX_SLICES: usize = 1 << 20;

/// The slope `(−q, p)`, standing for the fraction `−p/q`, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SlopeRepr", try_from = "SlopeRepr")]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct SlopeRepr(#[serde(with = "serde_big::ints")] Vec<BigInt>);

impl From<Slope> for SlopeRepr {
    fn from(s: Slope) -> Self {
        SlopeRepr(vec![-s.q, s.p])
    }
}

impl TryFrom<SlopeRepr> for Slope {
    type Error = Error;
    fn try_from(r: SlopeRepr) -> Result<Self> {
        match r.0.as_slice() {
            [mq, p] => Slope::new(p.clone(), -mq),
            _ => Err(Error::domain("a slope is a pair (-q, p)")),
        }
    }
}

impl Slope {
    /// The slope `(−q, p)`; the pair is reduced to lowest terms.
    pub fn new(p: BigInt, q: BigInt) -> Result<Self> {
        if !p.is_positive() || !q.is_positive() {
            return Err(Error::domain(format!(
                "slope ({}, {p}) needs p, q > 0",
                -&q
            )));
        }
        let g = p.gcd(&q);
        Ok(Slope {
            p: p / &g,
            q: q / g,
        })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `p/q`, the absolute value of the slope.
    pub fn magnitude(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }

    /// The slope as the negative fraction `−p/q`.
    pub fn value(&self) -> BigRational {
        -self.magnitude()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", -&self.q, self.p)
    }
}

/// The slice between two consecutive recorded slopes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicSlice {
    pub lower: Slope,
    pub upper: Slope,
    #[serde(with = "serde_big::int")]
    pub contribution: BigInt,
    /// Zero-based index `i` of the coefficient `aᵢ₊₁` whose block holds it.
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDecomposition {
    #[serde(flatten)]
    cf: NegCFrac,
    slopes: Vec<Slope>,
    slices: Vec<BasicSlice>,
    /// Slice indices per component, in walk order.
    blocks: Vec<Vec<usize>>,
}

impl SliceDecomposition {
    pub fn cfrac(&self) -> &NegCFrac {
        &self.cf
    }

    /// Recorded slopes from `−p₁/q₁` up to `−1`.
    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn slices(&self) -> &[BasicSlice] {
        &self.slices
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Sum of all contributions; equals `p₁ − 1`.
    pub fn total_contribution(&self) -> BigInt {
        self.slices.iter().map(|s| &s.contribution).sum()
    }
}

/// The decomposition of `L(p, q)`, `p ≥ 2`.
pub fn slope_sequence(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<SliceDecomposition> {
    decompose(&expand(p, q)?)
}

/// [`slope_sequence`] for an already expanded fraction.
pub fn decompose(cf: &NegCFrac) -> Result<SliceDecomposition> {
    let a = cf.coeffs();
    let n = a.len();
    if n == 0 {
        return Err(Error::domain("the sphere has no slice decomposition"));
    }
    let total: BigInt = a.iter().map(|x| x - 2).sum();
    if total.to_usize().is_none_or(|t| t > MAX_SLICES) {
        return Err(Error::too_large(format!("{total} basic slices")));
    }
    // prefix continuants: [a₁..aₖ] = h[k] / g[k], with h[0] = 1, g[0] = 0
    let mut h = vec![BigInt::one(); n + 1];
    let mut g = vec![BigInt::zero(); n + 1];
    for k in 1..=n {
        let (h2, g2) = if k >= 2 {
            (h[k - 2].clone(), g[k - 2].clone())
        } else {
            (BigInt::zero(), -BigInt::one())
        };
        h[k] = &a[k - 1] * &h[k - 1] - h2;
        g[k] = &a[k - 1] * &g[k - 1] - g2;
    }
    // value of [a₁, …, aₖ₋₁, x]
    let value = |k: usize, x: &BigInt| -> Result<Slope> {
        let (h2, g2) = if k >= 2 {
            (&h[k - 2], &g[k - 2])
        } else {
            (&BigInt::zero(), &-BigInt::one())
        };
        let num = x * &h[k - 1] - h2;
        let den = x * &g[k - 1] - g2;
        Slope::new(num, den)
    };

    let mut len = n;
    let mut last = a[n - 1].clone();
    let mut slopes = Vec::new();
    let mut comps = Vec::new();
    loop {
        let comp = len - 1;
        last -= 1;
        while len > 1 && last.is_one() {
            len -= 1;
            last = &a[len - 1] - 1;
        }
        slopes.push(value(len, &last)?);
        comps.push(comp);
        if len == 1 && last.is_one() {
            break;
        }
    }

    let mut blocks = vec![Vec::new(); n];
    let slices: Vec<BasicSlice> = (0..slopes.len() - 1)
        .map(|j| {
            let component = comps[j + 1];
            blocks[component].push(j);
            BasicSlice {
                lower: slopes[j].clone(),
                upper: slopes[j + 1].clone(),
                contribution: &slopes[j].p - &slopes[j + 1].p,
                component,
            }
        })
        .collect();
    Ok(SliceDecomposition {
        cf: cf.clone(),
        slopes,
        slices,
        blocks,
    })
}

/// Sign counts in one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSigns {
    pub component: usize,
    #[serde(with = "serde_big::int")]
    pub plus: BigInt,
    #[serde(with = "serde_big::int")]
    pub minus: BigInt,
}

/// Per-component sign counts with `plus − minus = rotᵢ` and
/// `plus + minus = aᵢ − 2`.
pub fn signs_from_rot(dec: &SliceDecomposition, rot: &Rotation) -> Result<Vec<BlockSigns>> {
    TightStructure::from_cfrac(dec.cf.clone(), rot.clone())?;
    Ok(dec
        .cf
        .coeffs()
        .iter()
        .zip(rot.as_slice())
        .enumerate()
        .map(|(component, (a, r))| {
            let size = a - 2;
            BlockSigns {
                component,
                plus: (&size + r) / 2,
                minus: (size - r) / 2,
            }
        })
        .collect())
}

/// One sign per slice realising `rot`: within each block the pluses come
/// first in walk order. Any arrangement inside a block gives the same
/// structure.
pub fn slice_signs(dec: &SliceDecomposition, rot: &Rotation) -> Result<Vec<i8>> {
    let counts = signs_from_rot(dec, rot)?;
    let mut signs = vec![0i8; dec.slices.len()];
    for (block, c) in dec.blocks.iter().zip(&counts) {
        for (k, &j) in block.iter().enumerate() {
            signs[j] = if BigInt::from(k) < c.plus { 1 } else { -1 };
        }
    }
    Ok(signs)
}

/// `Σ ±(slice contribution)` over all slices, in `Z/p`.
pub fn euler_pd_slices(dec: &SliceDecomposition, rot: &Rotation) -> Result<EulerClass> {
    let signs = slice_signs(dec, rot)?;
    let sum: BigInt = dec
        .slices
        .iter()
        .zip(signs)
        .map(|(s, e)| {
            if e > 0 {
                s.contribution.clone()
            } else {
                -&s.contribution
            }
        })
        .sum();
    Ok(EulerClass::new(&sum, dec.cf.p()))
}
