//! Tight contact structures on `L(p, q)` as rotation vectors.
//!
//! Structures on `L(p, q)`, `p/q = [a₁, …, aₙ]`, are indexed up to isotopy by
//! rotation vectors `r` with `|rᵢ| ≤ aᵢ − 2` and `rᵢ ≡ aᵢ (mod 2)`. The two
//! extremal vectors `±y`, `yᵢ = 2 − aᵢ`, are the universally tight ones; every
//! other vector is virtually overtwisted.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::modulo;
use crate::cfrac::{expand, NegCFrac};
use crate::error::{Error, Result};
use crate::lattice::linking_matrix;
use crate::serde_big;

/// Most structures [`enumerate_tight`] will list.
pub const MAX_TIGHT_STRUCTURES: usize = 1 << 20;

/// A rotation vector, in the component order of `[a₁, …, aₙ]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation(#[serde(with = "serde_big::ints")] pub Vec<BigInt>);

impl Rotation {
    pub fn zeros(n: usize) -> Self {
        Rotation(vec![BigInt::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl From<Vec<BigInt>> for Rotation {
    fn from(v: Vec<BigInt>) -> Self {
        Rotation(v)
    }
}

impl From<Vec<i64>> for Rotation {
    fn from(v: Vec<i64>) -> Self {
        Rotation(v.into_iter().map(BigInt::from).collect())
    }
}

impl Neg for &Rotation {
    type Output = Rotation;
    fn neg(self) -> Rotation {
        Rotation(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for Rotation {
    type Output = Rotation;
    fn neg(self) -> Rotation {
        -&self
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"1,0,-2"`; surrounding parentheses or brackets and spaces are
/// tolerated. The empty string is the empty vector.
impl FromStr for Rotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']'])
            .trim();
        if inner.is_empty() {
            return Ok(Rotation::default());
        }
        inner
            .split(',')
            .map(|t| {
                BigInt::from_str(t.trim())
                    .map_err(|_| Error::InvalidRotation(format!("not an integer: {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Rotation)
    }
}

/// UT or VOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tightness {
    #[serde(rename = "UT")]
    UniversallyTight,
    #[serde(rename = "VOT")]
    VirtuallyOvertwisted,
}

impl fmt::Display for Tightness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tightness::UniversallyTight => "UT",
            Tightness::VirtuallyOvertwisted => "VOT",
        })
    }
}

/// One tight structure on a lens space, up to isotopy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TightStructure {
    #[serde(flatten)]
    cf: NegCFrac,
    rot: Rotation,
}

/// `y = (2 − a₁, …, 2 − aₙ)`.
pub fn extremal_rotation(coeffs: &[BigInt]) -> Rotation {
    Rotation(coeffs.iter().map(|a| 2 - a).collect())
}

fn check_rotation(coeffs: &[BigInt], rot: &Rotation) -> Result<()> {
    if rot.len() != coeffs.len() {
        return Err(Error::InvalidRotation(format!(
            "expected {} entries, got {}",
            coeffs.len(),
            rot.len()
        )));
    }
    for (i, (a, r)) in coeffs.iter().zip(&rot.0).enumerate() {
        let max = a - 2;
        if r.abs() > max {
            return Err(Error::InvalidRotation(format!(
                "entry {} is {r}, outside [-{max}, {max}]",
                i + 1
            )));
        }
        if (a - r).is_odd() {
            return Err(Error::InvalidRotation(format!(
                "entry {} is {r}, parity differs from a = {a}",
                i + 1
            )));
        }
    }
    Ok(())
}

impl TightStructure {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, rot: Rotation) -> Result<Self> {
        Self::from_cfrac(expand(p, q)?, rot)
    }

    pub fn from_cfrac(cf: NegCFrac, rot: Rotation) -> Result<Self> {
        check_rotation(cf.coeffs(), &rot)?;
        Ok(TightStructure { cf, rot })
    }

    pub fn p(&self) -> &BigInt {
        self.cf.p()
    }

    pub fn q(&self) -> &BigInt {
        self.cf.q()
    }

    pub fn cfrac(&self) -> &NegCFrac {
        &self.cf
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.cf.coeffs()
    }

    pub fn rot(&self) -> &Rotation {
        &self.rot
    }

    pub fn is_universally_tight(&self) -> bool {
        let y = extremal_rotation(self.coeffs());
        self.rot == y || self.rot == -y
    }

    pub fn tightness(&self) -> Tightness {
        if self.is_universally_tight() {
            Tightness::UniversallyTight
        } else {
            Tightness::VirtuallyOvertwisted
        }
    }

    /// The structure with rotation vector `−r`, contactomorphic to this one.
    pub fn conjugate(&self) -> TightStructure {
        TightStructure {
            cf: self.cf.clone(),
            rot: -&self.rot,
        }
    }

    /// Representative of the contactomorphism class `{r, −r}`: the larger of
    /// the two vectors in lexicographic order.
    pub fn contact_class(&self) -> Rotation {
        let neg = -&self.rot;
        if neg > self.rot {
            neg
        } else {
            self.rot.clone()
        }
    }

    pub fn euler_pd(&self) -> EulerClass {
        euler_pd(self)
    }

    pub fn c1_squared(&self) -> BigRational {
        c1_squared(self)
    }

    pub fn d3(&self) -> BigRational {
        d3(self)
    }
}

/// `Π (aᵢ − 1)`, the number of tight structures up to isotopy.
pub fn tight_count(cf: &NegCFrac) -> BigInt {
    cf.coeffs().iter().map(|a| a - 1).product()
}

/// Every tight structure on `L(p, q)`, in lexicographic order of rotation
/// vectors.
pub fn enumerate_tight(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Vec<TightStructure>> {
    enumerate_cfrac(&expand(p, q)?)
}

/// [`enumerate_tight`] for an already expanded fraction.
pub fn enumerate_cfrac(cf: &NegCFrac) -> Result<Vec<TightStructure>> {
    let count = tight_count(cf);
    if count.to_usize().is_none_or(|c| c > MAX_TIGHT_STRUCTURES) {
        return Err(Error::too_large(format!(
            "{count} tight structures on L({},{})",
            cf.p(),
            cf.q()
        )));
    }
    let ranges: Vec<(BigInt, BigInt)> = cf.coeffs().iter().map(|a| (2 - a, a - 2)).collect();
    let mut current: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    loop {
        out.push(TightStructure {
            cf: cf.clone(),
            rot: Rotation(current.clone()),
        });
        // odometer, last coordinate fastest
        let mut i = current.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if current[i] < ranges[i].1 {
                current[i] += 2;
                for j in i + 1..current.len() {
                    current[j] = ranges[j].0.clone();
                }
                break;
            }
        }
    }
}

/// Meridian multipliers `mᵢ` with `μᵢ = mᵢ μ₁` in `H₁ = Z/p`: `m₁ = 1`,
/// `m₂ = a₁`, `mᵢ₊₁ = aᵢ mᵢ − mᵢ₋₁`, reduced mod `p`.
pub fn meridian_multipliers(cf: &NegCFrac) -> Vec<BigInt> {
    let a = cf.coeffs();
    let p = cf.p();
    let mut m: Vec<BigInt> = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let next = match i {
            0 => BigInt::one(),
            1 => a[0].clone(),
            _ => &a[i - 1] * &m[i - 1] - &m[i - 2],
        };
        m.push(modulo(&next, p));
    }
    m
}

/// A class in `Z/p`, with the representative `min(e, p − e)` used when
/// comparing classes up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerClass {
    #[serde(with = "serde_big::int")]
    pub residue: BigInt,
    #[serde(with = "serde_big::int")]
    pub modulus: BigInt,
    #[serde(with = "serde_big::int")]
    pub canonical: BigInt,
}

impl EulerClass {
    pub fn new(value: &BigInt, modulus: &BigInt) -> Self {
        let residue = modulo(value, modulus);
        let other = modulo(&-&residue, modulus);
        let canonical = residue.clone().min(other);
        EulerClass {
            residue,
            modulus: modulus.clone(),
            canonical,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }
}

impl fmt::Display for EulerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// `PD(e(ξ)) = Σ rotᵢ mᵢ` in `Z/p`.
pub fn euler_pd(ts: &TightStructure) -> EulerClass {
    let m = meridian_multipliers(&ts.cf);
    let sum: BigInt = ts.rot.0.iter().zip(&m).map(|(r, m)| r * m).sum();
    EulerClass::new(&sum, ts.p())
}

/// `c₁² = rᵀ Q⁻¹ r` on the chain plumbing.
pub fn c1_squared(ts: &TightStructure) -> BigRational {
    if ts.coeffs().is_empty() {
        return BigRational::zero();
    }
    linking_matrix(ts.coeffs())
        .and_then(|q| q.qform(ts.rot.as_slice()))
        .expect("validated structure")
}

/// `d₃ = (c₁² − 3σ − 2χ)/4` with `σ = −n`, `χ = n + 1` for the chain plumbing.
pub fn d3(ts: &TightStructure) -> BigRational {
    let n = BigInt::from(ts.coeffs().len());
    (c1_squared(ts) + BigRational::from_integer(n - 2)) / BigRational::from_integer(BigInt::from(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn ts(p: i64, q: i64, rot: Vec<i64>) -> TightStructure {
        TightStructure::new(p, q, rot.into()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(int(n), int(d))
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_tight(17, 7).unwrap().len(), 6);
        let l43 = enumerate_tight(4, 3).unwrap();
        assert_eq!(l43.len(), 1);
        assert!(l43[0].is_universally_tight());
        let l71 = enumerate_tight(7, 1).unwrap();
        let rots: Vec<String> = l71.iter().map(|t| t.rot().to_string()).collect();
        assert_eq!(rots, ["(-5)", "(-3)", "(-1)", "(1)", "(3)", "(5)"]);
    }

    #[test]
    fn ut_flags() {
        let all = enumerate_tight(17, 7).unwrap();
        let ut: Vec<_> = all.iter().filter(|t| t.is_universally_tight()).collect();
        assert_eq!(ut.len(), 2);
        assert_eq!(ut[0].rot(), &Rotation::from(vec![-1, 0, -2]));
    }

    #[test]
    fn multipliers() {
        let m = |p: i64, q: i64| meridian_multipliers(&expand(p, q).unwrap());
        assert_eq!(m(17, 7), vec![int(1), int(3), int(5)]);
        assert_eq!(m(34, 7), vec![int(1), int(5)]);
        assert_eq!(m(56, 15), vec![int(1), int(4), int(15)]);
    }

    #[test]
    fn euler_classes() {
        assert_eq!(ts(17, 7, vec![1, 0, 2]).euler_pd().residue, int(11));
        assert_eq!(ts(17, 7, vec![1, 0, -2]).euler_pd().residue, int(8));
        assert_eq!(ts(34, 7, vec![3, -5]).euler_pd().residue, int(12));
        assert_eq!(ts(34, 7, vec![3, 1]).euler_pd().residue, int(8));
        let e = ts(17, 7, vec![1, 0, 2]).euler_pd();
        assert_eq!(e.canonical, int(6));
    }

    #[test]
    fn chern_and_d3() {
        assert_eq!(ts(56, 15, vec![0, 0, 0]).c1_squared(), rat(0, 1));
        assert_eq!(ts(56, 15, vec![0, 0, 0]).d3(), rat(1, 4));
        assert_eq!(ts(4, 1, vec![2]).c1_squared(), rat(-1, 1));
        assert_eq!(ts(4, 1, vec![-2]).d3(), rat(-1, 2));
        assert_eq!(ts(9, 2, vec![-3, 0]).c1_squared(), rat(-2, 1));
        assert_eq!(ts(9, 2, vec![-3, 0]).d3(), rat(-1, 2));
    }

    #[test]
    fn rejects_bad_rotations() {
        assert!(TightStructure::new(17, 7, vec![1, 0].into()).is_err());
        assert!(TightStructure::new(17, 7, vec![3, 0, 0].into()).is_err());
        assert!(TightStructure::new(17, 7, vec![0, 0, 0].into()).is_err());
    }

    #[test]
    fn parse_rotation() {
        assert_eq!(
            "1,0,-2".parse::<Rotation>().unwrap(),
            Rotation::from(vec![1, 0, -2])
        );
        assert_eq!(
            "(3, -5)".parse::<Rotation>().unwrap(),
            Rotation::from(vec![3, -5])
        );
        assert!("1,x".parse::<Rotation>().is_err());
    }

    #[test]
    fn contact_classes() {
        let all = enumerate_tight(17, 7).unwrap();
        let mut classes: Vec<_> = all.iter().map(|t| t.contact_class()).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(classes.len(), 3);
    }
}
