//! Constraints on minimal symplectic fillings of a tight structure.
//!
//! Collects the Euler characteristic window `[chi_min, chi_max]`, the exact
//! value forced when `c₁(ξ) = 0`, the rational-ball test `c₁² = σ`, the
//! homeomorphism-uniqueness flag and the set of orders `e` for which
//! `π₁(W) = Z/e` is not excluded.
//!
//! A filling `W` with `π₁(W) = Z/e` lifts to a filling of the cover with
//! fundamental group of order `p/e`, so it is excluded when that cover carries
//! an overtwisted lift or when the cover's Euler characteristic bound
//! `(1 + l′)/e` drops below the bound downstairs.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, modulo};
use crate::cfrac::{riemenschneider_dual, NegCFrac};
use crate::covers::{LiftAnalysis, LiftVerdict};
use crate::error::{Error, Result};
use crate::lattice::{
    filling_embedding, has_minus_one_vector, minus_one_completeness_bound, orthogonal_complement,
    MAX_AMBIENT_RANK,
};
use crate::serde_big;
use crate::tight::{Rotation, TightStructure, Tightness};

/// `(chi_min, chi_max)`: `chi_max = 1 + l`; `chi_min` is 2 for virtually
/// overtwisted structures, which never bound a rational ball, and 1 otherwise.
pub fn chi_bounds(ts: &TightStructure) -> (BigInt, BigInt) {
    let max = BigInt::from(1 + ts.coeffs().len());
    let min = if ts.is_universally_tight() {
        BigInt::one()
    } else {
        BigInt::from(2)
    };
    (min, max)
}

/// Outcome of the test `c₁² = σ = −n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalBall {
    pub possible: bool,
    #[serde(with = "serde_big::rational")]
    pub c1_squared: BigRational,
    #[serde(with = "serde_big::int")]
    pub sigma: BigInt,
    #[serde(with = "serde_big::rational")]
    pub d3: BigRational,
    pub reason: String,
}

/// A rational ball filling forces `c₁² = σ`, equivalently `d₃ = −1/2`.
/// Only a necessary condition: outside the `L(m², mk − 1)` family some
/// virtually overtwisted structures pass it, e.g. `L(9, 1)` with `r = (±3)`.
pub fn rational_ball_obstruction(ts: &TightStructure) -> RationalBall {
    let c1 = ts.c1_squared();
    let sigma = -BigInt::from(ts.coeffs().len());
    let d3 = ts.d3();
    let possible = c1 == BigRational::from_integer(sigma.clone());
    let reason = if possible {
        format!("c1^2 = {c1} = sigma, d3 = {d3}")
    } else {
        format!("c1^2 = {c1} != sigma = {sigma}, so d3 = {d3} != -1/2")
    };
    RationalBall {
        possible,
        c1_squared: c1,
        sigma,
        d3,
        reason,
    }
}

/// Euler characteristic forced on every Stein filling by `c₁(ξ) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ChiExact {
    /// `PD(e(ξ)) ≠ 0`.
    NotApplicable,
    Exact {
        #[serde(with = "serde_big::int")]
        chi: BigInt,
    },
    /// `4 d₃ + 3` is not a positive integer.
    Contradiction {
        #[serde(with = "serde_big::rational")]
        value: BigRational,
    },
}

impl ChiExact {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            ChiExact::Exact { chi } => Some(chi),
            _ => None,
        }
    }
}

/// With `c₁ = 0` every Stein filling has `c₁² = 0` and `σ = 1 − χ`, so
/// `d₃ = (χ − 3)/4`.
pub fn chi_exact_if_c1_zero(ts: &TightStructure) -> ChiExact {
    if !ts.euler_pd().is_zero() {
        return ChiExact::NotApplicable;
    }
    let value = ts.d3() * BigRational::from_integer(BigInt::from(4))
        + BigRational::from_integer(BigInt::from(3));
    if value.is_integer() && value.is_positive() {
        ChiExact::Exact {
            chi: value.to_integer(),
        }
    } else {
        ChiExact::Contradiction { value }
    }
}

/// `p ∈ {2, 4, sⁿ, 2sⁿ}` for an odd prime `s`.
pub fn homeo_unique_flag(p: &BigInt) -> Result<bool> {
    if p < &BigInt::from(2) {
        return Err(Error::domain("p must be at least 2"));
    }
    let f = factorize(p)?;
    Ok(match f.as_slice() {
        [(2, 1)] | [(2, 2)] => true,
        [(s, _)] => *s != 2,
        [(2, 1), _] => true,
        _ => false,
    })
}

/// `(m, k)` with `p = m²`, `q ≡ mk − 1 (mod p)`, `0 < k < m`, `gcd(m, k) = 1`.
pub fn rational_ball_family(p: &BigInt, q: &BigInt) -> Option<(BigInt, BigInt)> {
    let m = p.sqrt();
    if &(&m * &m) != p || m < BigInt::from(2) {
        return None;
    }
    // mk ≡ q + 1 (mod m²) forces m | q + 1
    let t: BigInt = q + 1;
    if !t.is_multiple_of(&m) {
        return None;
    }
    let k = modulo(&(t / &m), &m);
    (k.is_positive() && m.gcd(&k).is_one()).then_some((m, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExclusionRule {
    /// The cover whose fundamental group has the kernel's order carries an
    /// overtwisted lift.
    OvertwistedCover,
    /// The cover's Euler characteristic bound is too small.
    EulerCharacteristic,
    /// `p` prime leaves only the trivial group.
    PrimeOrder,
}

impl fmt::Display for ExclusionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionRule::OvertwistedCover => "overtwisted-cover",
            ExclusionRule::EulerCharacteristic => "euler-characteristic",
            ExclusionRule::PrimeOrder => "prime-order",
        })
    }
}

/// One reason for dropping the order `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    #[serde(with = "serde_big::int")]
    pub order: BigInt,
    pub rule: ExclusionRule,
    pub reason: String,
}

/// Surviving orders of `π₁` and the certificates for the others.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Candidates {
    #[serde(with = "serde_big::int_set")]
    pub candidates: BTreeSet<BigInt>,
    pub exclusions: Vec<Exclusion>,
    pub notes: Vec<String>,
}

fn ratio(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

/// Orders `e | p` for which `π₁(W) = Z/e` survives every exclusion rule.
pub fn pi1_candidates(ts: &TightStructure) -> Result<Pi1Candidates> {
    let p = ts.p().clone();
    let q = ts.q().clone();
    let divs = divisors(&p)?;
    let mut notes = Vec::new();
    if ts.is_universally_tight() {
        notes.push("universally tight: no exclusion rule applies".to_string());
        return Ok(Pi1Candidates {
            candidates: divs.into_iter().collect(),
            exclusions: Vec::new(),
            notes,
        });
    }

    let mut exclusions = Vec::new();
    if factorize(&p)?.as_slice() == [(p.to_u64().unwrap_or(0), 1)] {
        for e in divs.iter().filter(|e| !e.is_one()) {
            exclusions.push(Exclusion {
                order: e.clone(),
                rule: ExclusionRule::PrimeOrder,
                reason: format!("p = {p} is prime"),
            });
        }
    }

    // covers by subgroup order h of π₁(L(p,q)), i.e. degree p/h
    for h in divs.iter().filter(|h| *h != &p) {
        let degree = &p / h;
        let verdict = LiftAnalysis::new(p.clone(), q.clone(), degree.clone())?.verdict(ts)?;
        match &verdict {
            LiftVerdict::Overtwisted { reason, .. } => {
                let name = if h.is_one() {
                    "S3".to_string()
                } else {
                    format!("L({h},{})", modulo(&q, h))
                };
                for e in divs.iter().filter(|e| h.is_multiple_of(&(&p / *e))) {
                    exclusions.push(Exclusion {
                        order: e.clone(),
                        rule: ExclusionRule::OvertwistedCover,
                        reason: format!(
                            "kernel of order {} lies in pi1 of the degree {degree} cover {name}, where the lift is overtwisted ({reason})",
                            &p / e
                        ),
                    });
                }
            }
            LiftVerdict::Inconclusive { .. } => {
                notes.push(format!("degree {degree} cover: {verdict}"));
            }
            LiftVerdict::Tight { .. } => {}
        }
    }

    let (chi_min, _) = chi_bounds(ts);
    let chi0 = chi_exact_if_c1_zero(ts);
    let mut bounds = vec![("chi_min", chi_min)];
    if let Some(chi) = chi0.value() {
        bounds.push(("chi", chi.clone()));
    }
    for e in &divs {
        let cover_p = &p / e;
        let l = if cover_p.is_one() {
            0
        } else {
            crate::cfrac::expand(cover_p.clone(), modulo(&q, &cover_p))?.len()
        };
        let bound = ratio(&BigInt::from(1 + l), e);
        for (name, lower) in &bounds {
            if bound < BigRational::from_integer(lower.clone()) {
                exclusions.push(Exclusion {
                    order: e.clone(),
                    rule: ExclusionRule::EulerCharacteristic,
                    reason: format!("(1+{l})/{e} = {bound} < {name} = {lower}"),
                });
            }
        }
    }

    exclusions.sort_by(|a, b| (&a.order, a.rule).cmp(&(&b.order, b.rule)));
    let excluded: BTreeSet<&BigInt> = exclusions.iter().map(|x| &x.order).collect();
    let candidates = divs
        .iter()
        .filter(|e| !excluded.contains(e))
        .cloned()
        .collect();
    Ok(Pi1Candidates {
        candidates,
        exclusions,
        notes,
    })
}

/// The maximal filling's lattice data: the dual chain embedded in `⟨−1⟩ᵗ`
/// and its orthogonal complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub b2: usize,
    pub t: usize,
    pub dual: NegCFrac,
    pub complement_rank: usize,
    #[serde(with = "serde_big::int")]
    pub complement_det: BigInt,
    pub negative_definite: bool,
    pub minus_one_vector: bool,
    #[serde(with = "serde_big::int")]
    pub search_bound: BigInt,
}

/// Largest ambient rank for which [`report`] includes the lattice data; the
/// complement, definiteness test and coefficient bound cost `O(t³)`.
pub const REPORT_MAX_AMBIENT_RANK: usize = 160;

/// `None` when the ambient rank exceeds `max_t` (at most [`MAX_AMBIENT_RANK`]).
pub fn lattice_summary(cf: &NegCFrac, max_t: usize) -> Result<Option<LatticeSummary>> {
    let dual = riemenschneider_dual(cf)?;
    let t: BigInt = BigInt::one() + dual.excess();
    if t > BigInt::from(max_t.min(MAX_AMBIENT_RANK)) {
        return Ok(None);
    }
    let e = filling_embedding(cf.p().clone(), cf.q().clone())?;
    let c = orthogonal_complement(&e);
    let search_bound = minus_one_completeness_bound(&c)?;
    Ok(Some(LatticeSummary {
        b2: cf.len(),
        t: e.t(),
        complement_rank: c.rank(),
        complement_det: c.det(),
        negative_definite: c.is_negative_definite(),
        minus_one_vector: has_minus_one_vector(&c, &search_bound),
        search_bound,
        dual,
    }))
}

/// Everything known about minimal fillings of one structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingConstraints {
    #[serde(with = "serde_big::int")]
    pub p: BigInt,
    #[serde(with = "serde_big::int")]
    pub q: BigInt,
    pub rot: Rotation,
    pub tightness: Tightness,
    #[serde(with = "serde_big::int")]
    pub chi_min: BigInt,
    #[serde(with = "serde_big::int")]
    pub chi_max: BigInt,
    pub chi_exact: ChiExact,
    pub rational_ball: RationalBall,
    pub rational_ball_possible: bool,
    pub homeo_unique_at_max_b2: bool,
    #[serde(with = "serde_big::int_set")]
    pub pi1_candidates: BTreeSet<BigInt>,
    pub exclusions: Vec<Exclusion>,
    pub lattice: Option<LatticeSummary>,
    pub notes: Vec<String>,
}

pub fn report(ts: &TightStructure) -> Result<FillingConstraints> {
    let (chi_min, chi_max) = chi_bounds(ts);
    let rational_ball = rational_ball_obstruction(ts);
    let pi1 = pi1_candidates(ts)?;
    let lattice = lattice_summary(ts.cfrac(), REPORT_MAX_AMBIENT_RANK)?;
    let mut notes = pi1.notes;
    if lattice.is_none() {
        notes.push(format!(
            "lattice data skipped: ambient rank above {REPORT_MAX_AMBIENT_RANK}"
        ));
    }
    let rational_ball_possible = rational_ball.possible && ts.is_universally_tight();
    if rational_ball.possible && !rational_ball_possible {
        notes.push(
            "c1^2 = sigma holds, but a virtually overtwisted structure bounds no rational ball"
                .to_string(),
        );
    }
    if let Some((m, k)) = rational_ball_family(ts.p(), ts.q()) {
        notes.push(format!(
            "L({},{}) is L(m^2, mk-1) with m = {m}, k = {k}",
            ts.p(),
            ts.q()
        ));
    }
    Ok(FillingConstraints {
        p: ts.p().clone(),
        q: ts.q().clone(),
        rot: ts.rot().clone(),
        tightness: ts.tightness(),
        chi_min,
        chi_max,
        chi_exact: chi_exact_if_c1_zero(ts),
        rational_ball_possible,
        rational_ball,
        homeo_unique_at_max_b2: homeo_unique_flag(ts.p())?,
        pi1_candidates: pi1.candidates,
        exclusions: pi1.exclusions,
        lattice,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn ts(p: i64, q: i64, rot: Vec<i64>) -> TightStructure {
        TightStructure::new(p, q, rot.into()).unwrap()
    }

    fn set(v: &[i64]) -> BTreeSet<BigInt> {
        v.iter().copied().map(int).collect()
    }

    #[test]
    fn bounds() {
        assert_eq!(chi_bounds(&ts(56, 15, vec![0, 0, 0])), (int(2), int(4)));
        assert_eq!(chi_bounds(&ts(34, 7, vec![3, 1])), (int(2), int(3)));
        assert_eq!(chi_bounds(&ts(9, 2, vec![-3, 0])), (int(1), int(3)));
    }

    #[test]
    fn rational_balls() {
        assert!(rational_ball_obstruction(&ts(9, 2, vec![-3, 0])).possible);
        assert!(!rational_ball_obstruction(&ts(9, 2, vec![-1, 0])).possible);
        assert!(!rational_ball_obstruction(&ts(56, 15, vec![0, 0, 0])).possible);
        assert_eq!(
            rational_ball_family(&int(9), &int(2)),
            Some((int(3), int(1)))
        );
        assert_eq!(
            rational_ball_family(&int(25), &int(9)),
            Some((int(5), int(2)))
        );
        assert_eq!(rational_ball_family(&int(25), &int(6)), None);
        assert_eq!(rational_ball_family(&int(56), &int(15)), None);
    }

    #[test]
    fn exact_chi() {
        assert_eq!(
            chi_exact_if_c1_zero(&ts(56, 15, vec![0, 0, 0])),
            ChiExact::Exact { chi: int(4) }
        );
        assert_eq!(
            chi_exact_if_c1_zero(&ts(56, 15, vec![2, 0, 2])),
            ChiExact::NotApplicable
        );
        assert_eq!(
            chi_exact_if_c1_zero(&ts(4, 1, vec![2])),
            ChiExact::NotApplicable
        );
    }

    #[test]
    fn homeo_flag() {
        for (p, want) in [
            (2, true),
            (4, true),
            (8, false),
            (34, true),
            (56, false),
            (27, true),
            (54, true),
            (15, false),
        ] {
            assert_eq!(homeo_unique_flag(&int(p)).unwrap(), want, "p = {p}");
        }
    }

    #[test]
    fn pi1_56_15() {
        let zero = pi1_candidates(&ts(56, 15, vec![0, 0, 0])).unwrap();
        assert_eq!(zero.candidates, set(&[1]));
        let reasons: Vec<&str> = zero.exclusions.iter().map(|x| x.reason.as_str()).collect();
        for needle in ["= 1/4 <", "= 1/2 <", "= 2 < chi = 4"] {
            assert!(
                reasons.iter().any(|r| r.contains(needle)),
                "{needle} missing from {reasons:?}"
            );
        }
        let c = pi1_candidates(&ts(56, 15, vec![2, 0, 2])).unwrap();
        assert_eq!(c.candidates, set(&[1, 2]));
    }

    #[test]
    fn pi1_34_7_and_primes() {
        for s in crate::tight::enumerate_tight(34, 7).unwrap() {
            if !s.is_universally_tight() {
                assert_eq!(pi1_candidates(&s).unwrap().candidates, set(&[1]));
            }
        }
        assert_eq!(
            pi1_candidates(&ts(17, 7, vec![1, 0, 0]))
                .unwrap()
                .candidates,
            set(&[1])
        );
    }

    #[test]
    fn reports() {
        let r = report(&ts(34, 7, vec![3, 1])).unwrap();
        assert_eq!((r.chi_min.clone(), r.chi_max.clone()), (int(2), int(3)));
        assert!(r.homeo_unique_at_max_b2);
        let lat = r.lattice.unwrap();
        assert_eq!(lat.complement_rank, 2);
        assert_eq!(lat.complement_det.abs(), int(34));
        assert!(lat.negative_definite && !lat.minus_one_vector);
        let r = report(&ts(56, 15, vec![0, 0, 0])).unwrap();
        assert_eq!(r.chi_exact.value(), Some(&int(4)));
        assert!(!r.homeo_unique_at_max_b2);
    }
}
