//! Cyclic covers of lens spaces and whether tight structures lift tightly.
//!
//! The degree `d` cover of `L(p, q)` is `L(p/d, q mod p/d)`. A virtually
//! overtwisted structure is certified to lift overtwisted when one of the
//! cheap criteria fires, when the cover carries only universally tight
//! structures, or when no choice of basic-slice signs on the cover is
//! compatible with the Euler class downstairs. Compatibility means that
//! base slices pulled back inside a cover slice share its sign and
//! `PD(ξ) ≡ PD(ξ̂) (mod p/d)`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, mod_inverse, modulo};
use crate::cfrac::{expand, validate_pair, NegCFrac};
use crate::error::{Error, Result};
use crate::serde_big;
use crate::slices::{decompose, SliceDecomposition, Slope};
use crate::tight::{enumerate_cfrac, tight_count, Rotation, TightStructure};

/// Most partial sign states the compatibility solver keeps.
pub const MAX_SOLVER_STATES: usize = 1 << 20;

/// The degree `d` cover `L(p′, q′)` of `L(p, q)`, `p′ = p/d`, `q′ = q mod p′`.
/// For `d = p` the cover is `S³`, recorded as `(1, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverSpec {
    #[serde(with = "serde_big::int")]
    pub p: BigInt,
    #[serde(with = "serde_big::int")]
    pub q: BigInt,
    #[serde(with = "serde_big::int")]
    pub degree: BigInt,
    #[serde(with = "serde_big::int")]
    pub cover_p: BigInt,
    #[serde(with = "serde_big::int")]
    pub cover_q: BigInt,
}

impl CoverSpec {
    pub fn is_sphere(&self) -> bool {
        self.cover_p.is_one()
    }

    pub fn cover_cfrac(&self) -> Result<NegCFrac> {
        if self.is_sphere() {
            Ok(NegCFrac::sphere())
        } else {
            expand(self.cover_p.clone(), self.cover_q.clone())
        }
    }

    /// `L(p′,q′)`, or `S3`.
    pub fn cover_name(&self) -> String {
        if self.is_sphere() {
            "S3".to_string()
        } else {
            format!("L({},{})", self.cover_p, self.cover_q)
        }
    }
}

/// The cover of degree `d`; `d` must divide `p`.
pub fn cover(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<CoverSpec> {
    let (p, q, d) = (p.into(), q.into(), d.into());
    validate_pair(&p, &q)?;
    if !d.is_positive() || !p.is_multiple_of(&d) {
        return Err(Error::NotDivisor { p, degree: d });
    }
    let cover_p = &p / &d;
    let cover_q = if cover_p.is_one() {
        BigInt::zero()
    } else {
        modulo(&q, &cover_p)
    };
    Ok(CoverSpec {
        p,
        q,
        degree: d,
        cover_p,
        cover_q,
    })
}

/// One cover per divisor `d ≥ 2` of `p`, by increasing degree.
pub fn covering_lattice(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Vec<CoverSpec>> {
    let (p, q) = (p.into(), q.into());
    validate_pair(&p, &q)?;
    divisors(&p)?
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| cover(p.clone(), q.clone(), d))
        .collect()
}

/// `q < p < d q`: every virtually overtwisted structure lifts overtwisted.
pub fn quick_criterion(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<bool> {
    let c = cover(p, q, d)?;
    Ok(quick_holds(&c))
}

fn quick_holds(c: &CoverSpec) -> bool {
    c.q < c.p && c.p < &c.degree * &c.q
}

/// The relaxed criterion and the numbers behind it.
///
/// `top = p′/q′ = [a₁, …, aₙ − 1]` is the first slope of the decrement walk;
/// the criterion holds when `p′ < d q′`. In terms of `q* = q⁻¹ mod p` one has
/// `p′ = p − q*` and `q′ q* ≡ 1 (mod p′)`. The `intrinsic_*` fields keep the
/// variant `P′ = p + q*`, `Q′ = (q*)⁻¹ mod P′`, which evaluates to
/// `[a₁, …, aₙ + 1]` and is reported for reference only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedCriterion {
    #[serde(with = "serde_big::int")]
    pub q_star: BigInt,
    #[serde(with = "serde_big::int")]
    pub top_p: BigInt,
    #[serde(with = "serde_big::int")]
    pub top_q: BigInt,
    #[serde(with = "serde_big::int")]
    pub intrinsic_p: BigInt,
    #[serde(with = "serde_big::int")]
    pub intrinsic_q: BigInt,
    /// `top_p = p − q*` and `top_q q* ≡ 1 (mod top_p)`.
    pub identity_holds: bool,
    pub holds: bool,
}

pub fn relaxed_criterion(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<RelaxedCriterion> {
    let c = cover(p, q, d)?;
    relaxed_for(&c)
}

fn relaxed_for(c: &CoverSpec) -> Result<RelaxedCriterion> {
    let (p, q, d) = (&c.p, &c.q, &c.degree);
    let q_star = mod_inverse(q, p).expect("coprime pair");
    let intrinsic_p = p + &q_star;
    let intrinsic_q = mod_inverse(&q_star, &intrinsic_p).expect("q* is a unit");

    let a = expand(p.clone(), q.clone())?;
    let a = a.coeffs();
    let n = a.len();
    // [a₁, …, aₙ₋₁, x] = (x h − h′)/(x g − g′) from the prefix continuants
    let (mut h, mut hp) = (BigInt::one(), BigInt::zero());
    let (mut g, mut gp) = (BigInt::zero(), -BigInt::one());
    for ai in &a[..n - 1] {
        let nh = ai * &h - &hp;
        let ng = ai * &g - &gp;
        hp = std::mem::replace(&mut h, nh);
        gp = std::mem::replace(&mut g, ng);
    }
    let x = &a[n - 1] - 1;
    let top_p: BigInt = &x * &h - hp;
    let top_q: BigInt = &x * &g - gp;

    let identity_holds =
        top_p == p - &q_star && (top_p.is_one() || modulo(&(&top_q * &q_star), &top_p).is_one());
    Ok(RelaxedCriterion {
        holds: top_p < d * &top_q,
        q_star,
        top_p,
        top_q,
        intrinsic_p,
        intrinsic_q,
        identity_holds,
    })
}

/// `(−q, p) ↦ (−d q, p)`, reduced.
pub fn slope_pullback(s: &Slope, d: &BigInt) -> Slope {
    Slope::new(s.p().clone(), s.q() * d).expect("positive entries")
}

/// Where a base slice lands after pulling back to the cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SlicePlacement {
    /// Entirely below the cover's first recorded slope.
    Below,
    /// Entirely inside the cover's other solid torus, past `−1`.
    Above,
    Within {
        slice: usize,
    },
    /// Meets several regions; the sign is tied to every cover slice met.
    Straddle {
        slices: Vec<usize>,
        below: bool,
        above: bool,
    },
}

impl SlicePlacement {
    pub fn cover_slices(&self) -> &[usize] {
        match self {
            SlicePlacement::Within { slice } => std::slice::from_ref(slice),
            SlicePlacement::Straddle { slices, .. } => slices,
            _ => &[],
        }
    }

    pub fn is_straddle(&self) -> bool {
        matches!(self, SlicePlacement::Straddle { .. })
    }
}

/// Placement of every base slice of `base` inside `cover` (a decomposition
/// of the degree `d` cover, or `None` for `S³`).
pub fn slice_correspondence(
    base: &SliceDecomposition,
    cover: Option<&SliceDecomposition>,
    d: &BigInt,
) -> Result<Vec<SlicePlacement>> {
    let bp = base.cfrac().p();
    if let Some(c) = cover {
        if !d.is_positive()
            || &(c.cfrac().p() * d) != bp
            || c.cfrac().q() != &modulo(base.cfrac().q(), c.cfrac().p())
        {
            return Err(Error::domain(
                "cover decomposition does not match the degree",
            ));
        }
    } else if d != bp {
        return Err(Error::domain("the sphere is only the degree p cover"));
    }
    let one = BigRational::one();
    let marks: Vec<BigRational> = match cover {
        Some(c) => c.slopes().iter().map(Slope::magnitude).collect(),
        None => vec![one.clone()],
    };
    let first = &marks[0];
    Ok(base
        .slices()
        .iter()
        .map(|s| {
            let hi = slope_pullback(&s.lower, d).magnitude();
            let lo = slope_pullback(&s.upper, d).magnitude();
            let met: Vec<usize> = (0..marks.len() - 1)
                .filter(|&k| lo < marks[k] && hi > marks[k + 1])
                .collect();
            let below = &hi > first;
            let above = lo < one;
            match (met.len(), below, above) {
                (0, true, false) => SlicePlacement::Below,
                (0, false, true) => SlicePlacement::Above,
                (1, false, false) => SlicePlacement::Within { slice: met[0] },
                _ => SlicePlacement::Straddle {
                    slices: met,
                    below,
                    above,
                },
            }
        })
        .collect())
}

/// Base slices and cover slices whose signs are forced equal, with their
/// per-component slice counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignClass {
    pub base_slices: Vec<usize>,
    pub cover_slices: Vec<usize>,
}

/// The sign-compatibility problem for one cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConstraintSystem {
    pub base: SliceDecomposition,
    pub cover: SliceDecomposition,
    #[serde(with = "serde_big::int")]
    pub modulus: BigInt,
    pub placements: Vec<SlicePlacement>,
    pub classes: Vec<SignClass>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

impl SignConstraintSystem {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let c = cover(p, q, d)?;
        Self::for_cover(&c)
    }

    fn for_cover(c: &CoverSpec) -> Result<Self> {
        if c.is_sphere() {
            return Err(Error::domain("no sign constraints for the cover by S3"));
        }
        let base = decompose(&expand(c.p.clone(), c.q.clone())?)?;
        let cover = decompose(&c.cover_cfrac()?)?;
        let placements = slice_correspondence(&base, Some(&cover), &c.degree)?;
        let nb = base.slices().len();
        let nc = cover.slices().len();
        let mut parent: Vec<usize> = (0..nb + nc).collect();
        for (j, pl) in placements.iter().enumerate() {
            for &k in pl.cover_slices() {
                let (a, b) = (find(&mut parent, j), find(&mut parent, nb + k));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut classes: Vec<SignClass> = Vec::new();
        let mut index_of = vec![usize::MAX; nb + nc];
        for x in 0..nb + nc {
            let r = find(&mut parent, x);
            if index_of[r] == usize::MAX {
                index_of[r] = classes.len();
                classes.push(SignClass {
                    base_slices: Vec::new(),
                    cover_slices: Vec::new(),
                });
            }
            let class = &mut classes[index_of[r]];
            if x < nb {
                class.base_slices.push(x);
            } else {
                class.cover_slices.push(x - nb);
            }
        }
        Ok(SignConstraintSystem {
            base,
            cover,
            modulus: c.cover_p.clone(),
            placements,
            classes,
        })
    }

    pub fn has_straddle(&self) -> bool {
        self.placements.iter().any(SlicePlacement::is_straddle)
    }

    /// All `(base rot, cover rot)` pairs realised by a compatible sign choice,
    /// sorted.
    pub fn solve(&self) -> Result<Vec<CompatiblePair>> {
        let nbc = self.base.cfrac().len();
        let ncc = self.cover.cfrac().len();
        // class → plus-count increments per component, base first then cover
        let steps: Vec<Vec<(usize, usize)>> = self
            .classes
            .iter()
            .map(|cl| {
                let mut inc = vec![0usize; nbc + ncc];
                for &j in &cl.base_slices {
                    inc[self.base.slices()[j].component] += 1;
                }
                for &k in &cl.cover_slices {
                    inc[nbc + self.cover.slices()[k].component] += 1;
                }
                inc.into_iter()
                    .enumerate()
                    .filter(|&(_, v)| v > 0)
                    .collect()
            })
            .collect();
        let mut states: HashSet<Vec<usize>> = HashSet::from([vec![0; nbc + ncc]]);
        for step in &steps {
            let mut next = HashSet::with_capacity(states.len() * 2);
            for s in states {
                let mut plus = s.clone();
                for &(i, v) in step {
                    plus[i] += v;
                }
                next.insert(plus);
                next.insert(s);
            }
            if next.len() > MAX_SOLVER_STATES {
                return Err(Error::too_large(format!(
                    "more than {MAX_SOLVER_STATES} partial sign states"
                )));
            }
            states = next;
        }

        let to_rot = |dec: &SliceDecomposition, plus: &[usize]| -> (Rotation, BigInt) {
            let mut pd = BigInt::zero();
            let rot = dec
                .blocks()
                .iter()
                .zip(plus)
                .map(|(block, &k)| {
                    let r = BigInt::from(2 * k) - BigInt::from(block.len());
                    if let Some(&j) = block.first() {
                        pd += &r * &dec.slices()[j].contribution;
                    }
                    r
                })
                .collect();
            (Rotation(rot), pd)
        };
        let mut out: BTreeSet<CompatiblePair> = BTreeSet::new();
        for s in states {
            let (base, base_pd) = to_rot(&self.base, &s[..nbc]);
            let (cover, cover_pd) = to_rot(&self.cover, &s[nbc..]);
            if modulo(&(base_pd - cover_pd), &self.modulus).is_zero() {
                out.insert(CompatiblePair { base, cover });
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// A base structure and a cover structure with compatible slice signs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompatiblePair {
    pub base: Rotation,
    pub cover: Rotation,
}

/// Every compatible `(base rot, cover rot)` pair for the degree `d < p` cover.
pub fn compatible_assignments(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<Vec<CompatiblePair>> {
    SignConstraintSystem::new(p, q, d)?.solve()
}

/// Why a lift is certainly overtwisted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OvertwistedReason {
    QuickCriterion,
    RelaxedCriterion,
    NoCompatibleSigns,
    ToS3,
    #[serde(rename = "OnlyUTOnCover")]
    OnlyUtOnCover {
        #[serde(with = "serde_big::int")]
        cover_p: BigInt,
        #[serde(with = "serde_big::int")]
        cover_q: BigInt,
    },
}

impl std::fmt::Display for OvertwistedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OvertwistedReason::QuickCriterion => f.write_str("QuickCriterion"),
            OvertwistedReason::RelaxedCriterion => f.write_str("RelaxedCriterion"),
            OvertwistedReason::NoCompatibleSigns => f.write_str("NoCompatibleSigns"),
            OvertwistedReason::ToS3 => f.write_str("ToS3"),
            OvertwistedReason::OnlyUtOnCover { cover_p, cover_q } => {
                write!(f, "OnlyUTOnCover: L({cover_p},{cover_q})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LiftVerdict {
    /// Universally tight structures lift to tight ones.
    Tight { reason: String },
    /// `reason` is the first certificate in priority order; `also` lists the
    /// other cheap certificates that fired.
    Overtwisted {
        reason: OvertwistedReason,
        also: Vec<OvertwistedReason>,
    },
    /// Compatible signs exist (`witnesses` are the cover rotation vectors), or
    /// `conservative` is set: no compatible signs, but a straddling slice made
    /// the constraint system stricter than the geometry guarantees.
    Inconclusive {
        conservative: bool,
        witnesses: Vec<Rotation>,
    },
}

impl LiftVerdict {
    pub fn is_overtwisted(&self) -> bool {
        matches!(self, LiftVerdict::Overtwisted { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, LiftVerdict::Inconclusive { .. })
    }
}

impl std::fmt::Display for LiftVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LiftVerdict::Tight { reason } => write!(f, "Tight ({reason})"),
            LiftVerdict::Overtwisted { reason, also } => {
                write!(f, "Overtwisted({reason}")?;
                for (i, r) in also.iter().enumerate() {
                    write!(f, "{}{r}", if i == 0 { "; also " } else { ", " })?;
                }
                write!(f, ")")
            }
            LiftVerdict::Inconclusive {
                conservative: true, ..
            } => write!(f, "Inconclusive (no compatible signs, straddling slices)"),
            LiftVerdict::Inconclusive { witnesses, .. } => {
                write!(f, "Inconclusive; witnesses")?;
                for w in witnesses {
                    write!(f, " {w}")?;
                }
                Ok(())
            }
        }
    }
}

/// Per-cover data shared by the verdicts of every structure on the base.
#[derive(Debug, Clone)]
pub struct LiftAnalysis {
    cover: CoverSpec,
    quick: bool,
    relaxed: RelaxedCriterion,
    only_ut: bool,
    system: Option<SignConstraintSystem>,
    solutions: Option<Vec<CompatiblePair>>,
}

impl LiftAnalysis {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let c = cover(p, q, d)?;
        let quick = quick_holds(&c);
        let relaxed = relaxed_for(&c)?;
        let cover_cf = c.cover_cfrac()?;
        let only_ut = !c.is_sphere() && tight_count(&cover_cf) <= BigInt::from(2);
        Ok(LiftAnalysis {
            cover: c,
            quick,
            relaxed,
            only_ut,
            system: None,
            solutions: None,
        })
    }

    pub fn cover(&self) -> &CoverSpec {
        &self.cover
    }

    pub fn quick(&self) -> bool {
        self.quick
    }

    pub fn relaxed(&self) -> &RelaxedCriterion {
        &self.relaxed
    }

    /// The sign system, if it had to be built.
    pub fn system(&self) -> Option<&SignConstraintSystem> {
        self.system.as_ref()
    }

    fn cheap_reasons(&self) -> Vec<OvertwistedReason> {
        let mut out = Vec::new();
        if self.quick {
            out.push(OvertwistedReason::QuickCriterion);
        }
        if self.relaxed.holds {
            out.push(OvertwistedReason::RelaxedCriterion);
        }
        if self.only_ut {
            out.push(OvertwistedReason::OnlyUtOnCover {
                cover_p: self.cover.cover_p.clone(),
                cover_q: self.cover.cover_q.clone(),
            });
        }
        out
    }

    fn solutions(&mut self) -> Result<&[CompatiblePair]> {
        if self.solutions.is_none() {
            let system = SignConstraintSystem::for_cover(&self.cover)?;
            self.solutions = Some(system.solve()?);
            self.system = Some(system);
        }
        Ok(self.solutions.as_deref().unwrap())
    }

    pub fn verdict(&mut self, ts: &TightStructure) -> Result<LiftVerdict> {
        if ts.p() != &self.cover.p || ts.q() != &self.cover.q {
            return Err(Error::domain("structure lives on a different lens space"));
        }
        if ts.is_universally_tight() {
            return Ok(LiftVerdict::Tight {
                reason: "universally tight".to_string(),
            });
        }
        if self.cover.is_sphere() {
            return Ok(LiftVerdict::Overtwisted {
                reason: OvertwistedReason::ToS3,
                also: Vec::new(),
            });
        }
        let mut cheap = self.cheap_reasons();
        if !cheap.is_empty() {
            let reason = cheap.remove(0);
            return Ok(LiftVerdict::Overtwisted {
                reason,
                also: cheap,
            });
        }
        let witnesses: Vec<Rotation> = self
            .solutions()?
            .iter()
            .filter(|s| &s.base == ts.rot())
            .map(|s| s.cover.clone())
            .collect();
        if !witnesses.is_empty() {
            return Ok(LiftVerdict::Inconclusive {
                conservative: false,
                witnesses,
            });
        }
        if self
            .system
            .as_ref()
            .is_some_and(SignConstraintSystem::has_straddle)
        {
            return Ok(LiftVerdict::Inconclusive {
                conservative: true,
                witnesses,
            });
        }
        Ok(LiftVerdict::Overtwisted {
            reason: OvertwistedReason::NoCompatibleSigns,
            also: Vec::new(),
        })
    }
}

/// Verdict for the structure `rot` on `L(p, q)` along the degree `d` cover.
pub fn classify_lift(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    rot: &Rotation,
    d: impl Into<BigInt>,
) -> Result<LiftVerdict> {
    let (p, q) = (p.into(), q.into());
    let ts = TightStructure::new(p.clone(), q.clone(), rot.clone())?;
    LiftAnalysis::new(p, q, d)?.verdict(&ts)
}

/// Verdicts for every tight structure along one cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLiftReport {
    pub cover: CoverSpec,
    pub quick: bool,
    pub relaxed: RelaxedCriterion,
    pub straddle: bool,
    pub rows: Vec<LiftRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRow {
    pub rot: Rotation,
    pub verdict: LiftVerdict,
}

/// [`classify_lift`] for all structures, or only `rot` when given.
pub fn lift_report(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    d: impl Into<BigInt>,
    rot: Option<&Rotation>,
) -> Result<CoverLiftReport> {
    let (p, q) = (p.into(), q.into());
    let mut analysis = LiftAnalysis::new(p.clone(), q.clone(), d)?;
    let structures = match rot {
        Some(r) => vec![TightStructure::new(p, q, r.clone())?],
        None => enumerate_cfrac(&expand(p, q)?)?,
    };
    let rows = structures
        .iter()
        .map(|ts| {
            Ok(LiftRow {
                rot: ts.rot().clone(),
                verdict: analysis.verdict(ts)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverLiftReport {
        straddle: analysis
            .system()
            .is_some_and(SignConstraintSystem::has_straddle),
        cover: analysis.cover,
        quick: analysis.quick,
        relaxed: analysis.relaxed,
        rows,
    })
}
