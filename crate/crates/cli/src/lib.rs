//! Argument parsing, report assembly and rendering for the `lenstight` binary.
//!
//! Every subcommand builds one serializable report. `--json` prints it with
//! integers as decimal strings and rationals as `{"num", "den"}`; otherwise a
//! plain-text rendering in the notation of the library docs is printed.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use lenstight::cfrac::{expand, length_pair, riemenschneider_dual, NegCFrac};
use lenstight::covers::{
    covering_lattice, lift_report, quick_criterion, relaxed_criterion, CoverLiftReport, CoverSpec,
    RelaxedCriterion,
};
use lenstight::fillings::{report, ChiExact, FillingConstraints};
use lenstight::lattice::{
    filling_embedding, has_minus_one_vector, minus_one_completeness_bound, orthogonal_complement,
    ComplementLattice, DEFAULT_MINUS_ONE_BOUND,
};
use lenstight::serde_big;
use lenstight::slices::{
    euler_pd_slices, signs_from_rot, slope_sequence, BlockSigns, SliceDecomposition,
};
use lenstight::tight::{enumerate_tight, EulerClass, Rotation, TightStructure, Tightness};
use lenstight::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Exit status for invalid input (also used by clap for usage errors).
pub const EXIT_INVALID: i32 = 2;
/// Exit status for a covering degree that does not divide `p`.
pub const EXIT_NOT_DIVISOR: i32 = 3;
/// Exit status when a size guard refuses the computation.
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lenstight",
    version,
    about = "Tight contact structures on lens spaces L(p,q)"
)]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave out headers and explanatory lines.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn big(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| format!("not an integer: {s:?}"))
}

fn rotation(s: &str) -> Result<Rotation, String> {
    s.parse::<Rotation>().map_err(|e| e.to_string())
}

/// Rotation vectors are given in the order of `[a₁, …, aₙ]`, e.g. `--rot 1,0,-2`.
#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Continued fraction, its dual and the length identity.
    Cf {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
    },
    /// Every tight structure with its invariants.
    Tight {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
    },
    /// Slope sequence and basic slices; with --rot, the signs realising it.
    Slices {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = rotation)]
        rot: Option<Rotation>,
    },
    /// The lattice of cyclic covers with both criteria.
    Covers {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
    },
    /// Lift verdicts along the degree d cover.
    Lift {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
        #[arg(value_parser = big)]
        d: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = rotation)]
        rot: Option<Rotation>,
    },
    /// Filling constraints for one structure, or for all of them.
    Fillings {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = rotation)]
        rot: Option<Rotation>,
    },
    /// Maximal embedding of the dual chain and its orthogonal complement.
    Embed {
        #[arg(value_parser = big)]
        p: BigInt,
        #[arg(value_parser = big)]
        q: BigInt,
        /// Coefficient box for the (-1)-vector search.
        #[arg(long, default_value_t = DEFAULT_MINUS_ONE_BOUND)]
        bound: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfReport {
    pub cf: NegCFrac,
    pub dual: NegCFrac,
    pub length: usize,
    pub dual_length: usize,
    /// `1 + Σ(aᵢ − 1)`.
    #[serde(with = "serde_big::int")]
    pub identity_rhs: BigInt,
    pub identity_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightRow {
    pub rot: Rotation,
    pub class: Tightness,
    pub pd: EulerClass,
    pub pd_slices: EulerClass,
    #[serde(with = "serde_big::rational")]
    pub c1_squared: BigRational,
    #[serde(with = "serde_big::rational")]
    pub d3: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightReport {
    pub cf: NegCFrac,
    pub rows: Vec<TightRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicesReport {
    pub decomposition: SliceDecomposition,
    pub rot: Option<Rotation>,
    pub signs: Option<Vec<BlockSigns>>,
    pub pd: Option<EulerClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRow {
    pub cover: CoverSpec,
    pub quick: bool,
    pub relaxed: RelaxedCriterion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoversReport {
    pub cf: NegCFrac,
    pub covers: Vec<CoverRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub cf: NegCFrac,
    pub dual: NegCFrac,
    pub t: usize,
    #[serde(with = "serde_big::int_matrix")]
    pub rows: Vec<Vec<BigInt>>,
    pub complement: ComplementLattice,
    #[serde(with = "serde_big::int")]
    pub complement_det: BigInt,
    pub negative_definite: bool,
    #[serde(with = "serde_big::int")]
    pub bound: BigInt,
    pub minus_one_vector: bool,
    #[serde(with = "serde_big::int")]
    pub completeness_bound: BigInt,
    pub chi_max: usize,
}

/// One report per subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Cf(CfReport),
    Tight(TightReport),
    Slices(SlicesReport),
    Covers(CoversReport),
    Lift(CoverLiftReport),
    Fillings(Vec<FillingConstraints>),
    Embed(EmbedReport),
}

pub fn execute(cmd: &Command) -> Result<Report, Error> {
    Ok(match cmd {
        Command::Cf { p, q } => {
            let cf = expand(p.clone(), q.clone())?;
            let dual = riemenschneider_dual(&cf)?;
            let (length, dual_length) = length_pair(p.clone(), q.clone())?;
            let identity_rhs = cf.excess() + 1;
            Report::Cf(CfReport {
                identity_holds: BigInt::from(length + dual_length) == identity_rhs,
                cf,
                dual,
                length,
                dual_length,
                identity_rhs,
            })
        }
        Command::Tight { p, q } => {
            let cf = expand(p.clone(), q.clone())?;
            let dec = slope_sequence(p.clone(), q.clone())?;
            let rows = enumerate_tight(p.clone(), q.clone())?
                .iter()
                .map(|t| {
                    Ok(TightRow {
                        rot: t.rot().clone(),
                        class: t.tightness(),
                        pd: t.euler_pd(),
                        pd_slices: euler_pd_slices(&dec, t.rot())?,
                        c1_squared: t.c1_squared(),
                        d3: t.d3(),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Report::Tight(TightReport { cf, rows })
        }
        Command::Slices { p, q, rot } => {
            let decomposition = slope_sequence(p.clone(), q.clone())?;
            let (signs, pd) = match rot {
                Some(r) => (
                    Some(signs_from_rot(&decomposition, r)?),
                    Some(euler_pd_slices(&decomposition, r)?),
                ),
                None => (None, None),
            };
            Report::Slices(SlicesReport {
                decomposition,
                rot: rot.clone(),
                signs,
                pd,
            })
        }
        Command::Covers { p, q } => {
            let cf = expand(p.clone(), q.clone())?;
            let covers = covering_lattice(p.clone(), q.clone())?
                .into_iter()
                .map(|c| {
                    Ok(CoverRow {
                        quick: quick_criterion(p.clone(), q.clone(), c.degree.clone())?,
                        relaxed: relaxed_criterion(p.clone(), q.clone(), c.degree.clone())?,
                        cover: c,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Report::Covers(CoversReport { cf, covers })
        }
        Command::Lift { p, q, d, rot } => {
            Report::Lift(lift_report(p.clone(), q.clone(), d.clone(), rot.as_ref())?)
        }
        Command::Fillings { p, q, rot } => {
            let structures = match rot {
                Some(r) => vec![TightStructure::new(p.clone(), q.clone(), r.clone())?],
                None => enumerate_tight(p.clone(), q.clone())?,
            };
            Report::Fillings(
                structures
                    .iter()
                    .map(report)
                    .collect::<Result<Vec<_>, Error>>()?,
            )
        }
        Command::Embed { p, q, bound } => {
            let cf = expand(p.clone(), q.clone())?;
            let dual = riemenschneider_dual(&cf)?;
            let e = filling_embedding(p.clone(), q.clone())?;
            let complement = orthogonal_complement(&e);
            let bound = BigInt::from(*bound);
            Report::Embed(EmbedReport {
                t: e.t(),
                rows: e.rows().to_rows(),
                complement_det: complement.det(),
                negative_definite: complement.is_negative_definite(),
                minus_one_vector: has_minus_one_vector(&complement, &bound),
                completeness_bound: minus_one_completeness_bound(&complement)?,
                bound,
                chi_max: 1 + cf.len(),
                complement,
                cf,
                dual,
            })
        }
    })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotDivisor { .. } => EXIT_NOT_DIVISOR,
        Error::TooLarge(_) => EXIT_TOO_LARGE,
        _ => EXIT_INVALID,
    }
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

/// Inverse of [`render_json`]; the command decides which report shape to expect.
pub fn parse_json(cmd: &Command, json: &str) -> serde_json::Result<Report> {
    Ok(match cmd {
        Command::Cf { .. } => Report::Cf(serde_json::from_str(json)?),
        Command::Tight { .. } => Report::Tight(serde_json::from_str(json)?),
        Command::Slices { .. } => Report::Slices(serde_json::from_str(json)?),
        Command::Covers { .. } => Report::Covers(serde_json::from_str(json)?),
        Command::Lift { .. } => Report::Lift(serde_json::from_str(json)?),
        Command::Fillings { .. } => Report::Fillings(serde_json::from_str(json)?),
        Command::Embed { .. } => Report::Embed(serde_json::from_str(json)?),
    })
}

fn lens(cf: &NegCFrac) -> String {
    format!("L({},{})", cf.p(), cf.q())
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn rows_table(out: &mut String, header: &[&str], rows: &[Vec<String>], quiet: bool) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    if !quiet {
        let h: Vec<String> = header.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{}", line(&h));
    }
    for r in rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

pub fn render_text(report: &Report, quiet: bool) -> String {
    let mut out = String::new();
    match report {
        Report::Cf(r) => {
            let terms: Vec<String> =
                r.cf.coeffs()
                    .iter()
                    .map(|a| (a - BigInt::from(1)).to_string())
                    .collect();
            let _ = writeln!(
                out,
                "{}/{} = {}, l={}, dual={}, lν={}, {}+{}=1+({}) {}",
                r.cf.p(),
                r.cf.q(),
                r.cf,
                r.length,
                r.dual,
                r.dual_length,
                r.length,
                r.dual_length,
                terms.join("+"),
                if r.identity_holds { "✓" } else { "✗" }
            );
        }
        Report::Tight(r) => {
            if !quiet {
                let _ = writeln!(
                    out,
                    "{} = {}: {} tight structures",
                    lens(&r.cf),
                    r.cf,
                    r.rows.len()
                );
            }
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|t| {
                    vec![
                        t.rot.to_string(),
                        t.class.to_string(),
                        t.pd.residue.to_string(),
                        t.pd_slices.residue.to_string(),
                        t.c1_squared.to_string(),
                        t.d3.to_string(),
                    ]
                })
                .collect();
            rows_table(
                &mut out,
                &["rot", "class", "PD", "PD(slices)", "c1^2", "d3"],
                &rows,
                quiet,
            );
        }
        Report::Slices(r) => {
            let dec = &r.decomposition;
            if !quiet {
                let _ = writeln!(out, "{} = {}", lens(dec.cfrac()), dec.cfrac());
            }
            let _ = writeln!(
                out,
                "slopes: {}",
                dec.slopes()
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            let rows: Vec<Vec<String>> = dec
                .slices()
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    vec![
                        j.to_string(),
                        s.lower.to_string(),
                        s.upper.to_string(),
                        s.contribution.to_string(),
                        (s.component + 1).to_string(),
                    ]
                })
                .collect();
            rows_table(
                &mut out,
                &["slice", "lower", "upper", "contribution", "component"],
                &rows,
                quiet,
            );
            let sizes: Vec<usize> = dec.blocks().iter().map(Vec::len).collect();
            let _ = writeln!(out, "block sizes by component: {}", list(&sizes));
            if let (Some(rot), Some(signs), Some(pd)) = (&r.rot, &r.signs, &r.pd) {
                let _ = writeln!(out, "rot {rot}:");
                for b in signs {
                    let _ = writeln!(
                        out,
                        "  component {}: {} plus, {} minus",
                        b.component + 1,
                        b.plus,
                        b.minus
                    );
                }
                let _ = writeln!(out, "PD = {pd}");
            }
        }
        Report::Covers(r) => {
            if !quiet {
                let _ = writeln!(out, "covers of {} = {}", lens(&r.cf), r.cf);
            }
            let rows: Vec<Vec<String>> = r
                .covers
                .iter()
                .map(|c| {
                    vec![
                        c.cover.degree.to_string(),
                        c.cover.cover_name(),
                        c.quick.to_string(),
                        c.relaxed.holds.to_string(),
                        format!("{}/{}", c.relaxed.top_p, c.relaxed.top_q),
                    ]
                })
                .collect();
            rows_table(
                &mut out,
                &["d", "cover", "quick", "relaxed", "top"],
                &rows,
                quiet,
            );
        }
        Report::Lift(r) => {
            if !quiet {
                let c = &r.cover;
                let _ = writeln!(
                    out,
                    "L({},{}) -> degree {} cover {}; quick {}, relaxed {}{}",
                    c.p,
                    c.q,
                    c.degree,
                    c.cover_name(),
                    r.quick,
                    r.relaxed.holds,
                    if r.straddle {
                        "; straddling slices"
                    } else {
                        ""
                    }
                );
            }
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|x| vec![x.rot.to_string(), x.verdict.to_string()])
                .collect();
            rows_table(&mut out, &["rot", "verdict"], &rows, quiet);
        }
        Report::Fillings(list_) => {
            for (i, f) in list_.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                render_filling(&mut out, f, quiet);
            }
        }
        Report::Embed(r) => {
            if !quiet {
                let _ = writeln!(
                    out,
                    "{} = {}, dual chain {} embedded in <-1>^{}",
                    lens(&r.cf),
                    r.cf,
                    r.dual,
                    r.t
                );
                for row in &r.rows {
                    let _ = writeln!(out, "  {}", list(row));
                }
                let _ = writeln!(out, "complement Gram:");
                for row in r.complement.gram_rows() {
                    let _ = writeln!(out, "  {}", list(row));
                }
            }
            let _ = writeln!(
                out,
                "t={}, rank={}, det={}, negative definite={}",
                r.t,
                r.complement.rank(),
                r.complement_det,
                r.negative_definite
            );
            let _ = writeln!(
                out,
                "(-1)-vector with |x_i| <= {}: {}; any (-1)-vector has |x_i| <= {}",
                r.bound, r.minus_one_vector, r.completeness_bound
            );
            let _ = writeln!(out, "chi_max = 1 + l = {}", r.chi_max);
        }
    }
    out
}

fn render_filling(out: &mut String, f: &FillingConstraints, quiet: bool) {
    let _ = writeln!(out, "L({},{}) rot {} ({})", f.p, f.q, f.rot, f.tightness);
    let chi_exact = match &f.chi_exact {
        ChiExact::Exact { chi } => format!("chi_exact={chi}"),
        ChiExact::NotApplicable => "chi_exact=none".to_string(),
        ChiExact::Contradiction { value } => format!("chi_exact=contradiction ({value})"),
    };
    let _ = writeln!(out, "chi in [{},{}], {chi_exact}", f.chi_min, f.chi_max);
    let pi1: Vec<String> = f.pi1_candidates.iter().map(|e| e.to_string()).collect();
    let _ = writeln!(out, "pi1={{{}}}", pi1.join(","));
    let _ = writeln!(
        out,
        "rational ball possible={}, homeo unique at max b2={}",
        f.rational_ball_possible, f.homeo_unique_at_max_b2
    );
    if quiet {
        return;
    }
    let _ = writeln!(out, "rational ball test: {}", f.rational_ball.reason);
    if let Some(l) = &f.lattice {
        let _ = writeln!(
            out,
            "maximal filling: b2={}, t={}, complement rank {}, det {}, negative definite {}, (-1)-vector {}",
            l.b2, l.t, l.complement_rank, l.complement_det, l.negative_definite, l.minus_one_vector
        );
    }
    for x in &f.exclusions {
        let _ = writeln!(out, "  exclude {} [{}]: {}", x.order, x.rule, x.reason);
    }
    for n in &f.notes {
        let _ = writeln!(out, "  note: {n}");
    }
}
