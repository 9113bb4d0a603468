//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{parse, run, FIXTURES};
use lenstight::arith::{divisors, int};
use lenstight::cfrac::{expand, length_pair, riemenschneider_dual};
use lenstight::covers::{
    classify_lift, compatible_assignments, quick_criterion, relaxed_criterion,
};
use lenstight::fillings::{pi1_candidates, report, ExclusionRule};
use lenstight::lattice::{
    filling_embedding, has_minus_one_vector, linking_matrix, minus_one_completeness_bound,
    orthogonal_complement, DEFAULT_MINUS_ONE_BOUND,
};
use lenstight::slices::{euler_pd_slices, slope_sequence};
use lenstight::tight::{enumerate_tight, tight_count, Rotation, TightStructure};
use lenstight_cli::{execute, parse_json, render_json};
use num_bigint::BigInt;
use num_rational::BigRational;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pairs(max_p: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_p).flat_map(|p| (1..p).filter(move |&q| gcd(p, q) == 1).map(move |q| (p, q)))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(int).collect()
}

fn rot(v: &[i64]) -> Rotation {
    v.to_vec().into()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn is_prime(p: i64) -> bool {
    p > 1 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn expansion_fixtures() -> Check {
    for (p, q, want) in [
        (17, 7, vec![3, 2, 4]),
        (52, 11, vec![5, 4, 3]),
        (13, 11, vec![2, 2, 2, 2, 2, 3]),
        (4, 3, vec![2, 2, 2]),
    ] {
        let got = expand(p, q).map_err(|e| e.to_string())?;
        ensure!(got.coeffs() == ints(&want), "{p}/{q} = {got}");
    }
    Ok(())
}

fn length_identity() -> Check {
    for (p, q) in pairs(500) {
        let cf = expand(p, q).unwrap();
        let sum: BigInt = cf.coeffs().iter().map(|a| a - 1).sum();
        // the dual of p/q is p/(p − q)
        let dual_len = expand(p, p - q).unwrap().len();
        let (l, lv) = length_pair(p, q).unwrap();
        ensure!(
            l == cf.len() && lv == dual_len,
            "{p}/{q}: lengths ({l},{lv})"
        );
        ensure!(BigInt::from(l + lv) == sum + 1, "{p}/{q}: identity fails");
    }
    Ok(())
}

fn linking_matrices() -> Check {
    for (p, q) in pairs(200) {
        let m = linking_matrix(expand(p, q).unwrap().coeffs()).unwrap();
        ensure!(
            m.det() == int(p) || m.det() == int(-p),
            "{p}/{q}: det {}",
            m.det()
        );
        let inv = m.inverse();
        let n = m.rank();
        for i in 0..n {
            for j in 0..n {
                ensure!(
                    inv[(i, j)] < rat(0, 1),
                    "{p}/{q}: entry ({i},{j}) = {}",
                    inv[(i, j)]
                );
            }
        }
    }
    Ok(())
}

fn tight_counts() -> Check {
    ensure!(enumerate_tight(17, 7).unwrap().len() == 6, "L(17,7)");
    ensure!(enumerate_tight(4, 3).unwrap().len() == 1, "L(4,3)");
    for (p, q) in pairs(300) {
        let cf = expand(p, q).unwrap();
        let product: BigInt = cf.coeffs().iter().map(|a| a - 1).product();
        ensure!(
            tight_count(&cf) == product,
            "{p}/{q}: count {}",
            tight_count(&cf)
        );
        let listed = enumerate_tight(p, q).unwrap();
        ensure!(
            BigInt::from(listed.len()) == product,
            "{p}/{q}: listed {}",
            listed.len()
        );
    }
    Ok(())
}

fn euler_classes() -> Check {
    let dec = slope_sequence(17, 7).unwrap();
    let mut by_matrix = Vec::new();
    for t in enumerate_tight(17, 7).unwrap() {
        let m = t.euler_pd().residue;
        let s = euler_pd_slices(&dec, t.rot()).unwrap().residue;
        ensure!(m == s, "L(17,7) {}: {m} vs {s}", t.rot());
        by_matrix.push(m);
    }
    for v in [11, 1, 8, 17 - 11, 17 - 1, 17 - 8] {
        ensure!(
            by_matrix.contains(&int(v)),
            "PD {v} missing from {by_matrix:?}"
        );
    }
    let dec = slope_sequence(34, 7).unwrap();
    for (r, want) in [(rot(&[3, -5]), 12), (rot(&[3, 1]), 8)] {
        let t = TightStructure::new(34, 7, r.clone()).unwrap();
        ensure!(
            t.euler_pd().residue == int(want),
            "L(34,7) {r}: {}",
            t.euler_pd()
        );
        ensure!(
            euler_pd_slices(&dec, &r).unwrap().residue == int(want),
            "L(34,7) {r} by slices"
        );
    }
    Ok(())
}

fn d3_fixtures() -> Check {
    let t = TightStructure::new(56, 15, rot(&[0, 0, 0])).unwrap();
    ensure!(t.d3() == rat(1, 4), "L(56,15) (0,0,0): {}", t.d3());
    for r in [2, -2] {
        let t = TightStructure::new(4, 1, rot(&[r])).unwrap();
        ensure!(t.d3() == rat(-1, 2), "L(4,1) ({r}): {}", t.d3());
    }
    Ok(())
}

fn concavity() -> Check {
    for m in 2..=10i64 {
        for k in (1..m).filter(|&k| gcd(k, m) == 1) {
            let (p, q) = (m * m, m * k - 1);
            let structures = enumerate_tight(p, q).unwrap();
            let sigma = BigRational::from_integer(-BigInt::from(structures[0].cfrac().len()));
            for t in &structures {
                let c = t.c1_squared();
                if t.is_universally_tight() {
                    ensure!(
                        c == sigma && t.d3() == rat(-1, 2),
                        "L({p},{q}) {}: c1^2 {c}, d3 {}",
                        t.rot(),
                        t.d3()
                    );
                } else {
                    ensure!(c > sigma, "L({p},{q}) {}: c1^2 {c} <= {sigma}", t.rot());
                }
            }
        }
    }
    Ok(())
}

fn covering_theorems() -> Check {
    for (p, q) in [(34, 7), (52, 11)] {
        let sols = compatible_assignments(p, q, 2).unwrap();
        ensure!(sols.len() == 2, "L({p},{q}): {} solutions", sols.len());
        for s in &sols {
            let t = TightStructure::new(p, q, s.base.clone()).unwrap();
            ensure!(
                t.is_universally_tight(),
                "L({p},{q}): base {} is not UT",
                s.base
            );
        }
    }
    for d in divisors(&int(52)).unwrap().into_iter().skip(1) {
        for t in enumerate_tight(52, 11)
            .unwrap()
            .iter()
            .filter(|t| !t.is_universally_tight())
        {
            let v = classify_lift(52, 11, t.rot(), d.clone()).unwrap();
            ensure!(
                v.is_overtwisted(),
                "L(52,11) {} along degree {d}: {v}",
                t.rot()
            );
        }
    }
    let sols = compatible_assignments(56, 15, 2).unwrap();
    ensure!(
        sols.iter()
            .any(|s| !TightStructure::new(56, 15, s.base.clone())
                .unwrap()
                .is_universally_tight()),
        "L(56,15): no VOT base solution"
    );
    Ok(())
}

fn criteria() -> Check {
    ensure!(quick_criterion(56, 15, 7).unwrap(), "quick(56,15,7)");
    let r = relaxed_criterion(34, 7, 2).unwrap();
    ensure!(!r.holds, "relaxed(34,7,2) holds");
    ensure!(
        r.q_star == int(5) && r.intrinsic_p == int(39) && r.intrinsic_q == int(8),
        "relaxed(34,7,2): {r:?}"
    );
    for (p, q) in pairs(200) {
        for d in divisors(&int(p)).unwrap().into_iter().skip(1) {
            let quick = quick_criterion(p, q, d.clone()).unwrap();
            ensure!(
                !quick || relaxed_criterion(p, q, d.clone()).unwrap().holds,
                "({p},{q},{d})"
            );
        }
    }
    Ok(())
}

fn pi1_engine() -> Check {
    let one = [int(1)]
        .into_iter()
        .collect::<std::collections::BTreeSet<_>>();
    let c = pi1_candidates(&TightStructure::new(56, 15, rot(&[0, 0, 0])).unwrap()).unwrap();
    ensure!(c.candidates == one, "L(56,15) (0,0,0): {:?}", c.candidates);
    for want in [
        "(1+1)/8 = 1/4 < chi_min = 2",
        "(1+1)/4 = 1/2 < chi_min = 2",
        "(1+3)/2 = 2 < chi = 4",
    ] {
        ensure!(
            c.exclusions
                .iter()
                .any(|x| x.rule == ExclusionRule::EulerCharacteristic && x.reason == want),
            "missing exclusion {want:?}"
        );
    }
    for t in enumerate_tight(34, 7)
        .unwrap()
        .iter()
        .filter(|t| !t.is_universally_tight())
    {
        let c = pi1_candidates(t).unwrap();
        ensure!(
            c.candidates == one,
            "L(34,7) {}: {:?}",
            t.rot(),
            c.candidates
        );
    }
    for (p, q) in pairs(60).filter(|&(p, _)| is_prime(p)) {
        for t in enumerate_tight(p, q)
            .unwrap()
            .iter()
            .filter(|t| !t.is_universally_tight())
        {
            let c = pi1_candidates(t).unwrap();
            ensure!(
                c.candidates == one,
                "L({p},{q}) {}: {:?}",
                t.rot(),
                c.candidates
            );
        }
    }
    let c = pi1_candidates(&TightStructure::new(56, 15, rot(&[2, 0, 2])).unwrap()).unwrap();
    ensure!(
        c.candidates.contains(&int(1)) && c.candidates.contains(&int(2)),
        "L(56,15) (2,0,2): {:?}",
        c.candidates
    );
    for e in [4, 7, 8, 14, 28, 56] {
        ensure!(
            !c.candidates.contains(&int(e)),
            "L(56,15) (2,0,2): {e} not excluded"
        );
    }
    Ok(())
}

fn embeddings() -> Check {
    for (p, q) in pairs(100) {
        let cf = expand(p, q).unwrap();
        let dual = riemenschneider_dual(&cf).unwrap();
        let e = filling_embedding(p, q).unwrap();
        ensure!(
            BigInt::from(e.t()) == dual.excess() + 1,
            "{p}/{q}: t = {}",
            e.t()
        );
        ensure!(
            e.gram() == linking_matrix(dual.coeffs()).unwrap().to_matrix(),
            "{p}/{q}: Gram"
        );
        let c = orthogonal_complement(&e);
        ensure!(c.rank() == cf.len(), "{p}/{q}: rank {}", c.rank());
        ensure!(
            c.det() == int(p) || c.det() == int(-p),
            "{p}/{q}: det {}",
            c.det()
        );
        ensure!(c.is_negative_definite(), "{p}/{q}: not negative definite");
        let bound = minus_one_completeness_bound(&c)
            .unwrap()
            .max(int(DEFAULT_MINUS_ONE_BOUND));
        ensure!(!has_minus_one_vector(&c, &bound), "{p}/{q}: (-1)-vector");
        let t = enumerate_tight(p, q).unwrap().swap_remove(0);
        if p <= 40 {
            let r = report(&t).unwrap();
            ensure!(
                r.chi_max == BigInt::from(1 + cf.len()),
                "{p}/{q}: chi_max {}",
                r.chi_max
            );
            let lattice = r
                .lattice
                .ok_or(format!("{p}/{q}: report has no lattice data"))?;
            ensure!(
                !lattice.minus_one_vector && lattice.complement_rank == cf.len(),
                "{p}/{q}: report lattice"
            );
        }
    }
    Ok(())
}

fn cross_method() -> Check {
    for (p, q) in pairs(200) {
        let dec = slope_sequence(p, q).unwrap();
        for t in enumerate_tight(p, q).unwrap() {
            let s = euler_pd_slices(&dec, t.rot()).unwrap();
            ensure!(
                t.euler_pd() == s,
                "L({p},{q}) {}: {} vs {s}",
                t.rot(),
                t.euler_pd()
            );
        }
    }
    Ok(())
}

fn cli_output() -> Check {
    for args in FIXTURES {
        let mut json_args = vec!["--json"];
        json_args.extend_from_slice(args);
        for a in [args.to_vec(), json_args.clone()] {
            let (x, y) = (run(&a), run(&a));
            ensure!(x.status.success(), "{a:?} failed");
            ensure!(
                x.stdout == y.stdout && x.stderr == y.stderr,
                "{a:?} differs between runs"
            );
        }
        let cli = parse(args);
        let report = execute(&cli.command).map_err(|e| e.to_string())?;
        let printed = String::from_utf8(run(&json_args).stdout).map_err(|e| e.to_string())?;
        ensure!(
            printed == render_json(&report),
            "{args:?}: printed JSON differs from the in-memory report"
        );
        let back = parse_json(&cli.command, &printed).map_err(|e| e.to_string())?;
        ensure!(back == report, "{args:?}: JSON round trip lost data");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("expansion fixtures", expansion_fixtures),
        ("length identity for p <= 500", length_identity),
        ("linking matrices for p <= 200", linking_matrices),
        ("tight structure counts", tight_counts),
        ("Euler classes", euler_classes),
        ("d3 fixtures", d3_fixtures),
        ("concavity on L(m^2, mk-1), m <= 10", concavity),
        ("covering theorems", covering_theorems),
        ("quick and relaxed criteria", criteria),
        ("pi1 engine", pi1_engine),
        ("embeddings for p <= 100", embeddings),
        (
            "matrix and slice Euler classes agree for p <= 200",
            cross_method,
        ),
        ("CLI determinism and JSON round trip", cli_output),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
