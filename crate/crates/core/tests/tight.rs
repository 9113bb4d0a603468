mod common;

use std::collections::BTreeSet;

use common::{int, naive_expand, pairs};
use lenstight::cfrac::expand;
use lenstight::lattice::linking_matrix;
use lenstight::tight::{
    c1_squared, d3, enumerate_tight, extremal_rotation, meridian_multipliers, tight_count,
    EulerClass, Rotation, TightStructure,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

#[test]
fn counts_match_box_size() {
    for (p, q) in pairs(300) {
        let a = naive_expand(p, q);
        let expected: i64 = a.iter().map(|x| x - 1).product();
        let all = enumerate_tight(p, q).unwrap();
        assert_eq!(all.len() as i64, expected, "{p}/{q}");
        assert_eq!(tight_count(&expand(p, q).unwrap()), int(expected));
        let ut = all.iter().filter(|t| t.is_universally_tight()).count();
        let want_ut = if a.iter().all(|&x| x == 2) { 1 } else { 2 };
        assert_eq!(ut, want_ut, "{p}/{q}");
    }
}

#[test]
fn enumeration_is_lexicographic_and_valid() {
    for (p, q) in pairs(80) {
        let a = naive_expand(p, q);
        let all = enumerate_tight(p, q).unwrap();
        let rots: Vec<&Rotation> = all.iter().map(|t| t.rot()).collect();
        assert!(rots.windows(2).all(|w| w[0] < w[1]));
        for t in &all {
            for (r, &ai) in t.rot().as_slice().iter().zip(&a) {
                assert!(r.abs_sub_le(ai - 2));
                assert_eq!(r.is_odd(), ai % 2 == 1);
            }
        }
    }
}

trait AbsLe {
    fn abs_sub_le(&self, bound: i64) -> bool;
}

impl AbsLe for BigInt {
    fn abs_sub_le(&self, bound: i64) -> bool {
        self <= &int(bound) && self >= &int(-bound)
    }
}

#[test]
fn multipliers_solve_the_meridian_relations() {
    // μ generates H₁ = coker Q, so Q m ≡ 0 (mod p)
    for (p, q) in pairs(200) {
        let cf = expand(p, q).unwrap();
        let m = meridian_multipliers(&cf);
        let qm = linking_matrix(cf.coeffs()).unwrap();
        let n = m.len();
        for i in 0..n {
            let row: BigInt = (0..n).map(|j| qm.entry(i, j) * &m[j]).sum();
            assert!(row.is_multiple_of(&int(p)), "{p}/{q} row {i}");
        }
        assert_eq!(m[0], int(1));
    }
}

#[test]
fn conjugation_symmetry() {
    for (p, q) in pairs(120) {
        for t in enumerate_tight(p, q).unwrap() {
            let c = t.conjugate();
            let (e, ec) = (t.euler_pd(), c.euler_pd());
            assert_eq!(ec, EulerClass::new(&-&e.residue, &int(p)));
            assert_eq!(e.canonical, ec.canonical);
            assert_eq!(c1_squared(&t), c1_squared(&c));
            assert_eq!(d3(&t), d3(&c));
        }
    }
}

#[test]
fn concavity() {
    // every virtually overtwisted x has f(x) > f(y)
    for (p, q) in pairs(200) {
        let cf = expand(p, q).unwrap();
        let qm = linking_matrix(cf.coeffs()).unwrap();
        let y = extremal_rotation(cf.coeffs());
        let fy = qm.qform(y.as_slice()).unwrap();
        for t in enumerate_tight(p, q).unwrap() {
            let f = qm.qform(t.rot().as_slice()).unwrap();
            assert_eq!(f, c1_squared(&t));
            if t.is_universally_tight() {
                assert_eq!(f, fy);
            } else {
                assert!(f > fy, "{p}/{q} {}", t.rot());
            }
        }
    }
}

#[test]
fn rational_ball_family() {
    for m in 2i64..=10 {
        for k in 1..m {
            if m.gcd(&k) != 1 {
                continue;
            }
            let (p, q) = (m * m, m * k - 1);
            let n = expand(p, q).unwrap().len() as i64;
            for t in enumerate_tight(p, q).unwrap() {
                let c1 = c1_squared(&t);
                if t.is_universally_tight() {
                    assert_eq!(c1, rat(-n, 1), "L({p},{q})");
                    assert_eq!(d3(&t), rat(-1, 2));
                } else {
                    assert!(c1 > rat(-n, 1), "L({p},{q}) {}", t.rot());
                }
            }
        }
    }
}

#[test]
fn euler_class_fixtures() {
    let residues: BTreeSet<BigInt> = enumerate_tight(17, 7)
        .unwrap()
        .iter()
        .map(|t| t.euler_pd().residue)
        .collect();
    for v in [11, 1, 8, 17 - 11, 17 - 1, 17 - 8] {
        assert!(residues.contains(&int(v)), "{v}");
    }
    let t = TightStructure::new(34, 7, vec![3, -5].into()).unwrap();
    assert_eq!(t.euler_pd().residue, int(12));
    for (p, q) in pairs(40) {
        let n = expand(p, q).unwrap().len();
        let zero = Rotation::zeros(n);
        if let Ok(t) = TightStructure::new(p, q, zero) {
            assert!(t.euler_pd().residue.is_zero());
        }
    }
}

#[test]
fn d3_fixtures() {
    let t = TightStructure::new(56, 15, vec![0, 0, 0].into()).unwrap();
    assert_eq!(d3(&t), rat(1, 4));
    for r in [2, -2] {
        assert_eq!(
            d3(&TightStructure::new(4, 1, vec![r].into()).unwrap()),
            rat(-1, 2)
        );
    }
}

#[test]
fn json_roundtrip() {
    let t = TightStructure::new(17, 7, vec![1, 0, -2].into()).unwrap();
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(
        json,
        r#"{"p":"17","q":"7","coeffs":["3","2","4"],"rot":["1","0","-2"]}"#
    );
    assert_eq!(serde_json::from_str::<TightStructure>(&json).unwrap(), t);
}
