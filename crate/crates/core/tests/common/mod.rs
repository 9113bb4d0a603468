#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Every coprime `(p, q)` with `0 < q < p`, `2 ≤ p ≤ max`.
pub fn pairs(max: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max).flat_map(|p| (1..p).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
}

/// `a₁ − 1/(a₂ − …)` evaluated right to left with plain rationals.
pub fn naive_value(coeffs: &[i64]) -> BigRational {
    let mut x = BigRational::from_integer(int(*coeffs.last().unwrap()));
    for &a in coeffs.iter().rev().skip(1) {
        x = BigRational::from_integer(int(a)) - x.recip();
    }
    x
}

/// Continued fraction by repeated ceiling, on machine integers.
pub fn naive_expand(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while q != 0 {
        let a = (p + q - 1) / q;
        out.push(a);
        (p, q) = (q, a * q - p);
    }
    out
}

pub fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
}
