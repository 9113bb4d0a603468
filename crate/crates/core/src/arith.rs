//! Integer helpers shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `p` for which divisor enumeration and factorization are attempted.
pub const MAX_FACTOR: u64 = 100_000_000_000_000;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Least non-negative residue of `a` modulo `m > 0`.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, in `[0, m)`. `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// Floor of the square root of a non-negative rational.
pub fn floor_sqrt_rational(r: &BigRational) -> BigInt {
    isqrt(&r.floor().to_integer())
}

fn small(p: &BigInt) -> Result<u64> {
    match p.to_u64() {
        Some(v) if (1..=MAX_FACTOR).contains(&v) => Ok(v),
        Some(0) => Err(Error::domain("expected a positive integer")),
        _ if p.is_negative() => Err(Error::domain("expected a positive integer")),
        _ => Err(Error::too_large(format!(
            "factoring {p} exceeds the limit {MAX_FACTOR}"
        ))),
    }
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(p: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = small(p)?;
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            let mut e = 0;
            while n % f == 0 {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// All positive divisors of `p`, sorted increasingly.
pub fn divisors(p: &BigInt) -> Result<Vec<BigInt>> {
    let mut divs = vec![BigInt::one()];
    for (prime, exp) in factorize(p)? {
        let mut next = Vec::with_capacity(divs.len() * (exp as usize + 1));
        for d in &divs {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..exp {
                power *= prime;
                next.push(power.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

pub fn to_usize(v: &BigInt, what: &str) -> Result<usize> {
    v.to_usize()
        .ok_or_else(|| Error::too_large(format!("{what} = {v} does not fit in memory")))
}
