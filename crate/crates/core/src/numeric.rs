//! Rigorous enclosures of `ln` and `exp` at rational arguments.
//!
//! Both return a rational interval `[lo, hi]` containing the true value; the
//! width shrinks roughly like `2^-bits`. Callers that need a decision (a floor,
//! a comparison) retry with more bits until the interval is conclusive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const GUARD: u32 = 16;

fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits
}

/// `2^bits * atanh(num/den)` in fixed point, with an absolute error bound in ulps.
/// Requires `|num/den| <= 1/3` and `den > 0`.
fn atanh_fixed(num: &BigInt, den: &BigInt, bits: u32) -> (BigInt, u64) {
    debug_assert!(den.is_positive());
    let negative = num.is_negative();
    let z = (num.abs() << bits) / den;
    let z2 = (&z * &z) >> bits;
    let mut term = z;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * i + 1);
        term = (&term * &z2) >> bits;
        i += 1;
    }
    let err = 8 * (i + 4);
    (if negative { -sum } else { sum }, err)
}

fn enclosure(mid: BigInt, err: BigInt, bits: u32) -> (BigRational, BigRational) {
    let scale = pow2(u64::from(bits));
    (
        BigRational::new(&mid - &err, scale.clone()),
        BigRational::new(mid + err, scale),
    )
}

/// Encloses `ln(r)` for `r > 0`.
pub fn ln_bounds(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(r.is_positive(), "ln of a non-positive value");
    if r.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let g = bits + GUARD;
    let a = r.numer();
    let b = r.denom();
    let e = a.bits() as i64 - b.bits() as i64;
    // r = 2^e * a'/b' with a'/b' in (1/2, 2)
    let (a2, b2) = if e >= 0 {
        (a.clone(), b << (e as u64))
    } else {
        (a << ((-e) as u64), b.clone())
    };
    let (s, err_s) = atanh_fixed(&(&a2 - &b2), &(&a2 + &b2), g);
    let (l2, err_l2) = atanh_fixed(&BigInt::one(), &BigInt::from(3), g);
    let mid = BigInt::from(2) * s + BigInt::from(2 * e) * l2;
    let err = BigInt::from(2 * err_s) + BigInt::from(2 * e.unsigned_abs()) * BigInt::from(err_l2);
    enclosure(mid, err, g)
}

fn round_dyadic(r: &BigRational, bits: u32, up: bool) -> BigRational {
    debug_assert!(r.is_positive());
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64 - i64::from(bits);
    // m = r / 2^shift rounded, result m * 2^shift
    let (num, den) = if shift >= 0 {
        (r.numer().clone(), r.denom() << (shift as u64))
    } else {
        (r.numer() << ((-shift) as u64), r.denom().clone())
    };
    let (q, rem) = num.div_rem(&den);
    let m = if up && !rem.is_zero() { q + 1 } else { q };
    if shift >= 0 {
        BigRational::from_integer(m << (shift as u64))
    } else {
        BigRational::new(m, pow2((-shift) as u64))
    }
}

/// Encloses `exp(y)`.
pub fn exp_bounds(y: &BigRational, bits: u32) -> (BigRational, BigRational) {
    if y.is_zero() {
        return (BigRational::one(), BigRational::one());
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut s: u32 = 0;
    let mut t = y.clone();
    while t.abs() > half {
        t /= BigRational::from_integer(2.into());
        s += 1;
    }
    let g = bits + s + GUARD;
    let scale = pow2(u64::from(g));
    let t_fp = (t.numer() * &scale).div_floor(t.denom());
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while term.abs() > BigInt::one() || i < 2 {
        sum += &term;
        i += 1;
        term = ((&term * &t_fp) >> g) / BigInt::from(i);
    }
    let err = BigInt::from(4 * (i + 4));
    let (mut lo, mut hi) = enclosure(sum, err, g);
    let precision = bits + GUARD + 8;
    for _ in 0..s {
        lo = round_dyadic(&(&lo * &lo), precision, false);
        hi = round_dyadic(&(&hi * &hi), precision, true);
    }
    (lo, hi)
}
