//! Integer and rational helpers shared by the engines.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_uint(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

pub fn rat_from_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Converts a nonnegative integral rational back to `BigUint`.
pub fn rat_to_uint(r: &Rat) -> Option<BigUint> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.to_integer().to_biguint()
}

pub fn uint_pow(base: &BigUint, exp: u32) -> BigUint {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Multinomial coefficient `n! / prod(parts!)`.
pub fn multinomial(parts: &[u32]) -> BigUint {
    let mut out = BigUint::one();
    let mut total = 0u32;
    for &k in parts {
        for i in 1..=k {
            total += 1;
            out *= BigUint::from(total);
            out /= BigUint::from(i);
        }
    }
    out
}

/// Rational lower and upper bounds for `value^(1/n)` with denominator `2^bits`.
/// Returns `(lo, hi)` with `lo <= value^(1/n) <= hi` and `hi - lo <= 2^-bits`.
pub fn nth_root_bounds(value: &BigUint, n: u32, bits: u32) -> (Rat, Rat) {
    assert!(n >= 1);
    let scale = BigUint::one() << (bits as usize * n as usize);
    let scaled = value * scale;
    let floor = scaled.nth_root(n);
    let denom = BigInt::one() << bits as usize;
    let lo = Rat::new(BigInt::from(floor.clone()), denom.clone());
    let exact = num_traits::pow(floor.clone(), n as usize) == scaled;
    let hi = if exact { lo.clone() } else { Rat::new(BigInt::from(floor + 1u32), denom) };
    (lo, hi)
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    // Stern-Brocot style continued fraction descent.
    let fl = lo.floor();
    if fl == *lo {
        return lo.clone();
    }
    if fl.clone() + Rat::one() <= *hi {
        return fl + Rat::one();
    }
    let inv_lo = (hi.clone() - fl.clone()).recip();
    let inv_hi = (lo.clone() - fl.clone()).recip();
    fl + simplest_between(&inv_lo, &inv_hi).recip()
}

/// Approximate decimal rendering, only used for `--approx` style output.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // Shift both to a manageable size.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
    let n = (r.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn gcd_uint(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[2, 1]), BigUint::from(3u32));
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[3]), BigUint::one());
        assert_eq!(multinomial(&[]), BigUint::one());
    }

    #[test]
    fn root_bounds_bracket() {
        let (lo, hi) = nth_root_bounds(&BigUint::from(6u32), 2, 20);
        assert!(lo.clone() * lo.clone() <= rat(6));
        assert!(hi.clone() * hi.clone() >= rat(6));
        let (lo, hi) = nth_root_bounds(&BigUint::from(125u32), 3, 10);
        assert_eq!(lo, rat(5));
        assert_eq!(hi, rat(5));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat_frac(3, 10), &rat_frac(4, 10)), rat_frac(1, 3));
        assert_eq!(simplest_between(&rat_frac(7, 2), &rat_frac(9, 2)), rat(4));
        assert_eq!(simplest_between(&rat_frac(-4, 10), &rat_frac(-3, 10)), rat_frac(-1, 3));
    }
}
