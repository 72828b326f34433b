//! Growth-rate extraction from exact integer sequences.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebraic::AlgebraicReal;
use crate::arith::{nth_root_bounds, rat, rat_from_uint, Rat};
use crate::matrix::largest_real_root;
use crate::poly::Poly;

/// Denominator exponent for the rational roots `s_n^(1/n)`.
pub const ROOT_BITS: u32 = 32;

/// Shortest linear recurrence of `seq` over Q, as the characteristic
/// polynomial `x^L + c_1 x^(L-1) + ... + c_L`.
pub fn berlekamp_massey(seq: &[Rat]) -> Poly {
    let mut c = vec![Rat::one()];
    let mut b = vec![Rat::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rat::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l {
            d += &c[i] * &seq[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Rat::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, Rat::zero());
    c.reverse();
    Poly::new(c)
}

/// Exact growth rate of a nonnegative sequence known to satisfy a linear
/// recurrence of order at most `order_bound`. Needs `2 * order_bound` terms.
///
/// For nonnegative sequences the dominant pole of the generating function
/// is real and positive, so the rate is the largest positive root.
pub fn recurrence_growth(seq: &[BigUint], order_bound: usize) -> Option<(AlgebraicReal, Poly)> {
    if seq.len() < 2 * order_bound {
        return None;
    }
    let qs: Vec<Rat> = seq.iter().map(rat_from_uint).collect();
    let poly = berlekamp_massey(&qs);
    if poly.degree()? > order_bound {
        return None;
    }
    Some((largest_real_root(&poly), poly))
}

/// Lower rational approximations of `s_n^(1/n)`, `n = 1, 2, ...`.
pub fn root_sequence(seq: &[BigUint]) -> Vec<Rat> {
    seq.iter().enumerate().map(|(i, s)| nth_root_bounds(s, i as u32 + 1, ROOT_BITS).0).collect()
}

/// Largest observed `s_(n+m) / (s_n s_m)` over `n + m <= len`.
pub fn max_submultiplicative_ratio(seq: &[BigUint]) -> Option<Rat> {
    let mut worst: Option<Rat> = None;
    for n in 1..=seq.len() {
        for m in n..=seq.len() {
            if n + m > seq.len() {
                break;
            }
            let den = &seq[n - 1] * &seq[m - 1];
            if den.is_zero() {
                return None;
            }
            let r = rat_from_uint(&seq[n + m - 1]) / rat_from_uint(&den);
            if worst.as_ref().is_none_or(|w| r > *w) {
                worst = Some(r);
            }
        }
    }
    worst
}

/// `min_n upper((c s_n)^(1/n))`, valid when `s` is submultiplicative with
/// constant `c`.
pub fn fekete_upper(seq: &[BigUint], c: &BigUint) -> Option<Rat> {
    seq.iter().enumerate().map(|(i, s)| nth_root_bounds(&(s * c), i as u32 + 1, ROOT_BITS).1).min()
}

/// Relative change below `10^-6` across the last three roots.
pub fn converged(roots: &[Rat]) -> bool {
    if roots.len() < 3 {
        return false;
    }
    let tail = &roots[roots.len() - 3..];
    let tol = Rat::new(1.into(), 1_000_000.into());
    tail.windows(2).all(|w| {
        if w[1].is_zero() {
            return w[0].is_zero();
        }
        let diff = if w[0] > w[1] { &w[0] - &w[1] } else { &w[1] - &w[0] };
        diff / &w[1] < tol
    })
}

/// Growth of `sum_words coef * w(net step)` for a walk with up-weight `a`,
/// down-weight `b` and stay-weight `c`, where a net displacement `m` costs
/// `mu^m` upward and `nu^|m|` downward. With `P(x) = a x + b / x + c` the
/// rate is `max(P(max(mu, x*)), P(min(1/nu, x*)))`, `x* = sqrt(b / a)`.
pub fn walk_growth(a: &BigUint, b: &BigUint, c: &BigUint, mu: &Rat, nu: &Rat) -> AlgebraicReal {
    let (a, b, c) = (rat_from_uint(a), rat_from_uint(b), rat_from_uint(c));
    let p = |x: &Rat| &a * x + &b / x + &c;
    if a.is_zero() && b.is_zero() {
        return AlgebraicReal::from_rational(c);
    }
    if b.is_zero() {
        return AlgebraicReal::from_rational(&a * mu + &c);
    }
    if a.is_zero() {
        return AlgebraicReal::from_rational(&b * nu + &c);
    }
    // P(x*) = c + 2 sqrt(a b).
    let bottom = AlgebraicReal::nth_root_of(&(rat(4) * &a * &b), 2).add_rational(&c);
    let x2 = &b / &a;
    let up = if mu * mu >= x2 { AlgebraicReal::from_rational(p(mu)) } else { bottom.clone() };
    let inv = nu.recip();
    let down = if &inv * &inv <= x2 { AlgebraicReal::from_rational(p(&inv)) } else { bottom };
    up.max(down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    fn seq(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn bm_finds_fibonacci() {
        let s: Vec<Rat> = [1, 1, 2, 3, 5, 8, 13, 21].iter().map(|&x| rat(x)).collect();
        assert_eq!(berlekamp_massey(&s), Poly::from_ints(&[-1, -1, 1]));
    }

    #[test]
    fn bm_geometric_and_alternating() {
        let (g, p) = recurrence_growth(&seq(&[3, 9, 27, 81]), 2).unwrap();
        assert_eq!(p, Poly::from_ints(&[-3, 1]));
        assert_eq!(g.as_rational(), Some(&rat(3)));
        // 2, 6, 12, 36, ...: period-two growth sqrt(6)
        let (g, _) = recurrence_growth(&seq(&[2, 6, 12, 36, 72, 216]), 2).unwrap();
        assert_eq!(alloc::format!("{g}"), "6^{1/2}");
    }

    #[test]
    fn too_short_for_certificate() {
        assert!(recurrence_growth(&seq(&[2, 4, 8]), 2).is_none());
    }

    #[test]
    fn fekete_and_ratios() {
        let s = seq(&[3, 9, 27, 81]);
        assert_eq!(fekete_upper(&s, &BigUint::one()), Some(rat(3)));
        assert_eq!(max_submultiplicative_ratio(&s), Some(rat(1)));
        let bad = seq(&[1, 3]);
        assert_eq!(max_submultiplicative_ratio(&bad), Some(rat(3)));
    }

    #[test]
    fn walk_growth_matches_symmetric_formula() {
        let one = BigUint::one();
        let zero = BigUint::zero();
        let w = walk_growth(&one, &one, &zero, &rat(3), &rat(3));
        assert_eq!(w.as_rational(), Some(&rat_frac(10, 3)));
        let w = walk_growth(&one, &one, &zero, &rat(1), &rat(1));
        assert_eq!(w.as_rational(), Some(&rat(2)));
        let w = walk_growth(&one, &BigUint::from(4u32), &zero, &rat(1), &rat(1));
        // mu = 1 sits below x* = 2, so the upward part is P(2) = 4; downward P(1) = 5.
        assert_eq!(w.as_rational(), Some(&rat(5)));
    }

    #[test]
    fn convergence_flag() {
        assert!(converged(&[rat(3), rat(3), rat(3)]));
        assert!(!converged(&[rat(2), rat(3), rat(4)]));
    }
}
