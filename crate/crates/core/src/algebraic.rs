//! Exact real algebraic numbers: a rational, or the unique root of a
//! squarefree rational polynomial inside an isolating interval.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::arith::{nth_root_bounds, rat, rat_pow, rat_to_f64, simplest_between, Rat};
use crate::poly::{Poly, SturmChain};

#[derive(Clone, Debug)]
pub enum AlgebraicReal {
    Rational(Rat),
    Root(RootOf),
}

/// Root of `poly` strictly inside `(lo, hi)`, the only root of `poly` in
/// `[lo, hi]`. The root is known to be irrational.
#[derive(Clone, Debug)]
pub struct RootOf {
    poly: Poly,
    lo: Rat,
    hi: Rat,
    radical: Option<(Rat, u32)>,
}

impl RootOf {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    /// `Some((r, m))` when the root equals `r^(1/m)`.
    pub fn radical(&self) -> Option<&(Rat, u32)> {
        self.radical.as_ref()
    }

    fn bisect(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let mid = (lo + hi) / rat(2);
        let slo = self.poly.sign_at(lo);
        let smid = self.poly.sign_at(&mid);
        if smid == 0 {
            (mid.clone(), mid)
        } else if slo == smid {
            (mid, hi.clone())
        } else {
            (lo.clone(), mid)
        }
    }

    /// Isolating interval of width at most `width`.
    pub fn narrowed(&self, width: &Rat) -> (Rat, Rat) {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        while &hi - &lo > *width && lo != hi {
            let next = self.bisect(&lo, &hi);
            lo = next.0;
            hi = next.1;
        }
        (lo, hi)
    }

    fn halved(&self) -> RootOf {
        let (lo, hi) = self.bisect(&self.lo, &self.hi);
        RootOf { poly: self.poly.clone(), lo, hi, radical: self.radical.clone() }
    }
}

impl AlgebraicReal {
    pub fn from_rational(r: Rat) -> Self {
        AlgebraicReal::Rational(r)
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicReal::Rational(rat(n))
    }

    pub fn from_uint(n: &BigUint) -> Self {
        AlgebraicReal::Rational(crate::arith::rat_from_uint(n))
    }

    /// The unique root of `p` in the half-open interval `(lo, hi]`.
    pub fn from_isolated(p: &Poly, lo: Rat, hi: Rat) -> Self {
        let sf = p.squarefree();
        if lo == hi || sf.sign_at(&hi) == 0 {
            return AlgebraicReal::Rational(hi);
        }
        debug_assert_eq!(sf.count_roots_in(&lo, &hi), 1);
        let mut root = RootOf { poly: sf, lo, hi, radical: None };
        if root.poly.sign_at(&root.lo) == 0 {
            // Move the open end off a neighbouring root.
            let mut l = root.hi.clone();
            loop {
                let m = (&root.lo + &l) / rat(2);
                if root.poly.count_roots_in(&m, &root.hi) == 1 && root.poly.sign_at(&m) != 0 {
                    l = m;
                    break;
                }
                l = m;
            }
            root.lo = l;
        }
        if let Some(r) = rational_root_in(&root) {
            return AlgebraicReal::Rational(r);
        }
        root.radical = detect_radical(&root);
        if let Some((r, m)) = &root.radical {
            let reduced = root.poly.gcd(&Poly::binomial(*m as usize, r));
            root.poly = reduced;
        }
        AlgebraicReal::Root(root)
    }

    /// Positive `m`-th root of a nonnegative rational.
    pub fn nth_root_of(r: &Rat, m: u32) -> Self {
        assert!(!r.is_negative() && m >= 1);
        if r.is_zero() || m == 1 {
            return AlgebraicReal::Rational(r.clone());
        }
        let p = Poly::binomial(m as usize, r);
        let hi = if r > &Rat::one() { r.clone() } else { Rat::one() };
        AlgebraicReal::from_isolated(&p, Rat::zero(), hi)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            AlgebraicReal::Rational(r) => Some(r),
            AlgebraicReal::Root(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, AlgebraicReal::Rational(_))
    }

    /// Rational bounds `lo <= x <= hi` with `hi - lo <= width`.
    pub fn bounds(&self, width: &Rat) -> (Rat, Rat) {
        match self {
            AlgebraicReal::Rational(r) => (r.clone(), r.clone()),
            AlgebraicReal::Root(root) => root.narrowed(width),
        }
    }

    /// A polynomial vanishing at this number.
    pub fn defining_poly(&self) -> Poly {
        match self {
            AlgebraicReal::Rational(r) => Poly::linear_root(r),
            AlgebraicReal::Root(root) => root.poly.clone(),
        }
    }

    /// True when `p` vanishes at this number.
    pub fn is_root_of(&self, p: &Poly) -> bool {
        match self {
            AlgebraicReal::Rational(r) => p.eval(r).is_zero(),
            AlgebraicReal::Root(root) => {
                let g = root.poly.gcd(p);
                g.degree().unwrap_or(0) > 0 && g.count_roots_in(&root.lo, &root.hi) == 1
            }
        }
    }

    /// Interval `(lo, hi]` containing this number and no other root of `p`,
    /// where `p` must vanish here.
    pub fn isolate_within(&self, p: &Poly) -> (Rat, Rat) {
        match self {
            AlgebraicReal::Rational(r) => (r.clone(), r.clone()),
            AlgebraicReal::Root(root) => {
                let chain = SturmChain::new(p);
                let mut cur = root.clone();
                loop {
                    if chain.count(&cur.lo, &cur.hi) == 1 {
                        return (cur.lo, cur.hi);
                    }
                    cur = cur.halved();
                }
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        self.cmp_rational(&Rat::zero())
    }

    pub fn cmp_rational(&self, r: &Rat) -> Ordering {
        match self {
            AlgebraicReal::Rational(x) => x.cmp(r),
            AlgebraicReal::Root(root) => {
                // The root is irrational, so it never equals `r`.
                let mut cur = root.clone();
                loop {
                    if &cur.hi <= r {
                        return Ordering::Less;
                    }
                    if &cur.lo >= r {
                        return Ordering::Greater;
                    }
                    cur = cur.halved();
                }
            }
        }
    }

    pub fn neg(&self) -> AlgebraicReal {
        match self {
            AlgebraicReal::Rational(r) => AlgebraicReal::Rational(-r.clone()),
            AlgebraicReal::Root(root) => AlgebraicReal::Root(RootOf {
                poly: root.poly.scale_var(&rat(-1)),
                lo: -root.hi.clone(),
                hi: -root.lo.clone(),
                radical: None,
            }),
        }
    }

    pub fn add_rational(&self, r: &Rat) -> AlgebraicReal {
        match self {
            AlgebraicReal::Rational(x) => AlgebraicReal::Rational(x + r),
            AlgebraicReal::Root(root) => {
                // p(x - r)
                let shifted = compose_linear(&root.poly, &Rat::one(), &-r.clone());
                AlgebraicReal::Root(RootOf { poly: shifted, lo: &root.lo + r, hi: &root.hi + r, radical: None })
            }
        }
    }

    pub fn mul_rational(&self, r: &Rat) -> AlgebraicReal {
        if r.is_zero() {
            return AlgebraicReal::Rational(Rat::zero());
        }
        match self {
            AlgebraicReal::Rational(x) => AlgebraicReal::Rational(x * r),
            AlgebraicReal::Root(root) => {
                // p(x / r)
                let poly = root.poly.scale_var(&r.recip());
                let (a, b) = (&root.lo * r, &root.hi * r);
                let (lo, hi) = if r.is_positive() { (a, b) } else { (b, a) };
                let radical = match (&root.radical, r.is_positive()) {
                    (Some((base, m)), true) => Some((base * rat_pow(r, *m), *m)),
                    _ => None,
                };
                AlgebraicReal::Root(RootOf { poly, lo, hi, radical })
            }
        }
    }

    pub fn add(&self, other: &AlgebraicReal) -> AlgebraicReal {
        match (self, other) {
            (AlgebraicReal::Rational(r), x) | (x, AlgebraicReal::Rational(r)) => x.add_rational(r),
            (AlgebraicReal::Root(a), AlgebraicReal::Root(b)) => {
                let res = sum_resultant(&a.poly, &b.poly);
                combine(res, a, b, |(al, ah), (bl, bh)| (al + bl, ah + bh))
            }
        }
    }

    pub fn sub(&self, other: &AlgebraicReal) -> AlgebraicReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlgebraicReal) -> AlgebraicReal {
        match (self, other) {
            (AlgebraicReal::Rational(r), x) | (x, AlgebraicReal::Rational(r)) => x.mul_rational(r),
            (AlgebraicReal::Root(a), AlgebraicReal::Root(b)) => {
                let sa = self.signum();
                let sb = other.signum();
                if sa == Ordering::Less {
                    return self.neg().mul(other).neg();
                }
                if sb == Ordering::Less {
                    return self.mul(&other.neg()).neg();
                }
                // Both positive: move lower ends above zero first.
                let a = positive_interval(a);
                let b = positive_interval(b);
                if let (Some((ra, m)), Some((rb, n))) = (&a.radical, &b.radical) {
                    if m == n {
                        return AlgebraicReal::nth_root_of(&(ra * rb), *m);
                    }
                }
                let res = product_resultant(&a.poly, &b.poly);
                combine(res, &a, &b, |(al, ah), (bl, bh)| (al * bl, ah * bh))
            }
        }
    }

    pub fn pow(&self, e: u32) -> AlgebraicReal {
        match self {
            AlgebraicReal::Rational(r) => AlgebraicReal::Rational(rat_pow(r, e)),
            AlgebraicReal::Root(root) => {
                if let Some((r, m)) = &root.radical {
                    // (r^(1/m))^e = (r^e)^(1/m), reduced when m divides e.
                    if e.is_multiple_of(*m) {
                        return AlgebraicReal::Rational(rat_pow(r, e / m));
                    }
                    return AlgebraicReal::nth_root_of(&rat_pow(r, e), *m);
                }
                let mut acc = AlgebraicReal::from_int(1);
                for _ in 0..e {
                    acc = acc.mul(self);
                }
                acc
            }
        }
    }

    pub fn max(self, other: AlgebraicReal) -> AlgebraicReal {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(&Rat::new(1.into(), (1u64 << 60).into()));
        rat_to_f64(&((lo + hi) / rat(2)))
    }

    /// Decimal rendering with `digits` fractional digits, for `--approx` output.
    pub fn approx_string(&self, digits: usize) -> String {
        let ten = rat(10);
        let scale = rat_pow(&ten, digits as u32);
        let (lo, hi) = self.bounds(&(Rat::one() / (&scale * rat(1000))));
        let v = ((lo + hi) / rat(2) * &scale).round().to_integer();
        let neg = v.is_negative();
        let s = format!("{}", v.abs());
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

fn positive_interval(r: &RootOf) -> RootOf {
    let mut cur = r.clone();
    while !cur.lo.is_positive() {
        cur = cur.halved();
    }
    cur
}

/// `p(s*x + t)`
fn compose_linear(p: &Poly, s: &Rat, t: &Rat) -> Poly {
    let lin = Poly::new(alloc::vec![t.clone(), s.clone()]);
    let mut acc = Poly::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
    }
    acc
}

/// Polynomial whose roots include every `alpha + beta` with `p(alpha) = 0`
/// and `q(beta) = 0`: `Res_y(p(y), q(x - y))`.
fn sum_resultant(p: &Poly, q: &Poly) -> Poly {
    let n = p.degree().unwrap() * q.degree().unwrap();
    let xs: Vec<Rat> = (0..=n).map(|i| rat(i as i64)).collect();
    let ys: Vec<Rat> = xs.iter().map(|x0| p.resultant(&compose_linear(q, &rat(-1), x0))).collect();
    Poly::interpolate(&xs, &ys)
}

/// Polynomial whose roots include every `alpha * beta` for nonzero roots:
/// `Res_y(p(y), y^m q(x / y))`.
fn product_resultant(p: &Poly, q: &Poly) -> Poly {
    let p = p.strip_zero_roots();
    let q = q.strip_zero_roots();
    let m = q.degree().unwrap();
    let n = p.degree().unwrap() * m;
    let xs: Vec<Rat> = (1..=n + 1).map(|i| rat(i as i64)).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x0| {
            // y^m q(x0 / y) = sum_i q_i x0^i y^(m - i)
            let mut c = alloc::vec![Rat::zero(); m + 1];
            let mut pw = Rat::one();
            for (i, qi) in q.coeffs().iter().enumerate() {
                c[m - i] = qi * &pw;
                pw *= x0;
            }
            p.resultant(&Poly::new(c))
        })
        .collect();
    Poly::interpolate(&xs, &ys)
}

fn combine<F>(res: Poly, a: &RootOf, b: &RootOf, op: F) -> AlgebraicReal
where
    F: Fn((&Rat, &Rat), (&Rat, &Rat)) -> (Rat, Rat),
{
    let sf = res.squarefree();
    let chain = SturmChain::new(&sf);
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        let (lo, hi) = op((&a.lo, &a.hi), (&b.lo, &b.hi));
        // The true value lies strictly inside (lo, hi).
        let n = chain.count(&lo, &hi) - usize::from(sf.sign_at(&hi) == 0);
        if n == 1 && sf.sign_at(&lo) != 0 && sf.sign_at(&hi) != 0 {
            return AlgebraicReal::from_isolated(&sf, lo, hi);
        }
        a = a.halved();
        b = b.halved();
    }
}

/// Rational root of `root.poly` inside the interval, if any.
fn rational_root_in(root: &RootOf) -> Option<Rat> {
    let ints = root.poly.primitive_integer();
    let lead = Rat::from_integer(ints.last().unwrap().abs());
    // Distinct rationals with denominators dividing `lead` are at least
    // 1/lead^2 apart.
    let width = Rat::one() / (&lead * &lead * rat(2));
    let (lo, hi) = root.narrowed(&width);
    let cand = simplest_between(&lo, &hi);
    if root.poly.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

fn detect_radical(root: &RootOf) -> Option<(Rat, u32)> {
    let deg = root.poly.degree()? as u32;
    if deg < 2 {
        return None;
    }
    let positive = positive_root(root)?;
    let intervals: Vec<(Rat, Rat)> =
        [24u32, 64, 160].iter().map(|&bits| positive.narrowed(&Rat::new(1.into(), num_bigint::BigInt::one() << bits as usize))).collect();
    for m in 2..=deg.min(12) {
        let mut prev: Option<Rat> = None;
        for (lo, hi) in &intervals {
            let cand = simplest_between(&rat_pow(lo, m), &rat_pow(hi, m));
            // Only test a candidate once refinement stops changing it.
            if prev.as_ref() == Some(&cand) && cand.is_positive() {
                let g = root.poly.gcd(&Poly::binomial(m as usize, &cand));
                if g.degree().unwrap_or(0) > 0 && g.count_roots_in(&root.lo, &root.hi) == 1 {
                    return Some((cand, m));
                }
            }
            prev = Some(cand);
        }
    }
    None
}

fn positive_root(root: &RootOf) -> Option<RootOf> {
    if !root.hi.is_positive() {
        return None;
    }
    let mut cur = root.clone();
    while !cur.lo.is_positive() {
        if !cur.hi.is_positive() {
            return None;
        }
        cur = cur.halved();
    }
    Some(cur)
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AlgebraicReal::Rational(a), AlgebraicReal::Rational(b)) => a.cmp(b),
            (x, AlgebraicReal::Rational(r)) => x.cmp_rational(r),
            (AlgebraicReal::Rational(r), y) => y.cmp_rational(r).reverse(),
            (AlgebraicReal::Root(a), AlgebraicReal::Root(b)) => {
                let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
                let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
                if lo < hi {
                    let g = a.poly.gcd(&b.poly);
                    if g.degree().unwrap_or(0) > 0 && g.count_roots_in(lo, hi) > 0 {
                        return Ordering::Equal;
                    }
                }
                let (mut a, mut b) = (a.clone(), b.clone());
                loop {
                    if a.hi <= b.lo {
                        return Ordering::Less;
                    }
                    if b.hi <= a.lo {
                        return Ordering::Greater;
                    }
                    a = a.halved();
                    b = b.halved();
                }
            }
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicReal::Rational(r) => write!(f, "{r}"),
            AlgebraicReal::Root(root) => match &root.radical {
                Some((r, m)) => write!(f, "{r}^{{1/{m}}}"),
                None => write!(f, "root({}; {}..{})", root.poly, root.lo, root.hi),
            },
        }
    }
}

/// Rational lower and upper bounds for `sqrt(r)` within `2^-bits`.
pub fn sqrt_bounds(r: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!r.is_negative());
    let num = r.numer().to_biguint().unwrap();
    let den = r.denom().to_biguint().unwrap();
    let (lo, hi) = nth_root_bounds(&(num * &den), 2, bits);
    let d = crate::arith::rat_from_uint(&den);
    (lo / &d, hi / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    fn sqrt(n: i64) -> AlgebraicReal {
        AlgebraicReal::nth_root_of(&rat(n), 2)
    }

    #[test]
    fn rational_roots_collapse() {
        let p = Poly::from_ints(&[-6, 5, 1]); // (x-1)(x+6)
        let a = AlgebraicReal::from_isolated(&p, rat(0), rat(3));
        assert_eq!(a.as_rational(), Some(&rat(1)));
        assert_eq!(sqrt(9).as_rational(), Some(&rat(3)));
        let q = Poly::from_ints(&[-1, 0, 4]); // 4x^2 - 1
        let b = AlgebraicReal::from_isolated(&q, rat(0), rat(1));
        assert_eq!(b.as_rational(), Some(&rat_frac(1, 2)));
    }

    #[test]
    fn radicals_display_and_compare() {
        let s6 = sqrt(6);
        assert_eq!(alloc::format!("{s6}"), "6^{1/2}");
        assert!(s6 > AlgebraicReal::from_int(2));
        assert!(s6 < AlgebraicReal::from_rational(rat_frac(5, 2)));
        let c = AlgebraicReal::nth_root_of(&rat(2), 3);
        assert_eq!(alloc::format!("{c}"), "2^{1/3}");
        assert_eq!(c.pow(3), AlgebraicReal::from_int(2));
    }

    #[test]
    fn sums_and_products() {
        let s2 = sqrt(2);
        let s3 = sqrt(3);
        assert_eq!(s2.mul(&s2), AlgebraicReal::from_int(2));
        assert_eq!(s2.mul(&s3), sqrt(6));
        let sum = s2.add(&s3);
        // (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6
        let lhs = sum.mul(&sum);
        let rhs = sqrt(6).mul_rational(&rat(2)).add_rational(&rat(5));
        assert_eq!(lhs, rhs);
        assert_eq!(s2.sub(&s2), AlgebraicReal::from_int(0));
        // golden ratio times its conjugate is -1
        let p = Poly::from_ints(&[-1, -1, 1]);
        let phi = AlgebraicReal::from_isolated(&p, rat(1), rat(2));
        let psi = AlgebraicReal::from_isolated(&p, rat(-1), rat(0));
        assert_eq!(phi.mul(&psi), AlgebraicReal::from_int(-1));
        assert_eq!(phi.add(&psi), AlgebraicReal::from_int(1));
    }

    #[test]
    fn approximations() {
        assert_eq!(sqrt(2).approx_string(6), "1.414214");
        assert_eq!(AlgebraicReal::from_rational(rat_frac(10, 3)).approx_string(3), "3.333");
        let (lo, hi) = sqrt_bounds(&rat(6), 20);
        assert!(&lo * &lo <= rat(6) && &hi * &hi >= rat(6));
    }
}
