//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order; the representation is
//! canonical (no trailing zero coefficients, empty vector for zero).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Self {
        Poly::new(vec![-r.clone(), Rat::one()])
    }

    /// `x^m - r`
    pub fn binomial(m: usize, r: &Rat) -> Self {
        let mut c = vec![Rat::zero(); m + 1];
        c[0] = -r.clone();
        c[m] = Rat::one();
        Poly::new(c)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.lead().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Removes factors of `x`.
    pub fn strip_zero_roots(&self) -> Poly {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Poly::new(self.coeffs[k..].to_vec())
    }

    /// `p(s * x)`
    pub fn scale_var(&self, s: &Rat) -> Poly {
        let mut f = Rat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &f);
            f *= s;
        }
        Poly::new(out)
    }

    /// `x^deg * p(1/x)`
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Bound `B` such that every real root lies in `(-B, B)`.
    pub fn cauchy_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let q = c.abs() / &lead;
            if q > m {
                m = q;
            }
        }
        m + Rat::one()
    }

    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&rat(-1)));
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.squarefree().sturm_sequence();
        let va = sign_variations(&seq, a);
        let vb = sign_variations(&seq, b);
        va.saturating_sub(vb)
    }

    /// Disjoint isolating intervals `(lo, hi]` for the distinct real roots,
    /// in increasing order. A rational root may be returned as `lo == hi`.
    pub fn isolate_real_roots(&self) -> Vec<(Rat, Rat)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree();
        let seq = sf.sturm_sequence();
        let bound = sf.cauchy_bound();
        let mut out = Vec::new();
        isolate(&sf, &seq, -bound.clone(), bound, &mut out);
        out
    }

    /// Resultant of two polynomials via the Sylvester matrix.
    pub fn resultant(&self, other: &Poly) -> Rat {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Rat::zero(),
        };
        if m == 0 && n == 0 {
            return Rat::one();
        }
        let size = m + n;
        let mut rows = vec![vec![Rat::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        crate::matrix::det_rows(rows)
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
        let mut out = Poly::zero();
        for i in 0..xs.len() {
            let mut basis = Poly::constant(Rat::one());
            let mut denom = Rat::one();
            for j in 0..xs.len() {
                if i != j {
                    basis = basis.mul(&Poly::linear_root(&xs[j]));
                    denom *= &xs[i] - &xs[j];
                }
            }
            out = out.add(&basis.scale(&(&ys[i] / denom)));
        }
        out
    }

    /// Integer-coefficient primitive associate with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.lead().is_negative() {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c /= &g;
        }
        ints
    }
}

/// Precomputed Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Self {
        if p.degree().unwrap_or(0) == 0 {
            return SturmChain { seq: Vec::new() };
        }
        SturmChain { seq: p.squarefree().sturm_sequence() }
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        if self.seq.is_empty() {
            return 0;
        }
        sign_variations(&self.seq, a).saturating_sub(sign_variations(&self.seq, b))
    }
}

fn sign_variations(seq: &[Poly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn isolate(p: &Poly, seq: &[Poly], lo: Rat, hi: Rat, out: &mut Vec<(Rat, Rat)>) {
    let n = sign_variations(seq, &lo) - sign_variations(seq, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        // Shrink a touch so the endpoint is not itself a root unless exact.
        if p.sign_at(&hi) == 0 {
            out.push((hi.clone(), hi));
        } else {
            out.push((lo, hi));
        }
        return;
    }
    let mid = (&lo + &hi) / rat(2);
    isolate(p, seq, lo, mid.clone(), out);
    isolate(p, seq, mid, hi, out);
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ints = self.primitive_integer();
        if ints.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in ints.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2)(x-3) and (x-2)(x+5)
        let a = Poly::from_ints(&[-6, 11, -6, 1]);
        let b = Poly::from_ints(&[-10, 3, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-2, 1]));
        let (q, r) = a.div_rem(&Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&[6, -5, 1]));
    }

    #[test]
    fn sturm_counts_and_isolation() {
        let p = Poly::from_ints(&[-6, 0, 1]); // x^2 - 6
        assert_eq!(p.count_roots_in(&rat(0), &rat(3)), 1);
        assert_eq!(p.count_roots_in(&rat(-3), &rat(3)), 2);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots[1].0 < rat_frac(245, 100) && roots[1].1 > rat_frac(244, 100));
        // repeated root counted once
        let q = Poly::from_ints(&[4, -4, 1]);
        assert_eq!(q.isolate_real_roots().len(), 1);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x-a, x-b) = a - b up to sign convention (b - a) for monic linear
        let r = Poly::from_ints(&[-2, 1]).resultant(&Poly::from_ints(&[-5, 1]));
        assert_eq!(r.abs(), rat(3));
        // common root gives zero
        let r = Poly::from_ints(&[-6, 11, -6, 1]).resultant(&Poly::from_ints(&[-3, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn display_integer_form() {
        assert_eq!(alloc::format!("{}", Poly::from_ints(&[-6, 0, 1])), "x^2 - 6");
        assert_eq!(alloc::format!("{}", Poly::new(alloc::vec![rat_frac(-1, 2), rat(1)])), "2*x - 1");
    }
}
