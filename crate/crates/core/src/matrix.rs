//! Dense rational matrices: products, powers, exact determinants,
//! characteristic polynomials and spectral radii of nonnegative matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicReal;
use crate::arith::{rat, Rat};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn scalar(n: usize, c: Rat) -> Self {
        Matrix::identity(n).scale(&c)
    }

    pub fn diagonal(entries: Vec<Rat>) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        det_rows(self.to_rows())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Matrix::identity(n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].recip();
            for j in 0..n {
                a[col][j] *= &p;
                inv[col][j] *= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }

    /// `det(x I - M)`, computed by exact evaluation at `n + 1` points and
    /// interpolation.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let xs: Vec<Rat> = (0..=n).map(|i| rat(i as i64)).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| Matrix::scalar(n, x.clone()).add(&self.scale(&rat(-1))).det()).collect();
        Poly::interpolate(&xs, &ys)
    }

    /// Spectral radius of a nonnegative square matrix.
    ///
    /// Matrices up to 8x8 go through the characteristic polynomial (the
    /// Perron root is its largest real root); larger ones use certified
    /// Collatz-Wielandt bounds from power iteration.
    pub fn spectral_radius(&self) -> SpectralRadius {
        assert!(self.is_square());
        assert!(self.is_nonnegative(), "spectral radius requested for a matrix with negative entries");
        if self.rows <= 8 {
            SpectralRadius::Exact(largest_real_root(&self.char_poly()))
        } else {
            let (lo, hi) = self.collatz_wielandt(200);
            SpectralRadius::Bounds { lo, hi }
        }
    }

    /// Certified bounds on the spectral radius from power iteration.
    ///
    /// The upper bound is `max (Mx)_i / x_i` for the positive iterate `x`;
    /// the lower bound is `min (Mx)_i / x_i` over principal submatrices
    /// supported on the largest entries of `x`.
    pub fn collatz_wielandt(&self, steps: usize) -> (Rat, Rat) {
        let n = self.rows;
        let unit = Rat::from_integer(num_bigint::BigInt::one() << 40);
        // A small positive shift keeps every iterate strictly positive.
        let shifted = self.add(&Matrix::scalar(n, unit.recip()));
        let mut x: Vec<Rat> = vec![Rat::one(); n];
        let mut best_lo = Rat::zero();
        let mut best_hi: Option<Rat> = None;
        for step in 0..steps {
            if step % 10 == 0 || step + 1 == steps {
                let (lo, hi) = self.cw_bounds(&x);
                if lo > best_lo {
                    best_lo = lo;
                }
                if best_hi.as_ref().is_none_or(|b| hi < *b) {
                    best_hi = Some(hi);
                }
            }
            let y = shifted.apply(&x);
            let top = y.iter().max().unwrap().clone();
            // Round the iterate to keep denominators bounded.
            x = y
                .iter()
                .map(|v| {
                    let r = (v / &top * &unit).ceil() / &unit;
                    if r.is_zero() {
                        unit.recip()
                    } else {
                        r
                    }
                })
                .collect();
        }
        (best_lo, best_hi.unwrap_or_else(Rat::zero))
    }

    fn cw_bounds(&self, x: &[Rat]) -> (Rat, Rat) {
        let y = self.apply(x);
        let hi = y.iter().zip(x).map(|(a, b)| a / b).max().unwrap();
        let top = x.iter().max().unwrap().clone();
        let mut lo = Rat::zero();
        for shift in [0u32, 1, 4, 10, 20, 40] {
            let t = &top / Rat::from_integer(num_bigint::BigInt::one() << shift as usize);
            let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= t).collect();
            let cand = support
                .iter()
                .map(|&i| {
                    let s: Rat = support.iter().map(|&j| self.get(i, j) * &x[j]).sum();
                    s / &x[i]
                })
                .min()
                .unwrap();
            if cand > lo {
                lo = cand;
            }
        }
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralRadius {
    Exact(AlgebraicReal),
    Bounds { lo: Rat, hi: Rat },
}

impl SpectralRadius {
    pub fn exact(&self) -> Option<&AlgebraicReal> {
        match self {
            SpectralRadius::Exact(a) => Some(a),
            SpectralRadius::Bounds { .. } => None,
        }
    }
}

/// Largest real root of `p`, or zero when `p` has no positive real root.
pub fn largest_real_root(p: &Poly) -> AlgebraicReal {
    let roots = p.isolate_real_roots();
    match roots.last() {
        Some((lo, hi)) if hi.is_positive() => AlgebraicReal::from_isolated(p, lo.clone(), hi.clone()),
        _ => AlgebraicReal::from_rational(Rat::zero()),
    }
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det_rows(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (top, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_int_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn characteristic_polynomial() {
        // [[2,1],[0,2]] -> (x-2)^2
        let m = Matrix::from_int_rows(&[&[2, 1], &[0, 2]]);
        assert_eq!(m.char_poly(), Poly::from_ints(&[4, -4, 1]));
        let c = Matrix::from_int_rows(&[&[0, 2], &[3, 0]]);
        assert_eq!(c.char_poly(), Poly::from_ints(&[-6, 0, 1]));
    }

    #[test]
    fn perron_root_exact_and_bounds() {
        let c = Matrix::from_int_rows(&[&[0, 2], &[3, 0]]);
        let rho = c.spectral_radius();
        let exact = rho.exact().unwrap();
        assert_eq!(alloc::format!("{exact}"), "6^{1/2}");
        let (lo, hi) = c.collatz_wielandt(60);
        assert!(lo <= hi);
        let mut big = Matrix::zeros(9, 9);
        for i in 0..9 {
            big.set(i, i, rat(1 + i as i64));
        }
        match big.spectral_radius() {
            SpectralRadius::Bounds { lo, hi } => {
                assert!(lo <= rat(9) && rat(9) <= hi);
                assert!(&hi - &lo < crate::arith::rat_frac(1, 1000));
            }
            SpectralRadius::Exact(_) => panic!("expected bounds for 9x9"),
        }
    }
}
