//! Numerical cycle rings `N^*(X)` of catalog spaces (points, projective
//! spaces and their products) and of user-declared spaces.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{rat, Rat};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A space with an explicit numerical ring and a fixed polarization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Point,
    Projective(u32),
    /// Product of projective spaces `P^{k_1} x ... x P^{k_r}`, `r >= 2`.
    Product(Vec<u32>),
    Declared(Arc<DeclaredRing>),
}

/// Numerical ring given by tables. The unique codimension-0 class is the
/// unit and the unique top-codimension class has degree one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeclaredRing {
    name: String,
    dim: u32,
    labels: Vec<Vec<String>>,
    products: BTreeMap<(u32, usize, u32, usize), Vec<Rat>>,
    polarization: Vec<Rat>,
}

/// One entry of a declared intersection table: `(p, i) * (q, j) = coeffs`.
pub type ProductEntry = ((u32, usize), (u32, usize), Vec<Rat>);

impl DeclaredRing {
    pub fn new(
        name: &str,
        dim: u32,
        labels: Vec<Vec<String>>,
        entries: Vec<ProductEntry>,
        polarization: Vec<Rat>,
    ) -> Result<Arc<DeclaredRing>> {
        let bad = |m: String| Err(Error::InvalidDeclaredRing(format!("{name}: {m}")));
        if labels.len() != dim as usize + 1 {
            return bad(format!("expected basis labels for codimensions 0..={dim}"));
        }
        if labels[0].len() != 1 || labels[dim as usize].len() != 1 {
            return bad("codimension 0 and the top codimension need exactly one basis class".into());
        }
        if labels.iter().any(|l| l.is_empty()) {
            return bad("every codimension needs at least one basis class".into());
        }
        let mut products = BTreeMap::new();
        for ((p, i), (q, j), coeffs) in entries {
            if p + q > dim {
                return bad(format!("product of codimensions {p} and {q} exceeds the dimension"));
            }
            if i >= labels[p as usize].len() || j >= labels[q as usize].len() {
                return bad(format!("basis index out of range in ({p},{i})*({q},{j})"));
            }
            if coeffs.len() != labels[(p + q) as usize].len() {
                return bad(format!("product ({p},{i})*({q},{j}) has the wrong number of coefficients"));
            }
            for key in [(p, i, q, j), (q, j, p, i)] {
                if let Some(prev) = products.get(&key) {
                    if prev != &coeffs {
                        return bad(format!("intersection table is not symmetric at ({p},{i})*({q},{j})"));
                    }
                }
                products.insert(key, coeffs.clone());
            }
        }
        if dim >= 1 && polarization.len() != labels[1].len() {
            return bad("polarization must be a codimension-1 class".into());
        }
        let ring = Arc::new(DeclaredRing { name: name.to_string(), dim, labels, products, polarization });
        let space = Space::Declared(ring.clone());
        for p in 0..=dim {
            if space.pairing_matrix(p)?.det().is_zero() {
                return bad(format!("degree pairing in codimension {p} is degenerate"));
            }
        }
        let top = space.degree(&space.omega_power(dim)?)?;
        if !top.is_positive() {
            return bad("polarization has non-positive top self-intersection".into());
        }
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn labels(&self, p: u32) -> &[String] {
        &self.labels[p as usize]
    }

    pub fn polarization(&self) -> &[Rat] {
        &self.polarization
    }

    /// The table entries as given, one per unordered pair.
    pub fn entries(&self) -> Vec<ProductEntry> {
        self.products.iter().filter(|((p, i, q, j), _)| (p, i) <= (q, j)).map(|(&(p, i, q, j), c)| ((p, i), (q, j), c.clone())).collect()
    }

    fn product(&self, p: u32, i: usize, q: u32, j: usize) -> Vec<Rat> {
        let n = self.labels[(p + q) as usize].len();
        if p == 0 {
            let mut v = vec![Rat::zero(); n];
            v[j] = Rat::one();
            return v;
        }
        if q == 0 {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            return v;
        }
        self.products.get(&(p, i, q, j)).cloned().unwrap_or_else(|| vec![Rat::zero(); n])
    }
}

/// Codimension-graded class in the monomial basis of `N^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleClass {
    space: Space,
    codim: u32,
    coeffs: Vec<Rat>,
}

impl CycleClass {
    pub fn new(space: &Space, codim: u32, coeffs: Vec<Rat>) -> Result<Self> {
        space.check_codim(codim)?;
        let n = space.basis_size(codim);
        if coeffs.len() != n {
            return Err(Error::InvalidArgument(format!("class in codimension {codim} needs {n} coefficients, got {}", coeffs.len())));
        }
        Ok(CycleClass { space: space.clone(), codim, coeffs })
    }

    pub fn zero(space: &Space, codim: u32) -> Result<Self> {
        space.check_codim(codim)?;
        Ok(CycleClass { space: space.clone(), codim, coeffs: vec![Rat::zero(); space.basis_size(codim)] })
    }

    /// The `i`-th basis class of `N^p`.
    pub fn basis(space: &Space, codim: u32, i: usize) -> Result<Self> {
        let mut c = CycleClass::zero(space, codim)?;
        c.coeffs[i] = Rat::one();
        Ok(c)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// All coefficients nonnegative; basis classes are effective on catalog spaces.
    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &CycleClass) -> Result<CycleClass> {
        self.same_slot(other)?;
        Ok(CycleClass {
            space: self.space.clone(),
            codim: self.codim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Rat) -> CycleClass {
        CycleClass { space: self.space.clone(), codim: self.codim, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn intersect(&self, other: &CycleClass) -> Result<CycleClass> {
        self.space.intersect(self, other)
    }

    pub fn degree(&self) -> Result<Rat> {
        self.space.degree(self)
    }

    pub fn norm_l1(&self) -> Result<Rat> {
        self.space.norm_l1(self)
    }

    /// Applies a pullback-style matrix: the result has coefficients `M * v`.
    pub fn apply(&self, m: &Matrix) -> CycleClass {
        CycleClass { space: self.space.clone(), codim: self.codim, coeffs: m.apply(&self.coeffs) }
    }

    fn same_slot(&self, other: &CycleClass) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: other.space.to_string() });
        }
        if self.codim != other.codim {
            return Err(Error::InvalidArgument(format!("codimension mismatch: {} vs {}", self.codim, other.codim)));
        }
        Ok(())
    }
}

impl Space {
    pub fn projective(k: u32) -> Space {
        if k == 0 {
            Space::Point
        } else {
            Space::Projective(k)
        }
    }

    /// Product of projective spaces; one factor gives `P^k`, positive dims only.
    pub fn product(dims: &[u32]) -> Result<Space> {
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("product factors must have positive dimension".into()));
        }
        Ok(match dims.len() {
            0 => Space::Point,
            1 => Space::Projective(dims[0]),
            _ => Space::Product(dims.to_vec()),
        })
    }

    pub fn dim(&self) -> u32 {
        match self {
            Space::Point => 0,
            Space::Projective(k) => *k,
            Space::Product(f) => f.iter().sum(),
            Space::Declared(r) => r.dim,
        }
    }

    /// Dimensions of the projective factors, `None` for declared spaces.
    pub fn factors(&self) -> Option<Vec<u32>> {
        match self {
            Space::Point => Some(Vec::new()),
            Space::Projective(k) => Some(vec![*k]),
            Space::Product(f) => Some(f.clone()),
            Space::Declared(_) => None,
        }
    }

    pub fn is_catalog(&self) -> bool {
        !matches!(self, Space::Declared(_))
    }

    pub fn check_codim(&self, p: u32) -> Result<()> {
        if p > self.dim() {
            return Err(Error::CodimensionOutOfRange { p, dim: self.dim() });
        }
        Ok(())
    }

    /// Exponent vectors of the monomial basis of `N^p`, `h_1` powers descending.
    pub fn monomials(&self, p: u32) -> Vec<Vec<u32>> {
        let f = self.factors().expect("monomial basis on a catalog space");
        let mut out = Vec::new();
        let mut cur = vec![0u32; f.len()];
        fill_monomials(&f, 0, p, &mut cur, &mut out);
        out
    }

    pub fn basis_size(&self, p: u32) -> usize {
        match self {
            Space::Declared(r) => r.labels.get(p as usize).map_or(0, |l| l.len()),
            _ => self.monomials(p).len(),
        }
    }

    pub fn basis_labels(&self, p: u32) -> Vec<String> {
        match self {
            Space::Declared(r) => r.labels[p as usize].clone(),
            Space::Projective(_) => {
                vec![match p {
                    0 => "1".into(),
                    1 => "H".into(),
                    _ => format!("H^{p}"),
                }]
            }
            _ => self.monomials(p).iter().map(|m| monomial_label(m)).collect(),
        }
    }

    pub fn unit(&self) -> CycleClass {
        CycleClass { space: self.clone(), codim: 0, coeffs: vec![Rat::one()] }
    }

    pub fn polarization(&self) -> Result<CycleClass> {
        self.check_codim(1)?;
        let coeffs = match self {
            Space::Declared(r) => r.polarization.clone(),
            _ => vec![Rat::one(); self.basis_size(1)],
        };
        CycleClass::new(self, 1, coeffs)
    }

    /// `omega^p` expanded in the monomial basis.
    pub fn omega_power(&self, p: u32) -> Result<CycleClass> {
        self.check_codim(p)?;
        if self.is_catalog() {
            // Multinomial coefficients p! / prod(a_i!).
            let coeffs = self.monomials(p).iter().map(|m| crate::arith::rat_from_uint(&crate::arith::multinomial(m))).collect();
            return CycleClass::new(self, p, coeffs);
        }
        let mut acc = self.unit();
        let w = self.polarization()?;
        for _ in 0..p {
            acc = self.intersect(&acc, &w)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, a: &CycleClass, b: &CycleClass) -> Result<CycleClass> {
        if &a.space != self || &b.space != self {
            let other = if &a.space != self { &a.space } else { &b.space };
            return Err(Error::SpaceMismatch { left: self.to_string(), right: other.to_string() });
        }
        let (p, q) = (a.codim, b.codim);
        if p + q > self.dim() {
            return Err(Error::CodimensionOverflow { p, q, dim: self.dim() });
        }
        let mut out = vec![Rat::zero(); self.basis_size(p + q)];
        match self {
            Space::Declared(r) => {
                for (i, x) in a.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let xy = x * y;
                        for (o, c) in out.iter_mut().zip(r.product(p, i, q, j)) {
                            *o += &xy * c;
                        }
                    }
                }
            }
            _ => {
                let f = self.factors().unwrap();
                let ma = self.monomials(p);
                let mb = self.monomials(q);
                let mo = self.monomials(p + q);
                for (i, x) in a.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let m: Vec<u32> = ma[i].iter().zip(&mb[j]).map(|(s, t)| s + t).collect();
                        if m.iter().zip(&f).any(|(e, k)| e > k) {
                            continue;
                        }
                        let idx = mo.iter().position(|n| n == &m).unwrap();
                        out[idx] += x * y;
                    }
                }
            }
        }
        Ok(CycleClass { space: self.clone(), codim: p + q, coeffs: out })
    }

    /// Pairing of a top-codimension class against the point class.
    pub fn degree(&self, a: &CycleClass) -> Result<Rat> {
        if a.codim != self.dim() {
            return Err(Error::NotTopCodimension { p: a.codim, dim: self.dim() });
        }
        Ok(a.coeffs[0].clone())
    }

    /// `sum_b |c_b| deg(b . omega^{k-p})` over the monomial basis.
    pub fn norm_l1(&self, v: &CycleClass) -> Result<Rat> {
        let p = v.codim;
        let w = self.omega_power(self.dim() - p)?;
        let mut total = Rat::zero();
        for (i, c) in v.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = CycleClass::basis(self, p, i)?;
            total += c.abs() * self.degree(&self.intersect(&b, &w)?)?;
        }
        Ok(total)
    }

    /// `G[i][j] = deg(b_i . b'_j)` for bases of `N^p` and `N^{k-p}`.
    pub fn pairing_matrix(&self, p: u32) -> Result<Matrix> {
        self.check_codim(p)?;
        let q = self.dim() - p;
        let n = self.basis_size(p);
        let m = self.basis_size(q);
        let mut g = Matrix::zeros(n, m);
        for i in 0..n {
            let bi = CycleClass::basis(self, p, i)?;
            for j in 0..m {
                let bj = CycleClass::basis(self, q, j)?;
                g.set(i, j, self.degree(&self.intersect(&bi, &bj)?)?);
            }
        }
        Ok(g)
    }

    /// `deg(omega^k)`.
    pub fn top_degree(&self) -> Rat {
        self.degree(&self.omega_power(self.dim()).expect("top power")).expect("top class")
    }

    /// Linear functional `v -> deg(v . omega^{k-p})` on `N^p` as a row.
    pub fn degree_row(&self, p: u32) -> Result<Vec<Rat>> {
        let w = self.omega_power(self.dim() - p)?;
        (0..self.basis_size(p)).map(|i| self.degree(&self.intersect(&CycleClass::basis(self, p, i)?, &w)?)).collect()
    }

    /// Linear functional `v -> deg(v . c)` on `N^p` for a fixed class `c`.
    pub fn pairing_row(&self, p: u32, c: &CycleClass) -> Result<Vec<Rat>> {
        (0..self.basis_size(p)).map(|i| self.degree(&self.intersect(&CycleClass::basis(self, p, i)?, c)?)).collect()
    }
}

fn fill_monomials(f: &[u32], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if idx == f.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let rest: u32 = f[idx + 1..].iter().sum();
    let hi = f[idx].min(left);
    for a in (0..=hi).rev() {
        if left - a > rest {
            continue;
        }
        cur[idx] = a;
        fill_monomials(f, idx + 1, left - a, cur, out);
    }
    cur[idx] = 0;
}

fn monomial_label(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("h{}", i + 1) } else { format!("h{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Point => write!(f, "point"),
            Space::Projective(k) => write!(f, "P{k}"),
            Space::Product(fs) => {
                for (i, k) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    write!(f, "P{k}")?;
                }
                Ok(())
            }
            Space::Declared(r) => write!(f, "{}", r.name),
        }
    }
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.space.basis_labels(self.codim);
        let mut first = true;
        for (c, l) in self.coeffs.iter().zip(&labels) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{c}*{l}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Convenience for tests and scenarios: the class `sum c_i b_i` from integers.
pub fn class_from_ints(space: &Space, p: u32, coeffs: &[i64]) -> Result<CycleClass> {
    CycleClass::new(space, p, coeffs.iter().map(|&c| rat(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1p1() -> Space {
        Space::product(&[1, 1]).unwrap()
    }

    #[test]
    fn monomial_bases() {
        let s = Space::product(&[2, 1]).unwrap();
        assert_eq!(s.monomials(1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(s.monomials(2), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(s.basis_labels(2), vec!["h1^2", "h1*h2"]);
        assert_eq!(Space::Point.basis_size(0), 1);
    }

    #[test]
    fn products_and_degrees() {
        let p2 = Space::projective(2);
        let h = p2.polarization().unwrap();
        let h2 = h.intersect(&h).unwrap();
        assert_eq!(h2.degree().unwrap(), rat(1));
        let s = p1p1();
        let h1 = class_from_ints(&s, 1, &[1, 0]).unwrap();
        assert!(h1.intersect(&h1).unwrap().is_zero());
        let w = s.polarization().unwrap();
        let w2 = w.intersect(&w).unwrap();
        assert_eq!(w2.coeffs(), &[rat(2)]);
        let t = Space::product(&[2, 1]).unwrap();
        assert_eq!(t.omega_power(3).unwrap().degree().unwrap(), rat(3));
        assert!(matches!(h2.intersect(&h), Err(Error::CodimensionOverflow { .. })));
        assert!(matches!(h.degree(), Err(Error::NotTopCodimension { .. })));
    }

    #[test]
    fn l1_norm() {
        let s = p1p1();
        let v = class_from_ints(&s, 1, &[3, -2]).unwrap();
        assert_eq!(v.norm_l1().unwrap(), rat(5));
        let p2 = Space::projective(2);
        assert_eq!(p2.polarization().unwrap().norm_l1().unwrap(), rat(1));
        assert_eq!(CycleClass::zero(&s, 1).unwrap().norm_l1().unwrap(), rat(0));
    }

    #[test]
    fn omega_powers() {
        assert_eq!(Space::projective(3).omega_power(2).unwrap().coeffs(), &[rat(1)]);
        assert_eq!(p1p1().omega_power(2).unwrap().coeffs(), &[rat(2)]);
        assert_eq!(Space::product(&[2, 1]).unwrap().omega_power(1).unwrap().coeffs(), &[rat(1), rat(1)]);
    }

    #[test]
    fn declared_ring_validation() {
        // P1 x P1 written as a table.
        let labels = vec![vec!["1".into()], vec!["a".into(), "b".into()], vec!["pt".into()]];
        let entries = vec![((1, 0), (1, 0), vec![rat(0)]), ((1, 0), (1, 1), vec![rat(1)]), ((1, 1), (1, 1), vec![rat(0)])];
        let ring = DeclaredRing::new("Q", 2, labels.clone(), entries, vec![rat(1), rat(1)]).unwrap();
        let s = Space::Declared(ring);
        assert_eq!(s.omega_power(2).unwrap().degree().unwrap(), rat(2));
        let degenerate = vec![((1, 0), (1, 0), vec![rat(1)]), ((1, 0), (1, 1), vec![rat(1)]), ((1, 1), (1, 1), vec![rat(1)])];
        let r = DeclaredRing::new("D", 2, labels.clone(), degenerate, vec![rat(1), rat(1)]);
        assert!(matches!(r, Err(Error::InvalidDeclaredRing(_))));
        let asym = vec![((1, 0), (1, 1), vec![rat(1)]), ((1, 1), (1, 0), vec![rat(2)])];
        assert!(DeclaredRing::new("A", 2, labels, asym, vec![rat(1), rat(1)]).is_err());
    }

    #[test]
    fn pairing_is_nondegenerate_on_catalog() {
        for s in [Space::projective(3), p1p1(), Space::product(&[2, 1]).unwrap(), Space::product(&[1, 1, 1]).unwrap()] {
            for p in 0..=s.dim() {
                assert!(!s.pairing_matrix(p).unwrap().det().is_zero());
            }
        }
    }
}
