//! Semi-conjugacies onto factors of products and relative degree growth.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rat;
use crate::atom::Atom;
use crate::corr::{to_uint, Correspondence, Settings, Strategy};
use crate::degree::{analyze, stability_assertions, DegreeReport, GrowthHint, IterateTable};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{CycleClass, Space};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Projection of a product onto the listed factors (0-based, increasing).
    Factors(Vec<usize>),
    /// User-declared class pullbacks `N^q(Y) -> N^q(X)` for `q = 0..=dim Y`.
    Declared(Vec<Matrix>),
}

/// `pi o f = a (g o pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiConjugacy {
    x: Space,
    y: Space,
    projection: Projection,
    f: Correspondence,
    g: Correspondence,
    multiplier: BigUint,
    verified: bool,
}

/// Multiplier and image on `Y` of one atom under projection to `keep`.
fn project_atom(a: &Atom, dims: &[u32], keep: &[usize]) -> Result<(BigUint, Atom)> {
    let factors = a
        .factors()
        .filter(|fs| fs.len() == dims.len())
        .ok_or_else(|| Error::NotSemiConjugate(format!("{a} does not split along the factors")))?;
    let mut mult = BigUint::one();
    let mut kept = Vec::new();
    for (i, f) in factors.into_iter().enumerate() {
        if keep.contains(&i) {
            kept.push(f);
        } else {
            mult *= f.sheets();
        }
    }
    let image = if kept.is_empty() { Atom::diag(&Space::Point) } else { Atom::product(kept)? };
    Ok((mult, image))
}

/// `sum_t c_t m_t kept_t`, the full image `pi o f` expressed on `Y`.
pub fn project_correspondence(f: &Correspondence, keep: &[usize]) -> Result<Correspondence> {
    let dims = f.space().factors().ok_or_else(|| Error::NotSemiConjugate("projection needs a product of projective spaces".into()))?;
    let y = target_space(&dims, keep)?;
    let mut items = Vec::new();
    for (a, c) in f.terms() {
        let (m, img) = project_atom(a, &dims, keep)?;
        items.push((c * m, img));
    }
    Correspondence::from_terms(&y, items)
}

fn target_space(dims: &[u32], keep: &[usize]) -> Result<Space> {
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&i| i >= dims.len()) {
        return Err(Error::InvalidArgument(format!("bad factor list {keep:?} for {} factors", dims.len())));
    }
    Space::product(&keep.iter().map(|&i| dims[i]).collect::<Vec<_>>())
}

/// Largest `a` with `full = a * g`, if any.
fn quotient(full: &Correspondence, g: &Correspondence) -> Option<BigUint> {
    if full.len() != g.len() {
        return None;
    }
    let mut a: Option<BigUint> = None;
    for (atom, c) in full.terms() {
        let d = g.coefficient(atom);
        if d.is_zero() || !(c % &d).is_zero() {
            return None;
        }
        let q = c / &d;
        if a.as_ref().is_some_and(|a| *a != q) {
            return None;
        }
        a = Some(q);
    }
    a
}

impl SemiConjugacy {
    /// Projection onto the factors `keep` with `g` synthesized from the
    /// kept factors and `a` the gcd of the resulting coefficients.
    pub fn projection(f: &Correspondence, keep: &[usize]) -> Result<Self> {
        let full = project_correspondence(f, keep)?;
        let a = full.terms().fold(BigUint::zero(), |acc, (_, c)| acc.gcd(c));
        let items = full.terms().map(|(t, c)| (c / &a, t.clone())).collect();
        let g = Correspondence::from_terms(full.space(), items)?;
        Ok(SemiConjugacy {
            x: f.space().clone(),
            y: full.space().clone(),
            projection: Projection::Factors(keep.to_vec()),
            f: f.clone(),
            g,
            multiplier: a,
            verified: true,
        })
    }

    /// Projection with a prescribed `g`; fails unless `pi o f = a (g o pi)`.
    pub fn projection_onto(f: &Correspondence, keep: &[usize], g: &Correspondence) -> Result<Self> {
        let full = project_correspondence(f, keep)?;
        if full.space() != g.space() {
            return Err(Error::SpaceMismatch { left: full.space().to_string(), right: g.space().to_string() });
        }
        let a = quotient(&full, g).ok_or_else(|| Error::NotSemiConjugate(format!("projection of f is {full}, not a multiple of {g}")))?;
        Ok(SemiConjugacy {
            x: f.space().clone(),
            y: g.space().clone(),
            projection: Projection::Factors(keep.to_vec()),
            f: f.clone(),
            g: g.clone(),
            multiplier: a,
            verified: true,
        })
    }

    /// Semi-conjugacy with user-supplied class pullbacks; never verified.
    pub fn declared(f: &Correspondence, g: &Correspondence, pullbacks: Vec<Matrix>, multiplier: BigUint) -> Result<Self> {
        let (x, y) = (f.space(), g.space());
        if y.dim() > x.dim() || pullbacks.len() != y.dim() as usize + 1 {
            return Err(Error::InvalidArgument("need one pullback matrix per codimension of Y".into()));
        }
        for (q, m) in pullbacks.iter().enumerate() {
            let q = q as u32;
            if m.rows() != x.basis_size(q) || m.cols() != y.basis_size(q) || !m.is_nonnegative() || !m.is_integral() {
                return Err(Error::InvalidArgument(format!("bad pullback matrix in codimension {q}")));
            }
        }
        Ok(SemiConjugacy {
            x: x.clone(),
            y: y.clone(),
            projection: Projection::Declared(pullbacks),
            f: f.clone(),
            g: g.clone(),
            multiplier,
            verified: false,
        })
    }

    pub fn x(&self) -> &Space {
        &self.x
    }

    pub fn y(&self) -> &Space {
        &self.y
    }

    pub fn f(&self) -> &Correspondence {
        &self.f
    }

    pub fn g(&self) -> &Correspondence {
        &self.g
    }

    pub fn multiplier(&self) -> &BigUint {
        &self.multiplier
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn projection_kind(&self) -> &Projection {
        &self.projection
    }

    /// `dim X - dim Y`, the top relative codimension.
    pub fn relative_dim(&self) -> u32 {
        self.x.dim() - self.y.dim()
    }

    /// `pi^*` on a class of `Y`.
    pub fn pullback_from_base(&self, c: &CycleClass) -> Result<CycleClass> {
        let q = c.codim();
        match &self.projection {
            Projection::Declared(ms) => CycleClass::new(&self.x, q, ms[q as usize].apply(c.coeffs())),
            Projection::Factors(keep) => {
                let dims = self.x.factors().expect("catalog space");
                let ymons = self.y.monomials(q);
                let xmons = self.x.monomials(q);
                let mut coeffs = vec![Rat::zero(); xmons.len()];
                for (j, ym) in ymons.iter().enumerate() {
                    let mut e = vec![0u32; dims.len()];
                    for (slot, &i) in keep.iter().enumerate() {
                        e[i] = ym[slot];
                    }
                    let i = xmons.iter().position(|m| *m == e).expect("monomial present");
                    coeffs[i] += &c.coeffs()[j];
                }
                CycleClass::new(&self.x, q, coeffs)
            }
        }
    }

    /// Row `r` with `r . v = deg(v . pi^*(omega_Y^l) . omega_X^{k-l-p})`.
    fn relative_row(&self, p: u32) -> Result<Vec<Rat>> {
        let (k, l) = (self.x.dim(), self.y.dim());
        if p > k - l {
            return Err(Error::RelativeRange { p, max: k - l });
        }
        let fiber = self.pullback_from_base(&self.y.omega_power(l)?)?;
        let c = self.x.intersect(&fiber, &self.x.omega_power(k - l - p)?)?;
        self.x.pairing_row(p, &c)
    }

    /// `deg((F)^*(omega^p) . pi^*(omega_Y^l) . omega^{k-l-p})` for a
    /// correspondence `F` on `X`.
    pub fn relative_degree_of(&self, f: &Correspondence, p: u32) -> Result<BigUint> {
        let row = self.relative_row(p)?;
        let v = f.pullback_class(&self.x.omega_power(p)?)?;
        let d: Rat = row.iter().zip(v.coeffs()).map(|(a, b)| a * b).sum();
        to_uint(&d)
    }

    pub fn relative_degree_sequence(&self, p: u32, n: u32, settings: &Settings) -> Result<Vec<BigUint>> {
        self.relative_row(p)?;
        let (its, _) = self.f.iterates(n, settings)?;
        its.iter().map(|g| self.relative_degree_of(g, p)).collect()
    }

    pub fn rel_dyn_degree(&self, p: u32, n: u32, settings: &Settings) -> Result<DegreeReport> {
        let table = IterateTable::new(&self.f, n, settings)?;
        self.report_from(&table, p, n)
    }

    /// Reports for `p = 0..=dim X - dim Y`.
    pub fn rel_dyn_degrees(&self, n: u32, settings: &Settings) -> Result<Vec<DegreeReport>> {
        let table = IterateTable::new(&self.f, n, settings)?;
        (0..=self.relative_dim()).map(|p| self.report_from(&table, p, n)).collect()
    }

    pub fn report_from(&self, table: &IterateTable, p: u32, n: u32) -> Result<DegreeReport> {
        if self.y.dim() == 0 {
            return table.report(p, n);
        }
        let seq = table.iterates().iter().map(|g| self.relative_degree_of(g, p)).collect::<Result<Vec<_>>>()?;
        let hint = if table.multiplicative() {
            GrowthHint::Recurrence(self.x.basis_size(p))
        } else {
            GrowthHint::None("non-multiplicative rules: relative estimate only".into())
        };
        let mut r = analyze(p, seq, n as usize, hint, stability_assertions(&self.f));
        if !self.verified {
            r.notes.push("semi-conjugacy declared, not verified".into());
        }
        Ok(r)
    }

    /// For each `n <= n_max`: whether `pi o f^n = a^n (g^n o pi)` holds.
    pub fn persistence(&self, n_max: u32, settings: &Settings) -> Result<Vec<(u32, bool)>> {
        let Projection::Factors(keep) = &self.projection else {
            return Err(Error::NotSemiConjugate("declared projections cannot be re-verified".into()));
        };
        let (fs, _) = self.f.iterates(n_max, settings)?;
        let (gs, _) = self.g.iterates(n_max, settings)?;
        let mut out = Vec::new();
        let mut an = BigUint::one();
        for (i, (fnn, gn)) in fs.iter().zip(&gs).enumerate() {
            an *= &self.multiplier;
            let lhs = project_correspondence(fnn, keep)?;
            out.push((i as u32 + 1, lhs == gn.scale(&an)?));
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        let proj = match &self.projection {
            Projection::Factors(k) => {
                let idx: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
                format!("proj({} -> factor {})", self.x, idx.join(","))
            }
            Projection::Declared(_) => format!("declared({} -> {})", self.x, self.y),
        };
        format!("{proj}: f = {}, g = {}, a = {}", self.f, self.g, self.multiplier)
    }
}

/// Projection of the iterate `f^n` computed by word expansion.
pub fn project_iterate(f: &Correspondence, keep: &[usize], n: u32, settings: &Settings) -> Result<Correspondence> {
    project_correspondence(&f.iterate(n, Strategy::WordExpansion, settings)?, keep)
}
