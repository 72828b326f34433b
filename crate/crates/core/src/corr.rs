//! Formal nonnegative combinations of atoms and their iterates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{multinomial, rat_from_uint, rat_to_uint, uint_pow, Rat};
use crate::atom::{compose_atoms, Atom};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{CycleClass, Space};

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Global parameters shared by every engine call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// 0 or a prime; only gates rewrite rules that count fibers.
    pub characteristic: u32,
    pub max_terms: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { characteristic: 0, max_terms: DEFAULT_MAX_TERMS }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    WordExpansion,
    CommutingMultinomial,
}

/// Bookkeeping collected while normalizing composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposeStats {
    /// Every rule applied agreed with matrix multiplication.
    pub multiplicative: bool,
}

impl Default for ComposeStats {
    fn default() -> Self {
        ComposeStats { multiplicative: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    space: Space,
    terms: BTreeMap<Atom, BigUint>,
}

impl Correspondence {
    pub fn atom(a: Atom) -> Self {
        Correspondence::term(BigUint::one(), a)
    }

    pub fn term(coef: BigUint, a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        let space = a.space();
        if !coef.is_zero() {
            terms.insert(a, coef);
        }
        Correspondence { space, terms }
    }

    pub fn from_terms(space: &Space, items: Vec<(BigUint, Atom)>) -> Result<Self> {
        let mut out = Correspondence { space: space.clone(), terms: BTreeMap::new() };
        for (c, a) in items {
            out.push(c, a)?;
        }
        out.check_nonempty()?;
        Ok(out)
    }

    fn push(&mut self, coef: BigUint, a: Atom) -> Result<()> {
        if a.space() != self.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: a.space().to_string() });
        }
        if coef.is_zero() {
            return Ok(());
        }
        *self.terms.entry(a).or_insert_with(BigUint::zero) += coef;
        Ok(())
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.terms.is_empty() {
            Err(Error::EmptyCorrespondence)
        } else {
            Ok(())
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> u32 {
        self.space.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &BigUint)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &Atom) -> BigUint {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// A single term `d * atom`, the shape of an irreducible iterate.
    pub fn single_term(&self) -> Option<(&Atom, &BigUint)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn total_coefficient(&self) -> BigUint {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Correspondence) -> Result<Correspondence> {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.push(c.clone(), a.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, a: &BigUint) -> Result<Correspondence> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("scale factor must be at least 1".into()));
        }
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c * a)).collect();
        Ok(Correspondence { space: self.space.clone(), terms })
    }

    pub fn reverse(&self) -> Result<Correspondence> {
        let mut out = Correspondence { space: self.space.clone(), terms: BTreeMap::new() };
        for (a, c) in &self.terms {
            out.push(c.clone(), a.reverse()?)?;
        }
        Ok(out)
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Correspondence, settings: &Settings) -> Result<Correspondence> {
        self.compose_tracked(other, settings, &mut ComposeStats::default())
    }

    pub fn compose_tracked(&self, other: &Correspondence, settings: &Settings, stats: &mut ComposeStats) -> Result<Correspondence> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: other.space.to_string() });
        }
        let mut out = Correspondence { space: self.space.clone(), terms: BTreeMap::new() };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = compose_atoms(a, b, settings.characteristic)?;
                stats.multiplicative &= c.multiplicative;
                out.push(ca * cb * c.coef, c.atom)?;
            }
            if out.terms.len() > settings.max_terms {
                return Err(Error::TermBlowup { count: out.terms.len(), cap: settings.max_terms });
            }
        }
        out.check_nonempty()?;
        Ok(out)
    }

    pub fn iterate(&self, n: u32, strategy: Strategy, settings: &Settings) -> Result<Correspondence> {
        Ok(self.iterate_tracked(n, strategy, settings)?.0)
    }

    pub fn iterate_tracked(&self, n: u32, strategy: Strategy, settings: &Settings) -> Result<(Correspondence, ComposeStats)> {
        if n == 0 {
            return Err(Error::InvalidArgument("iterate needs n >= 1".into()));
        }
        let mut stats = ComposeStats::default();
        let out = match strategy {
            Strategy::WordExpansion => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.compose_tracked(self, settings, &mut stats)?;
                }
                acc
            }
            Strategy::CommutingMultinomial => self.multinomial_power(n, settings, &mut stats)?,
        };
        Ok((out, stats))
    }

    /// All iterates `F^1..=F^n` by successive word expansion.
    pub fn iterates(&self, n: u32, settings: &Settings) -> Result<(Vec<Correspondence>, ComposeStats)> {
        let mut stats = ComposeStats::default();
        let mut out = Vec::with_capacity(n as usize);
        if n == 0 {
            return Ok((out, stats));
        }
        out.push(self.clone());
        for _ in 1..n {
            let next = out.last().unwrap().compose_tracked(self, settings, &mut stats)?;
            out.push(next);
        }
        Ok((out, stats))
    }

    fn multinomial_power(&self, n: u32, settings: &Settings, stats: &mut ComposeStats) -> Result<Correspondence> {
        self.check_nonempty()?;
        let items: Vec<(&Atom, &BigUint)> = self.terms.iter().collect();
        for (i, (a, _)) in items.iter().enumerate() {
            for (b, _) in &items[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::NotCommuting { left: a.to_string(), right: b.to_string() });
                }
            }
        }
        // powers[i][e] = normalized a_i^e
        let mut powers: Vec<Vec<(BigUint, Atom)>> = Vec::with_capacity(items.len());
        for (a, _) in &items {
            let mut row = Vec::with_capacity(n as usize + 1);
            row.push((BigUint::one(), Atom::diag(&self.space)));
            for e in 1..=n as usize {
                let (c, prev) = &row[e - 1];
                let step = compose_atoms(prev, a, settings.characteristic)?;
                stats.multiplicative &= step.multiplicative;
                row.push((c * step.coef, step.atom));
            }
            powers.push(row);
        }
        let mut out = Correspondence { space: self.space.clone(), terms: BTreeMap::new() };
        let mut exps = Vec::with_capacity(items.len());
        self.multinomial_rec(&items, &powers, n, &mut exps, settings, stats, &mut out)?;
        out.check_nonempty()?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn multinomial_rec(
        &self,
        items: &[(&Atom, &BigUint)],
        powers: &[Vec<(BigUint, Atom)>],
        left: u32,
        exps: &mut Vec<u32>,
        settings: &Settings,
        stats: &mut ComposeStats,
        out: &mut Correspondence,
    ) -> Result<()> {
        let i = exps.len();
        if i + 1 == items.len() {
            exps.push(left);
            let mut coef = multinomial(exps);
            let mut atom = Atom::diag(&self.space);
            for (j, &e) in exps.iter().enumerate() {
                coef *= uint_pow(items[j].1, e);
                let (pc, pa) = &powers[j][e as usize];
                let c = compose_atoms(&atom, pa, settings.characteristic)?;
                stats.multiplicative &= c.multiplicative;
                coef *= pc * c.coef;
                atom = c.atom;
            }
            exps.pop();
            out.push(coef, atom)?;
            if out.terms.len() > settings.max_terms {
                return Err(Error::TermBlowup { count: out.terms.len(), cap: settings.max_terms });
            }
            return Ok(());
        }
        for e in 0..=left {
            exps.push(e);
            self.multinomial_rec(items, powers, left - e, exps, settings, stats, out)?;
            exps.pop();
        }
        Ok(())
    }

    /// `sum a_w M_p(w)`.
    pub fn pullback_matrix(&self, p: u32) -> Result<Matrix> {
        self.space.check_codim(p)?;
        let n = self.space.basis_size(p);
        let mut m = Matrix::zeros(n, n);
        for (a, c) in &self.terms {
            m = m.add(&a.pullback_matrix(p)?.scale(&rat_from_uint(c)));
        }
        Ok(m)
    }

    pub fn pushforward_matrix(&self, q: u32) -> Result<Matrix> {
        self.space.check_codim(q)?;
        let n = self.space.basis_size(q);
        let mut m = Matrix::zeros(n, n);
        for (a, c) in &self.terms {
            m = m.add(&a.pushforward_matrix(q)?.scale(&rat_from_uint(c)));
        }
        Ok(m)
    }

    pub fn pullback_class(&self, alpha: &CycleClass) -> Result<CycleClass> {
        self.check_class(alpha)?;
        Ok(alpha.apply(&self.pullback_matrix(alpha.codim())?))
    }

    pub fn pushforward_class(&self, beta: &CycleClass) -> Result<CycleClass> {
        self.check_class(beta)?;
        Ok(beta.apply(&self.pushforward_matrix(beta.codim())?))
    }

    fn check_class(&self, c: &CycleClass) -> Result<()> {
        if *c.space() != self.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: c.space().to_string() });
        }
        Ok(())
    }

    /// `deg(F^*(omega^p) . omega^{k-p})`.
    pub fn deg_p(&self, p: u32) -> Result<BigUint> {
        let k = self.dim();
        self.space.check_codim(p)?;
        let pulled = self.pullback_class(&self.space.omega_power(p)?)?;
        let d = self.space.degree(&self.space.intersect(&pulled, &self.space.omega_power(k - p)?)?)?;
        to_uint(&d)
    }

    /// `deg(omega^p . F_*(omega^{k-p}))`, the pushforward-side degree.
    pub fn deg_p_dual(&self, p: u32) -> Result<BigUint> {
        let k = self.dim();
        self.space.check_codim(p)?;
        let pushed = self.pushforward_class(&self.space.omega_power(k - p)?)?;
        let d = self.space.degree(&self.space.intersect(&self.space.omega_power(p)?, &pushed)?)?;
        to_uint(&d)
    }
}

pub(crate) fn to_uint(d: &Rat) -> Result<BigUint> {
    rat_to_uint(d).ok_or_else(|| Error::InvalidArgument(format!("non-integral degree {d}")))
}

impl fmt::Display for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{c}*{a}")?;
            }
        }
        Ok(())
    }
}
