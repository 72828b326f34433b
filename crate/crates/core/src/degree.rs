//! Degree sequences, dynamical degrees and their certificates.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebraic::AlgebraicReal;
use crate::arith::{rat_from_uint, Rat};
use crate::atom::{compose_atoms, Atom};
use crate::corr::{Correspondence, Settings};
use crate::error::{Error, Result};
use crate::growth;
use crate::matrix::SpectralRadius;
use crate::poly::Poly;

/// How the exact value (if any) was obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum Extraction {
    /// Every rule used was multiplicative, so the sequence obeys a linear
    /// recurrence; the value is its largest positive root.
    Recurrence { poly: Poly, order_bound: usize },
    /// Sum of a birational atom, its reverse and diagonal weights on a
    /// one-dimensional `N^p`: growth of the induced weighted walk.
    BirationalWalk,
    /// No exact argument applies; only the root sequence and the Fekete bound.
    Estimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub p: u32,
    /// `deg_p(F^n)` for `n = 1..=N`.
    pub sequence: Vec<BigUint>,
    /// Lower approximations of `deg_p(F^n)^(1/n)`.
    pub root_sequence: Vec<Rat>,
    pub exact: Option<AlgebraicReal>,
    pub extraction: Extraction,
    /// Last entry of the root sequence.
    pub estimate: Rat,
    /// `min_n (C deg_p(F^n))^(1/n)`, absent when submultiplicativity failed.
    pub fekete_upper: Option<Rat>,
    pub c_used: BigUint,
    /// Largest `s_(n+m) / (s_n s_m)` seen.
    pub max_ratio: Option<Rat>,
    pub converged: bool,
    pub stability_assertions: Vec<String>,
    pub notes: Vec<String>,
}

impl DegreeReport {
    pub fn lambda(&self) -> Option<&AlgebraicReal> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// What is known about a sequence beyond its values.
#[derive(Clone, Debug)]
pub enum GrowthHint {
    /// Linear recurrence of order at most this bound.
    Recurrence(usize),
    Walk(AlgebraicReal),
    None(String),
}

/// Builds a report from `seq` (which may extend past `n_report` to feed the
/// recurrence certificate).
pub fn analyze(p: u32, seq: Vec<BigUint>, n_report: usize, hint: GrowthHint, stability_assertions: Vec<String>) -> DegreeReport {
    let mut notes = Vec::new();
    let c_used = BigUint::one();
    let max_ratio = growth::max_submultiplicative_ratio(&seq);
    let submult = max_ratio.as_ref().is_some_and(|r| *r <= Rat::one());
    let fekete_upper = if submult || seq.len() < 2 {
        growth::fekete_upper(&seq, &c_used)
    } else {
        notes.push(format!(
            "submultiplicativity with C = 1 failed (ratio {}); no Fekete bound",
            max_ratio.as_ref().map(|r| r.to_string()).unwrap_or_default()
        ));
        None
    };
    let (exact, extraction) = match hint {
        GrowthHint::Recurrence(order_bound) => match growth::recurrence_growth(&seq, order_bound) {
            Some((lambda, poly)) => (Some(lambda), Extraction::Recurrence { poly, order_bound }),
            None => {
                notes.push(format!("recurrence needs {} terms, have {}", 2 * order_bound, seq.len()));
                (None, Extraction::Estimate)
            }
        },
        GrowthHint::Walk(l) => (Some(l), Extraction::BirationalWalk),
        GrowthHint::None(reason) => {
            notes.push(reason);
            (None, Extraction::Estimate)
        }
    };
    if let (Some(l), Some(f)) = (&exact, &fekete_upper) {
        if l.cmp_rational(f) == core::cmp::Ordering::Greater {
            notes.push(format!("exact value {l} exceeds the Fekete bound {f}"));
        }
    }
    let mut sequence = seq;
    sequence.truncate(n_report);
    let root_sequence = growth::root_sequence(&sequence);
    let estimate = root_sequence.last().cloned().unwrap_or_default();
    let converged = growth::converged(&root_sequence);
    DegreeReport {
        p,
        sequence,
        root_sequence,
        exact,
        extraction,
        estimate,
        fekete_upper,
        c_used,
        max_ratio,
        converged,
        stability_assertions,
        notes,
    }
}

/// Names of declared families whose iterates are taken as matrix powers.
pub fn stability_assertions(f: &Correspondence) -> Vec<String> {
    let mut names = BTreeSet::new();
    for (a, _) in f.terms() {
        collect_declared(a, &mut names);
    }
    names.into_iter().map(|n| format!("{n} is 1-stable: iterates act by matrix powers")).collect()
}

fn collect_declared(a: &Atom, out: &mut BTreeSet<String>) {
    match a {
        Atom::Declared { family, .. } => {
            out.insert(family.name().to_string());
        }
        Atom::Product(fs) => fs.iter().for_each(|f| collect_declared(f, out)),
        _ => {}
    }
}

pub fn degree_sequence(f: &Correspondence, p: u32, n: u32, settings: &Settings) -> Result<Vec<BigUint>> {
    f.space().check_codim(p)?;
    let (its, _) = f.iterates(n, settings)?;
    its.iter().map(|g| g.deg_p(p)).collect()
}

/// Iterates of `F` shared between all codimensions.
pub struct IterateTable {
    f: Correspondence,
    iterates: Vec<Correspondence>,
    multiplicative: bool,
}

impl IterateTable {
    /// Enough iterates for `n` reported terms and every recurrence certificate.
    pub fn new(f: &Correspondence, n: u32, settings: &Settings) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one iterate".into()));
        }
        let space = f.space();
        let need = (0..=space.dim()).map(|p| 2 * space.basis_size(p) as u32).max().unwrap_or(1);
        let (iterates, stats) = f.iterates(n.max(need), settings)?;
        Ok(IterateTable { f: f.clone(), iterates, multiplicative: stats.multiplicative })
    }

    pub fn iterates(&self) -> &[Correspondence] {
        &self.iterates
    }

    pub fn multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn report(&self, p: u32, n: u32) -> Result<DegreeReport> {
        let space = self.f.space();
        space.check_codim(p)?;
        let seq = self.iterates.iter().map(|g| g.deg_p(p)).collect::<Result<Vec<_>>>()?;
        let hint = if self.multiplicative {
            GrowthHint::Recurrence(space.basis_size(p))
        } else if let Some(w) = birational_walk(&self.f, p)? {
            GrowthHint::Walk(w)
        } else {
            GrowthHint::None("non-multiplicative rules without a closed form: estimate only".into())
        };
        Ok(analyze(p, seq, n as usize, hint, stability_assertions(&self.f)))
    }
}

pub fn dyn_degree(f: &Correspondence, p: u32, n: u32, settings: &Settings) -> Result<DegreeReport> {
    IterateTable::new(f, n, settings)?.report(p, n)
}

/// Reports for every codimension `0..=dim`.
pub fn dyn_degrees(f: &Correspondence, n: u32, settings: &Settings) -> Result<Vec<DegreeReport>> {
    let t = IterateTable::new(f, n, settings)?;
    (0..=f.dim()).map(|p| t.report(p, n)).collect()
}

/// `F = a b + a' rev(b) + c diag` with `b` birational and `N^p` of rank one.
fn birational_walk(f: &Correspondence, p: u32) -> Result<Option<AlgebraicReal>> {
    if f.space().basis_size(p) != 1 {
        return Ok(None);
    }
    let mut family = None;
    let (mut up, mut down, mut stay) = (BigUint::default(), BigUint::default(), BigUint::default());
    for (a, c) in f.terms() {
        if let Some(w) = a.diagonal_weight() {
            stay += c * w;
            continue;
        }
        let Atom::Declared { family: fam, reversed, power: 1 } = a else {
            return Ok(None);
        };
        if !fam.is_birational() || family.as_ref().is_some_and(|g| g != fam) {
            return Ok(None);
        }
        family = Some(fam.clone());
        if *reversed {
            down += c;
        } else {
            up += c;
        }
    }
    let Some(fam) = family else {
        return Ok(None);
    };
    let mu = Atom::declared(&fam).pullback_matrix(p)?.get(0, 0).clone();
    let nu = Atom::declared(&fam).reverse()?.pullback_matrix(p)?.get(0, 0).clone();
    Ok(Some(growth::walk_growth(&up, &down, &stay, &mu, &nu)))
}

/// Spectral radius of `sum a_w M_p(w)`; requires every pair of terms to
/// compose by a multiplicative rule.
pub fn dyn_degree_via_norm(f: &Correspondence, p: u32, settings: &Settings) -> Result<SpectralRadius> {
    f.space().check_codim(p)?;
    for (a, _) in f.terms() {
        for (b, _) in f.terms() {
            let c = compose_atoms(a, b, settings.characteristic).map_err(|e| Error::StabilityNotDeclared(format!("{a} after {b}: {e}")))?;
            if !c.multiplicative {
                return Err(Error::StabilityNotDeclared(format!("{a} after {b} does not act as the matrix product")));
            }
        }
    }
    Ok(f.pullback_matrix(p)?.spectral_radius())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmultReport {
    pub p: u32,
    pub sequence: Vec<BigUint>,
    pub c: BigUint,
    pub max_ratio: Option<Rat>,
    pub holds: bool,
}

/// `deg_p(F^(n+m)) <= C deg_p(F^n) deg_p(F^m)` for `n + m <= N`, `C = 1`.
pub fn check_submultiplicative(f: &Correspondence, p: u32, n: u32, settings: &Settings) -> Result<SubmultReport> {
    let sequence = degree_sequence(f, p, n, settings)?;
    let c = BigUint::one();
    let max_ratio = growth::max_submultiplicative_ratio(&sequence);
    let holds = max_ratio.as_ref().is_none_or(|r| *r <= rat_from_uint(&c));
    Ok(SubmultReport { p, sequence, c, max_ratio, holds })
}

/// Pullback-side and pushforward-side degrees agree.
pub fn dual_degree_check(f: &Correspondence, p: u32) -> Result<(BigUint, BigUint, bool)> {
    let a = f.deg_p(p)?;
    let b = f.deg_p_dual(p)?;
    let ok = a == b;
    Ok((a, b, ok))
}
