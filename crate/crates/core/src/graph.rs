//! Correspondences on reducible varieties: weighted edges between
//! irreducible components, iterated along composable paths.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::atom::{compose_atoms, Atom};
use crate::corr::{ComposeStats, Correspondence, Settings};
use crate::degree::{analyze, DegreeReport, GrowthHint};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relative::{project_correspondence, SemiConjugacy};
use crate::ring::Space;

/// `coef * atom` from component `from` to component `to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub atom: Atom,
    pub coef: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGraph {
    components: Vec<Space>,
    edges: Vec<Edge>,
}

/// One composable path of edges (indices into the base graph, in the
/// order they are applied) with its normalized composite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTerm {
    pub edges: Vec<usize>,
    pub from: usize,
    pub to: usize,
    pub coef: BigUint,
    pub atom: Atom,
}

impl ComponentGraph {
    /// Validates equal dimensions, edge spaces and dominance (every
    /// component is a source and a target).
    pub fn new(components: Vec<Space>, edges: Vec<Edge>) -> Result<Self> {
        let g = ComponentGraph { components, edges };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let Some(first) = self.components.first() else {
            return Err(Error::InvalidGraph("no components".into()));
        };
        if self.components.iter().any(|c| c.dim() != first.dim()) {
            return Err(Error::InvalidGraph("components must have equal dimension".into()));
        }
        let n = self.components.len();
        let mut src = vec![false; n];
        let mut dst = vec![false; n];
        for e in &self.edges {
            if e.from >= n || e.to >= n {
                return Err(Error::InvalidGraph(format!("edge {}->{} out of range", e.from + 1, e.to + 1)));
            }
            if e.coef.is_zero() {
                return Err(Error::InvalidGraph("edge coefficients must be positive".into()));
            }
            let s = e.atom.space();
            if s != self.components[e.from] || s != self.components[e.to] {
                return Err(Error::InvalidGraph(format!(
                    "edge {}->{} carries {} on {s}, which must equal both component spaces",
                    e.from + 1,
                    e.to + 1,
                    e.atom
                )));
            }
            src[e.from] = true;
            dst[e.to] = true;
        }
        if let Some(i) = (0..n).find(|&i| !src[i] || !dst[i]) {
            return Err(Error::InvalidGraph(format!("component {} is not both a source and a target", i + 1)));
        }
        Ok(())
    }

    /// Disjoint union of correspondences, one self-loop family per component.
    pub fn disjoint(parts: &[Correspondence]) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, f) in parts.iter().enumerate() {
            for (a, c) in f.terms() {
                edges.push(Edge { from: i, to: i, atom: a.clone(), coef: c.clone() });
            }
        }
        ComponentGraph::new(parts.iter().map(|f| f.space().clone()).collect(), edges)
    }

    pub fn components(&self) -> &[Space] {
        &self.components
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn dim(&self) -> u32 {
        self.components[0].dim()
    }

    /// Edge counts (ignoring coefficients) between components.
    pub fn adjacency(&self) -> Matrix {
        let n = self.components.len();
        let mut m = Matrix::zeros(n, n);
        for e in &self.edges {
            let v = m.get(e.from, e.to) + crate::arith::rat(1);
            m.set(e.from, e.to, v);
        }
        m
    }

    /// Every composable path of `n` edges, without merging.
    pub fn expand_paths(&self, n: u32, settings: &Settings) -> Result<Vec<PathTerm>> {
        let mut out: Vec<PathTerm> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| PathTerm { edges: vec![i], from: e.from, to: e.to, coef: e.coef.clone(), atom: e.atom.clone() })
            .collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for t in &out {
                for (i, e) in self.edges.iter().enumerate().filter(|(_, e)| e.from == t.to) {
                    let c = compose_atoms(&e.atom, &t.atom, settings.characteristic).map_err(|err| path_err(t, i, err))?;
                    let mut edges = t.edges.clone();
                    edges.push(i);
                    next.push(PathTerm { edges, from: t.from, to: e.to, coef: &t.coef * &e.coef * c.coef, atom: c.atom });
                }
                if next.len() > settings.max_terms {
                    return Err(Error::TermBlowup { count: next.len(), cap: settings.max_terms });
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// `F^n` with equal `(from, to, atom)` terms merged.
    pub fn iterate(&self, n: u32, settings: &Settings) -> Result<ComponentGraph> {
        Ok(self.iterates(n, settings)?.0.pop().expect("n >= 1"))
    }

    /// `F^1..=F^n` and whether every rule used was multiplicative.
    pub fn iterates(&self, n: u32, settings: &Settings) -> Result<(Vec<ComponentGraph>, ComposeStats)> {
        if n == 0 {
            return Err(Error::InvalidArgument("iterate needs n >= 1".into()));
        }
        let mut stats = ComposeStats::default();
        let mut out = vec![self.merged()];
        for _ in 1..n {
            let prev = out.last().unwrap();
            let mut acc: BTreeMap<(usize, usize, Atom), BigUint> = BTreeMap::new();
            for t in &prev.edges {
                for e in self.edges.iter().filter(|e| e.from == t.to) {
                    let c = compose_atoms(&e.atom, &t.atom, settings.characteristic).map_err(|err| Error::UndeclaredComposition {
                        left: e.atom.to_string(),
                        right: t.atom.to_string(),
                        reason: format!("on path {}->{}->{}: {err}", t.from + 1, t.to + 1, e.to + 1),
                    })?;
                    stats.multiplicative &= c.multiplicative;
                    *acc.entry((t.from, e.to, c.atom)).or_insert_with(BigUint::zero) += &t.coef * &e.coef * c.coef;
                }
                if acc.len() > settings.max_terms {
                    return Err(Error::TermBlowup { count: acc.len(), cap: settings.max_terms });
                }
            }
            let edges = acc.into_iter().map(|((from, to, atom), coef)| Edge { from, to, atom, coef }).collect();
            out.push(ComponentGraph { components: self.components.clone(), edges });
        }
        Ok((out, stats))
    }

    fn merged(&self) -> ComponentGraph {
        let mut acc: BTreeMap<(usize, usize, Atom), BigUint> = BTreeMap::new();
        for e in &self.edges {
            *acc.entry((e.from, e.to, e.atom.clone())).or_insert_with(BigUint::zero) += &e.coef;
        }
        let edges = acc.into_iter().map(|((from, to, atom), coef)| Edge { from, to, atom, coef }).collect();
        ComponentGraph { components: self.components.clone(), edges }
    }

    /// Total degree `sum coef * deg_p(atom)`.
    pub fn deg_p(&self, p: u32) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for e in &self.edges {
            total += &e.coef * e.atom.deg_p(p)?;
        }
        Ok(total)
    }

    pub fn degree_sequence(&self, p: u32, n: u32, settings: &Settings) -> Result<Vec<BigUint>> {
        self.components[0].check_codim(p)?;
        let (its, _) = self.iterates(n, settings)?;
        its.iter().map(|g| g.deg_p(p)).collect()
    }

    /// Growth of the total degrees; the recurrence bound is the sum of the
    /// ranks of `N^p` over the components.
    pub fn dyn_degree(&self, p: u32, n: u32, settings: &Settings) -> Result<DegreeReport> {
        Ok(self.dyn_degrees_in(&[p], n, settings)?.remove(0))
    }

    pub fn dyn_degrees(&self, n: u32, settings: &Settings) -> Result<Vec<DegreeReport>> {
        let ps: Vec<u32> = (0..=self.dim()).collect();
        self.dyn_degrees_in(&ps, n, settings)
    }

    fn dyn_degrees_in(&self, ps: &[u32], n: u32, settings: &Settings) -> Result<Vec<DegreeReport>> {
        let bound = |p: u32| self.components.iter().map(|c| c.basis_size(p)).sum::<usize>();
        let need = ps.iter().map(|&p| 2 * bound(p) as u32).max().unwrap_or(1);
        let (its, stats) = self.iterates(n.max(need), settings)?;
        ps.iter()
            .map(|&p| {
                self.components[0].check_codim(p)?;
                let seq = its.iter().map(|g| g.deg_p(p)).collect::<Result<Vec<_>>>()?;
                let hint = if stats.multiplicative {
                    GrowthHint::Recurrence(bound(p))
                } else {
                    GrowthHint::None("non-multiplicative rules on the graph: estimate only".into())
                };
                Ok(analyze(p, seq, n as usize, hint, Vec::new()))
            })
            .collect()
    }
}

fn path_err(t: &PathTerm, edge: usize, err: Error) -> Error {
    let mut path: Vec<String> = t.edges.iter().map(|i| (i + 1).to_string()).collect();
    path.push((edge + 1).to_string());
    Error::InvalidGraph(format!("path through edges {}: {err}", path.join(",")))
}

/// Projection of each component onto a component of the base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    pub target: usize,
    pub keep: Vec<usize>,
}

/// Per source component of `X`: target component of `Y` -> correspondence on it.
type Images = Vec<BTreeMap<usize, Correspondence>>;

fn project_graph(f: &ComponentGraph, maps: &[ComponentMap], base: &ComponentGraph) -> Result<Images> {
    let mut out: Vec<BTreeMap<usize, Vec<(BigUint, Atom)>>> = vec![BTreeMap::new(); f.components.len()];
    for e in &f.edges {
        let (mi, mj) = (&maps[e.from], &maps[e.to]);
        if mi.keep != mj.keep {
            return Err(Error::NotSemiConjugate(format!("components {} and {} project along different factors", e.from + 1, e.to + 1)));
        }
        let single = Correspondence::term(e.coef.clone(), e.atom.clone());
        let img = project_correspondence(&single, &mj.keep)?;
        if *img.space() != base.components[mj.target] {
            return Err(Error::SpaceMismatch { left: img.space().to_string(), right: base.components[mj.target].to_string() });
        }
        let slot = out[e.from].entry(mj.target).or_default();
        slot.extend(img.terms().map(|(a, c)| (c.clone(), a.clone())));
    }
    collect_images(out, base)
}

fn base_images(g: &ComponentGraph, maps: &[ComponentMap]) -> Result<Images> {
    let mut out: Vec<BTreeMap<usize, Vec<(BigUint, Atom)>>> = vec![BTreeMap::new(); maps.len()];
    for (i, m) in maps.iter().enumerate() {
        for e in g.edges.iter().filter(|e| e.from == m.target) {
            out[i].entry(e.to).or_default().push((e.coef.clone(), e.atom.clone()));
        }
    }
    collect_images(out, g)
}

fn collect_images(raw: Vec<BTreeMap<usize, Vec<(BigUint, Atom)>>>, base: &ComponentGraph) -> Result<Images> {
    raw.into_iter()
        .map(|m| m.into_iter().map(|(t, items)| Ok((t, Correspondence::from_terms(&base.components[t], items)?))).collect())
        .collect()
}

fn scale_images(im: &Images, a: &BigUint) -> Result<Images> {
    im.iter().map(|m| m.iter().map(|(t, c)| Ok((*t, c.scale(a)?))).collect()).collect()
}

/// Common `a` with `lhs = a * rhs`, if any.
fn common_multiplier(lhs: &Images, rhs: &Images) -> Option<BigUint> {
    let mut a: Option<BigUint> = None;
    for (l, r) in lhs.iter().zip(rhs) {
        if l.len() != r.len() {
            return None;
        }
        for (t, lc) in l {
            let rc = r.get(t)?;
            if lc.len() != rc.len() {
                return None;
            }
            for (atom, c) in lc.terms() {
                let d = rc.coefficient(atom);
                if d.is_zero() || !(c % &d).is_zero() {
                    return None;
                }
                let q = c / &d;
                if a.as_ref().is_some_and(|a| *a != q) {
                    return None;
                }
                a = Some(q);
            }
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceRow {
    pub n: u32,
    /// `pi o f^n = a (g^n o pi)` with the multiplier `a` observed at `n = 1`.
    pub fixed_multiplier: bool,
    /// `pi o f^n = a^n (g^n o pi)`, i.e. `pi o f^n = (a g)^n o pi`.
    pub power_multiplier: bool,
    /// Observed `c` with `pi o f^n = c (g^n o pi)`, when one exists.
    pub observed: Option<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveReport {
    pub multiplier: BigUint,
    pub rows: Vec<PersistenceRow>,
    pub first_failure: Option<u32>,
}

/// Tests whether `pi o f = a (g o pi)` propagates to `pi o f^n = a (g^n o pi)`
/// for `n <= n_max`, reporting the first `n` where it does not, alongside the
/// relation `pi o f^n = a^n (g^n o pi)`.
pub fn check_no_naive_semiconjugacy(
    f: &ComponentGraph,
    g: &ComponentGraph,
    maps: &[ComponentMap],
    n_max: u32,
    settings: &Settings,
) -> Result<NaiveReport> {
    if maps.len() != f.components.len() || maps.iter().any(|m| m.target >= g.components.len()) {
        return Err(Error::InvalidArgument("one component map per component of X".into()));
    }
    let (fs, _) = f.iterates(n_max, settings)?;
    let (gs, _) = g.iterates(n_max, settings)?;
    let mut rows = Vec::new();
    let mut multiplier = None;
    let mut power = BigUint::one();
    for (i, (fnn, gn)) in fs.iter().zip(&gs).enumerate() {
        let n = i as u32 + 1;
        let lhs = project_graph(fnn, maps, g)?;
        let rhs = base_images(gn, maps)?;
        let observed = common_multiplier(&lhs, &rhs);
        if n == 1 {
            multiplier = Some(observed.clone().ok_or_else(|| Error::NotSemiConjugate("pi o f is not a multiple of g o pi".into()))?);
        }
        let a = multiplier.as_ref().expect("set at n = 1");
        power *= a;
        let fixed_multiplier = lhs == scale_images(&rhs, a)?;
        let power_multiplier = lhs == scale_images(&rhs, &power)?;
        rows.push(PersistenceRow { n, fixed_multiplier, power_multiplier, observed });
    }
    let first_failure = rows.iter().find(|r| !r.fixed_multiplier).map(|r| r.n);
    Ok(NaiveReport { multiplier: multiplier.expect("n_max >= 1"), rows, first_failure })
}

/// Disjoint union of projection semi-conjugacies `pi_i: (X_i, f_i) -> (Y_i, g_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnionSemiConjugacy {
    parts: Vec<SemiConjugacy>,
}

impl UnionSemiConjugacy {
    pub fn new(parts: Vec<SemiConjugacy>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidGraph("empty union".into()));
        };
        let (k, l) = (first.x().dim(), first.y().dim());
        if parts.iter().any(|s| s.x().dim() != k || s.y().dim() != l) {
            return Err(Error::InvalidGraph("union parts must share dimensions".into()));
        }
        Ok(UnionSemiConjugacy { parts })
    }

    pub fn parts(&self) -> &[SemiConjugacy] {
        &self.parts
    }

    pub fn f_graph(&self) -> Result<ComponentGraph> {
        ComponentGraph::disjoint(&self.parts.iter().map(|s| s.f().clone()).collect::<Vec<_>>())
    }

    pub fn g_graph(&self) -> Result<ComponentGraph> {
        ComponentGraph::disjoint(&self.parts.iter().map(|s| s.g().clone()).collect::<Vec<_>>())
    }

    pub fn relative_dim(&self) -> u32 {
        self.parts[0].relative_dim()
    }

    /// Growth of the summed relative degrees of the parts.
    pub fn rel_dyn_degree(&self, p: u32, n: u32, settings: &Settings) -> Result<DegreeReport> {
        let bound: usize = self.parts.iter().map(|s| s.x().basis_size(p)).sum();
        let len = n.max(2 * bound as u32);
        let mut total: Vec<BigUint> = vec![BigUint::zero(); len as usize];
        let mut multiplicative = true;
        for s in &self.parts {
            let (its, stats) = s.f().iterates(len, settings)?;
            multiplicative &= stats.multiplicative;
            for (t, g) in total.iter_mut().zip(&its) {
                *t += s.relative_degree_of(g, p)?;
            }
        }
        let hint = if multiplicative {
            GrowthHint::Recurrence(bound)
        } else {
            GrowthHint::None("non-multiplicative rules: relative estimate only".into())
        };
        Ok(analyze(p, total, n as usize, hint, Vec::new()))
    }

    /// `pi o f^n = a_i^n (g_i^n o pi)` on every part for `n <= n_max`.
    pub fn persistence(&self, n_max: u32, settings: &Settings) -> Result<bool> {
        for s in &self.parts {
            if !s.persistence(n_max, settings)?.iter().all(|(_, ok)| *ok) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn p1() -> Space {
        Space::projective(1)
    }

    fn pw(d: u64) -> Atom {
        Atom::power(&p1(), u(d)).unwrap()
    }

    fn edge(from: usize, to: usize, atom: Atom, coef: u64) -> Edge {
        Edge { from, to, atom, coef: u(coef) }
    }

    #[test]
    fn two_cycle_iterates_and_growth() {
        let g = ComponentGraph::new(vec![p1(), p1()], vec![edge(0, 1, pw(2), 1), edge(1, 0, pw(3), 1)]).unwrap();
        let s = Settings::default();
        let sq = g.iterate(2, &s).unwrap();
        assert_eq!(sq.edges(), &[edge(0, 0, pw(6), 1), edge(1, 1, pw(6), 1)]);
        let r = g.dyn_degree(1, 12, &s).unwrap();
        assert_eq!(alloc::format!("{}", r.exact.unwrap()), "6^{1/2}");
    }

    #[test]
    fn disjoint_union_takes_max() {
        let p2 = Space::projective(2);
        let f1 = Correspondence::atom(Atom::power(&p2, u(2)).unwrap());
        let f2 = Correspondence::atom(Atom::power(&p2, u(3)).unwrap());
        let g = ComponentGraph::disjoint(&[f1, f2]).unwrap();
        let r = g.dyn_degree(1, 12, &Settings::default()).unwrap();
        assert_eq!(r.exact.unwrap().as_rational(), Some(&rat(3)));
    }

    #[test]
    fn path_counts_match_adjacency_powers() {
        let g = ComponentGraph::new(vec![p1(), p1()], vec![edge(0, 1, pw(2), 2), edge(1, 0, pw(2), 1), edge(1, 1, pw(2), 1)]).unwrap();
        let s = Settings::default();
        for n in 1..=5u32 {
            let paths = g.expand_paths(n, &s).unwrap();
            let a = g.adjacency().pow(n);
            let total: crate::arith::Rat = a.entries().iter().sum();
            assert_eq!(rat(paths.len() as i64), total);
        }
    }

    #[test]
    fn invalid_graphs() {
        assert!(ComponentGraph::new(vec![p1(), p1()], vec![edge(0, 1, pw(2), 1)]).is_err());
        let p2 = Space::projective(2);
        assert!(ComponentGraph::new(vec![p1(), p2], vec![]).is_err());
    }

    #[test]
    fn naive_relation_breaks_at_two() {
        let x = Space::product(&[1, 1]).unwrap();
        let atom = |d: u64| Atom::product(vec![pw(d), pw(3)]).unwrap();
        let f = ComponentGraph::new(
            vec![x.clone(), x.clone()],
            vec![edge(0, 1, atom(2), 2), edge(1, 0, atom(5), 1), edge(1, 1, Atom::product(vec![Atom::diag(&p1()), pw(3)]).unwrap(), 1)],
        )
        .unwrap();
        let g = ComponentGraph::new(vec![p1()], vec![edge(0, 0, pw(3), 1)]).unwrap();
        let maps = vec![ComponentMap { target: 0, keep: vec![1] }, ComponentMap { target: 0, keep: vec![1] }];
        let rep = check_no_naive_semiconjugacy(&f, &g, &maps, 4, &Settings::default()).unwrap();
        assert_eq!(rep.multiplier, u(2));
        assert_eq!(rep.first_failure, Some(2));
        assert!(rep.rows.iter().all(|r| r.power_multiplier));
        assert_eq!(rep.rows[1].observed, Some(u(4)));
    }
}
