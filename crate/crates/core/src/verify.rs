//! Executable checks over exact dynamical degrees. Every report carries
//! both sides of each inequality; estimates force an inconclusive verdict.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicReal;
use crate::arith::{rat_to_f64, Rat};
use crate::corr::{Correspondence, Settings};
use crate::degree::{check_submultiplicative, dual_degree_check, dyn_degrees, DegreeReport};
use crate::graph::UnionSemiConjugacy;
use crate::matrix::{largest_real_root, Matrix};
use crate::poly::Poly;
use crate::relative::SemiConjugacy;

const APPROX_BITS: i64 = 1 << 32;

/// An exact algebraic value or a rational estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(AlgebraicReal),
    Estimate(Rat),
}

impl Quantity {
    pub fn int(n: i64) -> Self {
        Quantity::Exact(AlgebraicReal::from_int(n))
    }

    pub fn from_report(r: &DegreeReport) -> Self {
        match &r.exact {
            Some(l) => Quantity::Exact(l.clone()),
            None => Quantity::Estimate(r.estimate.clone()),
        }
    }

    pub fn exact(&self) -> Option<&AlgebraicReal> {
        match self {
            Quantity::Exact(a) => Some(a),
            Quantity::Estimate(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Exact(_))
    }

    fn approx(&self) -> Rat {
        match self {
            Quantity::Exact(a) => a.bounds(&Rat::new(1.into(), APPROX_BITS.into())).0,
            Quantity::Estimate(r) => r.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(a) => a.to_f64(),
            Quantity::Estimate(r) => rat_to_f64(r),
        }
    }

    fn lift(
        &self,
        other: &Quantity,
        exact: impl Fn(&AlgebraicReal, &AlgebraicReal) -> AlgebraicReal,
        est: impl Fn(Rat, Rat) -> Rat,
    ) -> Quantity {
        match (self, other) {
            (Quantity::Exact(a), Quantity::Exact(b)) => Quantity::Exact(exact(a, b)),
            _ => Quantity::Estimate(est(self.approx(), other.approx())),
        }
    }

    pub fn mul(&self, other: &Quantity) -> Quantity {
        self.lift(other, |a, b| a.mul(b), |a, b| a * b)
    }

    pub fn add(&self, other: &Quantity) -> Quantity {
        self.lift(other, |a, b| a.add(b), |a, b| a + b)
    }

    pub fn max(&self, other: &Quantity) -> Quantity {
        self.lift(other, |a, b| a.clone().max(b.clone()), |a, b| if a >= b { a } else { b })
    }

    /// Exact comparison; `None` unless both sides are exact.
    pub fn compare(&self, other: &Quantity) -> Option<Ordering> {
        Some(self.exact()?.cmp(other.exact()?))
    }

    pub fn approx_string(&self, digits: usize) -> String {
        match self {
            Quantity::Exact(a) => a.approx_string(digits),
            Quantity::Estimate(r) => format!("~{:.*}", digits, rat_to_f64(r)),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(a) => write!(f, "{a}"),
            Quantity::Estimate(r) => write!(f, "~{:.6}", rat_to_f64(r)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    fn accepts(self, o: Ordering) -> bool {
        match self {
            Relation::Ge => o != Ordering::Less,
            Relation::Le => o != Ordering::Greater,
            Relation::Eq => o == Ordering::Equal,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

fn ordering_symbol(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// `left relation right`, with `outcome` absent when either side is an estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub label: String,
    pub left_name: String,
    pub left: Quantity,
    pub relation: Relation,
    pub right_name: String,
    pub right: Quantity,
    pub outcome: Option<bool>,
}

impl Row {
    pub fn new(
        label: impl Into<String>,
        left_name: impl Into<String>,
        left: Quantity,
        relation: Relation,
        right_name: impl Into<String>,
        right: Quantity,
    ) -> Self {
        let outcome = left.compare(&right).map(|o| relation.accepts(o));
        Row { label: label.into(), left_name: left_name.into(), left, relation, right_name: right_name.into(), right, outcome }
    }

    /// `"9 < 10"`: the sides with their actual relation.
    pub fn comparison(&self) -> String {
        match self.left.compare(&self.right) {
            Some(o) => format!("{} {} {}", self.left, ordering_symbol(o), self.right),
            None => format!("{} ? {}", self.left, self.right),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub inputs: String,
    pub rows: Vec<Row>,
    /// Named auxiliary values (minimal constants, eigenvalues, ...).
    pub values: Vec<(String, Quantity)>,
    pub verdict: Verdict,
    /// The failure is the anticipated outcome (reducible counterexamples).
    pub expected_failure: bool,
    /// Conclusion emitted by criterion-style checks.
    pub certificate: Option<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str, inputs: String) -> Self {
        CheckReport {
            name: name.into(),
            inputs,
            rows: Vec::new(),
            values: Vec::new(),
            verdict: Verdict::Inconclusive("not run".into()),
            expected_failure: false,
            certificate: None,
            notes: Vec::new(),
        }
    }

    fn inconclusive(name: &str, inputs: String, reason: impl Into<String>) -> Self {
        let mut r = CheckReport::new(name, inputs);
        r.verdict = Verdict::Inconclusive(reason.into());
        r
    }

    /// Verdict from the rows: any estimate makes it inconclusive.
    pub fn settle(&mut self) {
        self.verdict = if self.rows.iter().any(|r| r.outcome.is_none()) {
            Verdict::Inconclusive("only estimates available".into())
        } else if self.rows.iter().all(|r| r.outcome == Some(true)) {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
    }

    pub fn value(&self, name: &str) -> Option<&Quantity> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, q)| q)
    }

    pub fn first_failure(&self) -> Option<&Row> {
        self.rows.iter().find(|r| r.outcome == Some(false))
    }

    /// One line such as `log-concavity: FAILS (9 < 10)`.
    pub fn summary(&self) -> String {
        match &self.verdict {
            Verdict::Holds => format!("{}: HOLDS", self.name),
            Verdict::Fails => {
                let detail = self.first_failure().map(|r| format!(" ({})", r.comparison())).unwrap_or_default();
                let tail = if self.expected_failure { ", expected" } else { "" };
                format!("{}: FAILS{detail}{tail}", self.name)
            }
            Verdict::Inconclusive(why) => format!("{}: INCONCLUSIVE ({why})", self.name),
        }
    }
}

fn lambdas_of(reports: &[DegreeReport]) -> Vec<Quantity> {
    reports.iter().map(Quantity::from_report).collect()
}

fn all_exact(q: &[Quantity]) -> bool {
    q.iter().all(Quantity::is_exact)
}

/// Syntactic irreducibility: every iterate up to `n` is a single term.
pub fn iterates_irreducible(f: &Correspondence, n: u32, settings: &Settings) -> crate::Result<bool> {
    let (its, _) = f.iterates(n, settings)?;
    Ok(its.iter().all(|g| g.single_term().is_some()))
}

/// Smallest `m <= n` with `f^m` a single term.
pub fn first_irreducible_iterate(f: &Correspondence, n: u32, settings: &Settings) -> crate::Result<Option<u32>> {
    let (its, _) = f.iterates(n, settings)?;
    Ok(its.iter().position(|g| g.single_term().is_some()).map(|i| i as u32 + 1))
}

fn lambda_list(l: &[Quantity]) -> String {
    let parts: Vec<String> = l.iter().map(|q| q.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn log_concavity_rows(report: &mut CheckReport, l: &[Quantity], sym: &str) {
    for p in 1..l.len().saturating_sub(1) {
        report.rows.push(Row::new(
            format!("p={p}"),
            format!("{sym}_{p}^2"),
            l[p].mul(&l[p]),
            Relation::Ge,
            format!("{sym}_{}*{sym}_{}", p - 1, p + 1),
            l[p - 1].mul(&l[p + 1]),
        ));
    }
}

/// `lambda_p^2 >= lambda_(p-1) lambda_(p+1)` for `1 <= p <= k-1`.
pub fn check_log_concavity(f: &Correspondence, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    let l = lambdas_of(&dyn_degrees(f, n, settings)?);
    let mut r = CheckReport::new("log-concavity", format!("F = {f}, N = {n}"));
    r.values.extend(l.iter().enumerate().map(|(p, q)| (format!("lambda_{p}"), q.clone())));
    log_concavity_rows(&mut r, &l, "lambda");
    if iterates_irreducible(f, n, settings)? {
        r.notes.push("iterates irreducible (single term)".into());
    } else {
        r.notes.push("hypothesis not met: reducible iterates".into());
    }
    r.settle();
    Ok(r)
}

/// Log-concavity of the relative degrees `lambda_p(f|pi)`.
pub fn check_relative_log_concavity(sc: &SemiConjugacy, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    let l = lambdas_of(&sc.rel_dyn_degrees(n, settings)?);
    let mut r = CheckReport::new("relative log-concavity", format!("{}, N = {n}", sc.describe()));
    r.values.extend(l.iter().enumerate().map(|(p, q)| (format!("lambda_{p}(f|pi)"), q.clone())));
    log_concavity_rows(&mut r, &l, "lambda(f|pi)");
    if !iterates_irreducible(sc.f(), n, settings)? {
        r.notes.push("hypothesis not met: reducible iterates".into());
    }
    r.settle();
    Ok(r)
}

/// `max_j a_j b_(p-j)` over `max(0, p - rel) <= j <= min(p, l)`.
fn convolve_max(a: &[Quantity], b: &[Quantity], p: usize) -> Quantity {
    let l = a.len() - 1;
    let rel = b.len() - 1;
    let lo = p.saturating_sub(rel);
    let mut best: Option<Quantity> = None;
    for j in lo..=p.min(l) {
        let t = a[j].mul(&b[p - j]);
        best = Some(match best {
            Some(x) => x.max(&t),
            None => t,
        });
    }
    best.expect("nonempty range")
}

struct SideLambdas {
    f: Vec<Quantity>,
    g: Vec<Quantity>,
    rel: Vec<Quantity>,
}

fn side_lambdas(sc: &SemiConjugacy, g: &Correspondence, n: u32, settings: &Settings) -> crate::Result<SideLambdas> {
    Ok(SideLambdas {
        f: lambdas_of(&dyn_degrees(sc.f(), n, settings)?),
        g: lambdas_of(&dyn_degrees(g, n, settings)?),
        rel: lambdas_of(&sc.rel_dyn_degrees(n, settings)?),
    })
}

fn record_lambdas(r: &mut CheckReport, s: &SideLambdas) {
    for (p, q) in s.f.iter().enumerate() {
        r.values.push((format!("lambda_{p}(f)"), q.clone()));
    }
    for (p, q) in s.g.iter().enumerate() {
        r.values.push((format!("lambda_{p}(g)"), q.clone()));
    }
    for (p, q) in s.rel.iter().enumerate() {
        r.values.push((format!("lambda_{p}(f|pi)"), q.clone()));
    }
}

/// `lambda_p(f) = max_j lambda_j(g') lambda_(p-j)(f|pi)` where `g = c g'`
/// with `g'` a rational map.
pub fn check_product_formula(sc: &SemiConjugacy, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    const NAME: &str = "product formula";
    let inputs = format!("{}, N = {n}", sc.describe());
    if !sc.is_verified() {
        return Ok(CheckReport::inconclusive(NAME, inputs, "semi-conjugacy not verified"));
    }
    let Some((atom, c)) = sc.g().single_term().filter(|(a, _)| a.is_map_like()) else {
        return Ok(CheckReport::inconclusive(NAME, inputs, "hypothesis not met: g is not a multiple of a rational map"));
    };
    let g_prime = Correspondence::atom(atom.clone());
    let s = side_lambdas(sc, &g_prime, n, settings)?;
    let mut r = CheckReport::new(NAME, inputs);
    if !c.is_one() {
        r.notes.push(format!("g = {c} * {g_prime}"));
    }
    record_lambdas(&mut r, &s);
    for p in 0..s.f.len() {
        r.rows.push(Row::new(
            format!("p={p}"),
            format!("lambda_{p}(f)"),
            s.f[p].clone(),
            Relation::Eq,
            "max_j lambda_j(g') lambda_{p-j}(f|pi)",
            convolve_max(&s.g, &s.rel, p),
        ));
    }
    r.settle();
    Ok(r)
}

fn weak_product_rows(r: &mut CheckReport, s: &SideLambdas) {
    let l0g = s.g[0].clone();
    for p in 0..s.f.len() {
        r.rows.push(Row::new(
            format!("p={p}"),
            format!("lambda_0(g) lambda_{p}(f)"),
            l0g.mul(&s.f[p]),
            Relation::Ge,
            "max_j lambda_j(g) lambda_{p-j}(f|pi)",
            convolve_max(&s.g, &s.rel, p),
        ));
    }
    if all_exact(&s.f) && all_exact(&s.g) && all_exact(&s.rel) {
        // c_min = max_p rhs_p / lambda_p(f); needs rational lambda_p(f).
        let mut c_min: Option<Rat> = Some(Rat::zero());
        for p in 0..s.f.len() {
            let lf = s.f[p].exact().and_then(|a| a.as_rational().cloned());
            let rhs = convolve_max(&s.g, &s.rel, p);
            let rhs = rhs.exact().and_then(|a| a.as_rational().cloned());
            c_min = match (c_min, lf, rhs) {
                (Some(c), Some(lf), Some(rhs)) if lf.is_positive() => Some(if rhs.clone() / &lf > c { rhs / lf } else { c }),
                _ => None,
            };
        }
        match c_min {
            Some(c) => {
                let cq = Quantity::Exact(AlgebraicReal::from_rational(c));
                if cq.compare(&l0g) == Some(Ordering::Equal) {
                    r.notes.push("sharp: minimal c equals lambda_0(g)".into());
                }
                r.values.push(("c_min".into(), cq));
            }
            None => r.notes.push("minimal c not computed: irrational ratios".into()),
        }
    }
}

/// `lambda_0(g) lambda_p(f) >= max_j lambda_j(g) lambda_(p-j)(f|pi)` for all
/// `p`, with the minimal constant that could replace `lambda_0(g)`.
pub fn check_weak_product(sc: &SemiConjugacy, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    const NAME: &str = "weak product formula";
    let inputs = format!("{}, N = {n}", sc.describe());
    if !sc.is_verified() {
        return Ok(CheckReport::inconclusive(NAME, inputs, "semi-conjugacy not verified"));
    }
    let s = side_lambdas(sc, sc.g(), n, settings)?;
    let mut r = CheckReport::new(NAME, inputs);
    record_lambdas(&mut r, &s);
    weak_product_rows(&mut r, &s);
    r.settle();
    match first_irreducible_iterate(sc.g(), n, settings)? {
        Some(m) => r.notes.push(format!("g^{m} is irreducible")),
        None => {
            r.verdict = Verdict::Inconclusive(format!("hypothesis not met: no iterate g^m, m <= {n}, is irreducible"));
        }
    }
    Ok(r)
}

/// The weak product inequality over a disjoint union, where it is expected to fail.
pub fn check_weak_product_union(u: &UnionSemiConjugacy, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    let descr: Vec<String> = u.parts().iter().map(|s| s.describe()).collect();
    let mut r = CheckReport::new("weak product formula", format!("union of [{}], N = {n}", descr.join("; ")));
    let fg = u.f_graph()?;
    let gg = u.g_graph()?;
    let s = SideLambdas {
        f: lambdas_of(&fg.dyn_degrees(n, settings)?),
        g: lambdas_of(&gg.dyn_degrees(n, settings)?),
        rel: (0..=u.relative_dim())
            .map(|p| u.rel_dyn_degree(p, n, settings).map(|rep| Quantity::from_report(&rep)))
            .collect::<crate::Result<_>>()?,
    };
    record_lambdas(&mut r, &s);
    weak_product_rows(&mut r, &s);
    r.settle();
    r.expected_failure = r.verdict == Verdict::Fails;
    r.notes.push("reducible variety: the inequality is not expected to hold".into());
    Ok(r)
}

fn lambdas_through(f: &Correspondence, keep: Option<&[usize]>, n: u32, settings: &Settings) -> crate::Result<Vec<Quantity>> {
    match keep {
        None => Ok(lambdas_of(&dyn_degrees(f, n, settings)?)),
        Some(k) => Ok(lambdas_of(&SemiConjugacy::projection(f, k)?.rel_dyn_degrees(n, settings)?)),
    }
}

/// `lambda_p(f1 + f2 | pi) <= lambda_p(f1 | pi) + lambda_p(f2 | pi)`;
/// `keep = None` measures against a point.
pub fn check_triangle(
    f1: &Correspondence,
    f2: &Correspondence,
    keep: Option<&[usize]>,
    n: u32,
    settings: &Settings,
) -> crate::Result<CheckReport> {
    const NAME: &str = "triangle inequality";
    let target = keep.map_or("point".to_string(), |k| format!("factors {k:?}"));
    let inputs = format!("F1 = {f1}, F2 = {f2}, over {target}, N = {n}");
    for (a, _) in f1.terms() {
        for (b, _) in f2.terms() {
            if !a.commutes_with(b) {
                return Ok(CheckReport::inconclusive(NAME, inputs, format!("no commutation certificate for {a} and {b}")));
            }
        }
    }
    let sum = f1.add(f2)?;
    let ls = lambdas_through(&sum, keep, n, settings)?;
    let l1 = lambdas_through(f1, keep, n, settings)?;
    let l2 = lambdas_through(f2, keep, n, settings)?;
    let mut r = CheckReport::new(NAME, inputs);
    for p in 0..ls.len() {
        let row = Row::new(
            format!("p={p}"),
            format!("lambda_{p}(F1+F2)"),
            ls[p].clone(),
            Relation::Le,
            format!("lambda_{p}(F1)+lambda_{p}(F2)"),
            l1[p].add(&l2[p]),
        );
        if let Some(o) = row.left.compare(&row.right) {
            r.notes.push(format!("p={p}: {}", if o == Ordering::Equal { "equal" } else { "strict" }));
        }
        r.rows.push(row);
    }
    r.settle();
    Ok(r)
}

/// `lambda_p(f1|pi1) >= lambda_p(f2|pi2)` given `phi` with `phi o f1 = f2 o phi`.
pub fn check_monotonicity(
    f1: &Correspondence,
    keep1: Option<&[usize]>,
    f2: &Correspondence,
    keep2: Option<&[usize]>,
    phi: &Correspondence,
    n: u32,
    settings: &Settings,
) -> crate::Result<CheckReport> {
    const NAME: &str = "monotonicity";
    let inputs = format!("f1 = {f1}, f2 = {f2}, phi = {phi}, N = {n}");
    let lhs = phi.compose(f1, settings);
    let rhs = f2.compose(phi, settings);
    match (lhs, rhs) {
        (Ok(a), Ok(b)) if a == b => {}
        (Ok(_), Ok(_)) => return Ok(CheckReport::inconclusive(NAME, inputs, "phi o f1 differs from f2 o phi")),
        (Err(e), _) | (_, Err(e)) => return Ok(CheckReport::inconclusive(NAME, inputs, format!("intertwining not checkable: {e}"))),
    }
    let l1 = lambdas_through(f1, keep1, n, settings)?;
    let l2 = lambdas_through(f2, keep2, n, settings)?;
    let mut r = monotonicity_values(inputs, &l1, &l2);
    r.notes.push("phi o f1 = f2 o phi verified".into());
    Ok(r)
}

/// Monotonicity on declared relative degree tables.
pub fn check_monotonicity_values(label: &str, l1: &[Quantity], l2: &[Quantity]) -> CheckReport {
    let mut r = monotonicity_values(format!("declared tables {label}"), l1, l2);
    r.notes.push("connecting maps declared, not verified".into());
    r
}

fn monotonicity_values(inputs: String, l1: &[Quantity], l2: &[Quantity]) -> CheckReport {
    let mut r = CheckReport::new("monotonicity", inputs);
    for p in 0..l1.len().min(l2.len()) {
        r.rows.push(Row::new(
            format!("p={p}"),
            format!("lambda_{p}(f1|pi1)"),
            l1[p].clone(),
            Relation::Ge,
            format!("lambda_{p}(f2|pi2)"),
            l2[p].clone(),
        ));
    }
    r.settle();
    r
}

/// Weak primitivity is certified when `lambda_0 > lambda_1`.
pub fn check_primitivity(f: &Correspondence, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    let reports = dyn_degrees(f, n, settings)?;
    let l = lambdas_of(&reports[..2.min(reports.len())]);
    let mut r = CheckReport::new("primitivity", format!("F = {f}, N = {n}"));
    if l.len() < 2 {
        r.verdict = Verdict::Inconclusive("needs dimension >= 1".into());
        return Ok(r);
    }
    r.values.push(("lambda_0".into(), l[0].clone()));
    r.values.push(("lambda_1".into(), l[1].clone()));
    match l[0].compare(&l[1]) {
        None => r.verdict = Verdict::Inconclusive("only estimates available".into()),
        Some(o) => {
            r.verdict = Verdict::Holds;
            if o == Ordering::Greater {
                r.certificate = Some(format!("weakly primitive ({} > {})", l[0], l[1]));
            } else {
                r.notes.push(format!("criterion silent ({} {} {})", l[0], ordering_symbol(o), l[1]));
            }
        }
    }
    Ok(r)
}

/// Obstructions to semi-conjugacies onto lower-dimensional rational-map
/// dynamics read off an exact lambda-vector `(lambda_0, ..., lambda_k)`.
/// The rows record the tested inequality; a violation is the certificate.
pub fn check_obstruction(lambdas: &[Quantity]) -> CheckReport {
    let k = lambdas.len().saturating_sub(1);
    let mut r = CheckReport::new("obstruction", format!("lambda = {}, k = {k}", lambda_list(lambdas)));
    let l = lambdas;
    let (row, cert) = match k {
        2 => (
            Row::new("k=2", "lambda_1^2", l[1].mul(&l[1]), Relation::Ge, "lambda_0*lambda_2", l[0].mul(&l[2])),
            "no semi-conjugacy onto a curve with dynamics a multiple of a rational map",
        ),
        3 => (
            Row::new("k=3", "lambda_0*lambda_3", l[0].mul(&l[3]), Relation::Le, "lambda_1*lambda_2", l[1].mul(&l[2])),
            "primitivity obstruction: no semi-conjugacy onto lower-dimensional rational-map dynamics",
        ),
        _ => {
            r.verdict = Verdict::Inconclusive(format!("no obstruction pattern for k = {k}"));
            return r;
        }
    };
    match row.outcome {
        None => r.verdict = Verdict::Inconclusive("only estimates available".into()),
        Some(ok) => {
            r.verdict = Verdict::Holds;
            if !ok {
                r.certificate = Some(format!("{cert} ({})", row.comparison()));
            }
        }
    }
    r.rows.push(row);
    r
}

/// `q(y)` with roots the squares of the roots of `p`.
fn squared_roots(p: &Poly) -> Poly {
    let c = p.coeffs();
    let even: Vec<Rat> = c.iter().step_by(2).cloned().collect();
    let odd: Vec<Rat> = c.iter().skip(1).step_by(2).cloned().collect();
    let e = Poly::new(even);
    let o = Poly::new(odd);
    e.mul(&e).sub(&Poly::x().mul(&o).mul(&o))
}

/// `p(-x)`
fn reflect(p: &Poly) -> Poly {
    Poly::new(p.coeffs().iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect())
}

fn sign_at_infinity(p: &Poly, positive: bool) -> i8 {
    let s = if p.lead().is_positive() { 1 } else { -1 };
    if positive || p.degree().unwrap_or(0).is_multiple_of(2) {
        s
    } else {
        -s
    }
}

fn variations(chain: &[Poly], positive: bool) -> usize {
    let signs: Vec<i8> = chain.iter().filter(|p| !p.is_zero()).map(|p| sign_at_infinity(p, positive)).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Real negative roots of `e`, with multiplicity.
fn negative_roots(e: &Poly) -> usize {
    let zero = Rat::zero();
    let mut total = 0;
    let mut g = e.clone();
    while g.degree().unwrap_or(0) > 0 {
        total += g.count_roots_in(&-g.cauchy_bound(), &zero);
        g = g.gcd(&g.derivative());
    }
    total
}

/// Open right half-plane roots of `h`, which has no roots on the imaginary
/// axis and no pairs `s, -s`: the Cauchy index of the odd over the even
/// part along the imaginary axis equals `deg h - 2 k`.
fn rhp_regular(h: &Poly) -> usize {
    let Some(n) = h.degree().filter(|&n| n > 0) else {
        return 0;
    };
    let h = if h.lead().is_negative() { h.scale(&-Rat::one()) } else { h.clone() };
    let c = h.coeffs();
    let mut q = vec![Rat::zero(); n + 1];
    let mut p = vec![Rat::zero(); n];
    for (j, k) in (0..=n).rev().step_by(2).enumerate() {
        q[k] = if j % 2 == 0 { c[k].clone() } else { -c[k].clone() };
    }
    for (j, k) in (0..n).rev().step_by(2).enumerate() {
        p[k] = if j % 2 == 0 { c[k].clone() } else { -c[k].clone() };
    }
    let mut chain = vec![Poly::new(q), Poly::new(p)];
    while !chain[chain.len() - 1].is_zero() {
        let len = chain.len();
        let (_, r) = chain[len - 2].div_rem(&chain[len - 1]);
        chain.push(r.scale(&-Rat::one()));
    }
    let index = variations(&chain, false) as i64 - variations(&chain, true) as i64;
    ((n as i64 - index) / 2) as usize
}

/// Open right half-plane roots of `g`, with multiplicity.
fn count_rhp(g: &Poly) -> usize {
    let d = g.gcd(&reflect(g));
    if d.degree().unwrap_or(0) == 0 {
        return rhp_regular(g);
    }
    // d(s) = s^e E(s^2); each root t of E gives the pair +-sqrt(t), one of
    // them in the right half-plane unless t < 0.
    let e = d.strip_zero_roots();
    let even = Poly::new(e.coeffs().iter().step_by(2).cloned().collect());
    let sym = even.degree().unwrap_or(0) - negative_roots(&even);
    sym + rhp_regular(&g.div_rem(&d).0)
}

/// Number of roots of `f`, with multiplicity, strictly outside the unit
/// circle, via `w = (1 + s) / (1 - s)` and a half-plane count.
pub fn roots_outside_unit_circle(f: &Poly) -> usize {
    let n = f.degree().unwrap_or(0);
    let plus = Poly::from_ints(&[1, 1]);
    let minus = Poly::from_ints(&[1, -1]);
    let mut g = Poly::zero();
    for (k, c) in f.coeffs().iter().enumerate() {
        let mut t = Poly::constant(c.clone());
        for _ in 0..k {
            t = t.mul(&plus);
        }
        for _ in k..n {
            t = t.mul(&minus);
        }
        g = g.add(&t);
    }
    count_rhp(&g)
}

/// Spectral radius of a nonnegative matrix as the largest real root of its
/// characteristic polynomial.
fn perron_root(m: &Matrix) -> (AlgebraicReal, Poly) {
    let p = m.char_poly();
    (largest_real_root(&p), p)
}

/// `rho(M1)^2 >= rho(M2)`; when strict, `rho(M1)` is a simple eigenvalue and
/// every other eigenvalue has modulus at most `sqrt(rho(M2))`.
pub fn check_simplicity(m1: &Matrix, m2: &Matrix) -> CheckReport {
    let mut r = CheckReport::new("simplicity", format!("M1 = {m1}, M2 = {m2}"));
    if !m1.is_square() || !m2.is_square() || !m1.is_nonnegative() || !m2.is_nonnegative() {
        r.verdict = Verdict::Inconclusive("matrices must be square and nonnegative".into());
        return r;
    }
    let (rho1, p1) = perron_root(m1);
    let (rho2, _) = perron_root(m2);
    r.values.push(("rho(M1)".into(), Quantity::Exact(rho1.clone())));
    r.values.push(("rho(M2)".into(), Quantity::Exact(rho2.clone())));
    let sq = rho1.mul(&rho1);
    r.rows.push(Row::new("degree", "rho(M1)^2", Quantity::Exact(sq.clone()), Relation::Ge, "rho(M2)", Quantity::Exact(rho2.clone())));
    if sq.cmp(&rho2) != Ordering::Greater {
        r.notes.push("boundary case rho(M1)^2 = rho(M2): simplicity not asserted".into());
        r.settle();
        return r;
    }
    let multiple = rho1.is_root_of(&p1.derivative());
    r.rows.push(Row::new(
        "simple",
        "multiplicity of rho(M1)",
        Quantity::int(if multiple { 2 } else { 1 }),
        Relation::Eq,
        "1",
        Quantity::int(1),
    ));
    if multiple {
        r.notes.push("hypothesis note: leading eigenvalue is repeated".into());
    }
    let roots = p1.isolate_real_roots();
    if roots.len() >= 2 {
        let mut others: Vec<AlgebraicReal> = roots
            .iter()
            .map(|(lo, hi)| AlgebraicReal::from_isolated(&p1, lo.clone(), hi.clone()))
            .filter(|a| *a != rho1)
            .map(|a| if a.signum() == Ordering::Less { a.neg() } else { a })
            .collect();
        others.sort();
        if let Some(second) = others.pop() {
            r.values.push(("second eigenvalue".into(), Quantity::Exact(second)));
        }
    }
    r.values.push(("sqrt(rho(M2))".into(), Quantity::Exact(rho2_sqrt(&rho2))));
    match rho2.as_rational() {
        Some(c) if c.is_positive() => {
            let q = squared_roots(&p1).scale_var(c);
            let out = roots_outside_unit_circle(&q);
            r.rows.push(Row::new(
                "modulus",
                "eigenvalues with |z| > sqrt(rho(M2))",
                Quantity::int(out as i64),
                Relation::Eq,
                "1",
                Quantity::int(1),
            ));
        }
        _ => {
            r.settle();
            r.verdict = Verdict::Inconclusive("modulus bound needs rational rho(M2) > 0".into());
            return r;
        }
    }
    r.settle();
    r
}

fn rho2_sqrt(rho2: &AlgebraicReal) -> AlgebraicReal {
    match rho2.as_rational() {
        Some(c) => AlgebraicReal::nth_root_of(c, 2),
        None => {
            let p = rho2.defining_poly();
            let q = Poly::new(p.coeffs().iter().flat_map(|c| [c.clone(), Rat::zero()]).collect());
            largest_real_root(&q)
        }
    }
}

/// Simplicity on the `N^1`, `N^2` pullback matrices of `f`.
pub fn check_simplicity_of(f: &Correspondence) -> crate::Result<CheckReport> {
    let m1 = f.pullback_matrix(1)?;
    let m2 = f.pullback_matrix(2)?;
    let mut r = check_simplicity(&m1, &m2);
    r.inputs = format!("F = {f}; {}", r.inputs);
    Ok(r)
}

/// `deg_p(F^(n+m)) <= deg_p(F^n) deg_p(F^m)` for `n + m <= N`.
pub fn check_submultiplicativity(f: &Correspondence, p: u32, n: u32, settings: &Settings) -> crate::Result<CheckReport> {
    let rep = check_submultiplicative(f, p, n, settings)?;
    let mut r = CheckReport::new("submultiplicativity", format!("F = {f}, p = {p}, N = {n}"));
    let s = &rep.sequence;
    for a in 1..=s.len() {
        for b in a..=s.len() - a {
            let lhs = &s[a + b - 1];
            let rhs = &rep.c * &s[a - 1] * &s[b - 1];
            r.rows.push(Row::new(
                format!("n={a}, m={b}"),
                format!("deg_{p}(F^{})", a + b),
                Quantity::Exact(AlgebraicReal::from_uint(lhs)),
                Relation::Le,
                format!("deg_{p}(F^{a})*deg_{p}(F^{b})"),
                Quantity::Exact(AlgebraicReal::from_uint(&rhs)),
            ));
        }
    }
    if let Some(m) = rep.max_ratio {
        r.values.push(("max ratio".into(), Quantity::Exact(AlgebraicReal::from_rational(m))));
    }
    r.values.push(("C".into(), Quantity::Exact(AlgebraicReal::from_uint(&rep.c))));
    r.settle();
    Ok(r)
}

/// Pullback and pushforward degrees agree through the pairing.
pub fn check_dual_degree(f: &Correspondence, p: u32) -> crate::Result<CheckReport> {
    let (a, b, _) = dual_degree_check(f, p)?;
    let mut r = CheckReport::new("dual degree", format!("F = {f}, p = {p}"));
    r.rows.push(Row::new(
        format!("p={p}"),
        format!("(F^* omega^{p}).omega^{}", f.dim() - p),
        Quantity::Exact(AlgebraicReal::from_uint(&a)),
        Relation::Eq,
        format!("omega^{p}.(F_* omega^{})", f.dim() - p),
        Quantity::Exact(AlgebraicReal::from_uint(&b)),
    ));
    r.settle();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Atom;
    use crate::ring::Space;
    use num_bigint::BigUint;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn p(k: u32) -> Space {
        Space::projective(k)
    }

    fn h(k: u32, d: u64) -> Correspondence {
        Correspondence::atom(Atom::power(&p(k), u(d)).unwrap())
    }

    fn diag(k: u32) -> Correspondence {
        Correspondence::atom(Atom::diag(&p(k)))
    }

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn schur_cohn_counts() {
        // (6w - 4)(6w - 9): roots 2/3 and 3/2
        assert_eq!(roots_outside_unit_circle(&Poly::from_ints(&[36, -78, 36])), 1);
        // roots 2, -3
        assert_eq!(roots_outside_unit_circle(&Poly::from_ints(&[-6, 1, 1])), 2);
        assert_eq!(roots_outside_unit_circle(&Poly::from_ints(&[1, 0, 4])), 0);
        assert_eq!(roots_outside_unit_circle(&Poly::from_ints(&[4, 0, 1])), 2);
        assert_eq!(roots_outside_unit_circle(&Poly::from_ints(&[-1, 0, 1])), 0);
        // (w - 1)^2 (w + 3) (4w^2 + 1)
        let p = Poly::from_ints(&[1, -1]).mul(&Poly::from_ints(&[1, -1])).mul(&Poly::from_ints(&[3, 1])).mul(&Poly::from_ints(&[1, 0, 4]));
        assert_eq!(roots_outside_unit_circle(&p), 1);
        // complex pair 1 +- i (modulus sqrt 2) and 1/2
        let p = Poly::from_ints(&[2, -2, 1]).mul(&Poly::from_ints(&[-1, 2]));
        assert_eq!(roots_outside_unit_circle(&p), 2);
    }

    #[test]
    fn squared_root_poly() {
        // (z - 2)(z - 3) -> (y - 4)(y - 9)
        let q = squared_roots(&Poly::from_ints(&[6, -5, 1]));
        assert_eq!(q, Poly::from_ints(&[36, -13, 1]));
    }

    #[test]
    fn log_concavity_example_three() {
        let f = h(2, 2).add(&diag(2)).unwrap();
        let r = check_log_concavity(&f, 12, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.summary(), "log-concavity: FAILS (9 < 10)");
        assert!(r.notes.iter().any(|n| n.contains("reducible")));
        let r = check_log_concavity(&h(3, 2), 12, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn simplicity_cases() {
        let m1 = Matrix::from_int_rows(&[&[2, 0], &[0, 3]]);
        let m2 = Matrix::from_int_rows(&[&[6]]);
        let r = check_simplicity(&m1, &m2);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.value("second eigenvalue").unwrap().to_string(), "2");
        let j = Matrix::from_int_rows(&[&[2, 1], &[0, 2]]);
        let r = check_simplicity(&j, &Matrix::from_int_rows(&[&[3]]));
        assert_eq!(r.verdict, Verdict::Fails);
        let r = check_simplicity(&Matrix::from_int_rows(&[&[2]]), &Matrix::from_int_rows(&[&[4]]));
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.notes[0].contains("boundary"));
    }

    #[test]
    fn obstruction_patterns() {
        let l: Vec<Quantity> = [2, 3, 5].iter().map(|&x| Quantity::int(x)).collect();
        assert!(check_obstruction(&l).certificate.is_some());
        let l: Vec<Quantity> = [2, 3, 5, 9].iter().map(|&x| Quantity::int(x)).collect();
        let r = check_obstruction(&l);
        assert!(r.certificate.unwrap().contains("18 > 15"));
        let l: Vec<Quantity> = [1, 2, 4].iter().map(|&x| Quantity::int(x)).collect();
        assert!(check_obstruction(&l).certificate.is_none());
    }

    #[test]
    fn primitivity_of_reverse() {
        let f = Correspondence::atom(Atom::revpower(&p(2), u(2)).unwrap());
        let r = check_primitivity(&f, 12, &s()).unwrap();
        assert!(r.certificate.is_some());
        assert!(check_primitivity(&h(2, 2), 12, &s()).unwrap().certificate.is_none());
    }

    #[test]
    fn triangle_with_diagonal_is_equality() {
        let r = check_triangle(&h(2, 2), &diag(2), None, 12, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.notes.iter().all(|n| n.ends_with("equal")));
    }

    #[test]
    fn product_formula_on_p2xp1() {
        let x = Space::product(&[2, 1]).unwrap();
        let _ = x;
        let f = Correspondence::atom(Atom::product(vec![Atom::power(&p(2), u(2)).unwrap(), Atom::power(&p(1), u(3)).unwrap()]).unwrap());
        let sc = SemiConjugacy::projection(&f, &[1]).unwrap();
        let r = check_product_formula(&sc, 12, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let lf: Vec<String> = (0..4).map(|p| r.value(&format!("lambda_{p}(f)")).unwrap().to_string()).collect();
        assert_eq!(lf, ["1", "3", "6", "12"]);
    }
}
