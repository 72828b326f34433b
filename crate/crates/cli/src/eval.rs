//! Scene evaluation: names to engine objects, commands to output blocks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dyndeg_core::algebraic::AlgebraicReal;
use dyndeg_core::arith::Rat;
use dyndeg_core::atom::{Atom, DeclaredFamily};
use dyndeg_core::corr::{Correspondence, Settings};
use dyndeg_core::degree::{DegreeReport, IterateTable};
use dyndeg_core::graph::{check_no_naive_semiconjugacy, ComponentGraph, ComponentMap, Edge, UnionSemiConjugacy};
use dyndeg_core::relative::SemiConjugacy;
use dyndeg_core::ring::{DeclaredRing, Space};
use dyndeg_core::scenarios::{self, Item, Outcome, PersistenceLine};
use dyndeg_core::verify::{self, CheckReport, Quantity, Verdict};
use num_bigint::BigUint;

use crate::declared;
use crate::error::CliError;
use crate::scene::{EdgeDecl, Expr, Scene, SpaceExpr, Stmt, Verb};

/// Output of one command.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    Item(Item),
    /// `deg_p(F^n)` for `n = 1..=N`.
    Sequence {
        label: String,
        p: u32,
        values: Vec<BigUint>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub line: usize,
    pub command: String,
    pub blocks: Vec<Block>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub depth: u32,
    pub max_terms: usize,
    /// Directory against which declared file names resolve.
    pub base: PathBuf,
}

impl Default for Options {
    fn default() -> Self {
        Options { depth: 12, max_terms: dyndeg_core::corr::DEFAULT_MAX_TERMS, base: PathBuf::from(".") }
    }
}

/// Sections produced before a failure, and the failure.
#[derive(Debug)]
pub struct Partial {
    pub sections: Vec<Section>,
    pub error: CliError,
}

#[derive(Default)]
struct Env {
    settings: Settings,
    spaces: BTreeMap<String, Space>,
    corrs: BTreeMap<String, Correspondence>,
    semis: BTreeMap<String, SemiConjugacy>,
    graphs: BTreeMap<String, ComponentGraph>,
    families: BTreeMap<PathBuf, Arc<DeclaredFamily>>,
    rings: BTreeMap<PathBuf, Arc<DeclaredRing>>,
    base: PathBuf,
    depth: u32,
}

pub fn run_scene(scene: &Scene, opts: &Options) -> Result<Vec<Section>, Box<Partial>> {
    let mut env = Env {
        settings: Settings { characteristic: 0, max_terms: opts.max_terms },
        base: opts.base.clone(),
        depth: opts.depth,
        ..Env::default()
    };
    let mut sections = Vec::new();
    for (stmt, &line) in scene.stmts.iter().zip(&scene.lines) {
        match env.exec(stmt, line) {
            Ok(Some(s)) => sections.push(s),
            Ok(None) => {}
            Err(error) => return Err(Box::new(Partial { sections, error })),
        }
    }
    Ok(sections)
}

/// Exit status for a completed run: 0 all hold, 2 only expected failures, 1 otherwise.
pub fn exit_code(sections: &[Section]) -> i32 {
    let mut code = 0;
    for s in sections {
        match s.outcome {
            Outcome::UnexpectedFailure => return 1,
            Outcome::ExpectedFailure => code = 2,
            Outcome::Holds => {}
        }
    }
    code
}

fn engine(line: usize, context: &str) -> impl Fn(dyndeg_core::Error) -> CliError + '_ {
    move |source| CliError::Engine { line, context: context.to_string(), source }
}

struct Args {
    line: usize,
    pos: Vec<String>,
    kv: BTreeMap<String, String>,
}

impl Args {
    fn new(raw: &[String], line: usize) -> Result<Self, CliError> {
        let mut pos = Vec::new();
        let mut kv = BTreeMap::new();
        for a in raw {
            match a.split_once('=') {
                Some((k, v)) if !k.is_empty() && !k.contains('[') => {
                    if kv.insert(k.to_string(), v.to_string()).is_some() {
                        return Err(CliError::Command { line, msg: format!("argument {k} given twice") });
                    }
                }
                _ => pos.push(a.clone()),
            }
        }
        Ok(Args { line, pos, kv })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::Command { line: self.line, msg: msg.into() })
    }

    fn positional(&self, i: usize, what: &str) -> Result<&str, CliError> {
        match self.pos.get(i) {
            Some(s) => Ok(s),
            None => self.err(format!("missing {what}")),
        }
    }

    fn number(&self, key: &str, default: u32) -> Result<u32, CliError> {
        match self.kv.get(key) {
            None => Ok(default),
            Some(v) => v.parse().or_else(|_| self.err(format!("{key} must be a non-negative integer, got {v}"))),
        }
    }

    fn range(&self, key: &str, max: u32) -> Result<Vec<u32>, CliError> {
        let Some(v) = self.kv.get(key) else {
            return Ok((0..=max).collect());
        };
        let parse = |s: &str| s.parse::<u32>().ok();
        let (a, b) = match v.split_once("..") {
            Some((a, b)) => (parse(a), parse(b)),
            None => (parse(v), parse(v)),
        };
        match (a, b) {
            (Some(a), Some(b)) if a <= b && b <= max => Ok((a..=b).collect()),
            _ => self.err(format!("{key}={v} is not a range within 0..{max}")),
        }
    }

    /// 1-based factor range `i..j` as 0-based indices.
    fn factors(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        let Some(v) = self.kv.get(key) else {
            return Ok(None);
        };
        let parse = |s: &str| s.parse::<usize>().ok();
        let (a, b) = match v.split_once("..") {
            Some((a, b)) => (parse(a), parse(b)),
            None => (parse(v), parse(v)),
        };
        match (a, b) {
            (Some(a), Some(b)) if a >= 1 && a <= b => Ok(Some((a - 1..b).collect())),
            _ => self.err(format!("{key}={v} is not a 1-based factor range")),
        }
    }

    fn expect_fail(&self) -> Result<bool, CliError> {
        match self.kv.get("expect").map(String::as_str) {
            None | Some("hold") => Ok(false),
            Some("fail") => Ok(true),
            Some(v) => self.err(format!("expect must be hold or fail, got {v}")),
        }
    }

    fn only(&self, keys: &[&str], positional: usize) -> Result<(), CliError> {
        if let Some(k) = self.kv.keys().find(|k| !keys.contains(&k.as_str())) {
            return self.err(format!("unknown argument {k}"));
        }
        if self.pos.len() > positional {
            return self.err(format!("unexpected argument {}", self.pos[positional]));
        }
        Ok(())
    }
}

fn check_outcome(r: &CheckReport) -> Outcome {
    match (&r.verdict, r.expected_failure) {
        (Verdict::Fails, true) => Outcome::ExpectedFailure,
        (Verdict::Fails, false) => Outcome::UnexpectedFailure,
        _ => Outcome::Holds,
    }
}

fn lambdas(reports: &[DegreeReport]) -> Vec<Quantity> {
    reports.iter().map(Quantity::from_report).collect()
}

impl Env {
    fn exec(&mut self, stmt: &Stmt, line: usize) -> Result<Option<Section>, CliError> {
        match stmt {
            Stmt::SetChar(p) => self.settings.characteristic = *p,
            Stmt::Space { name, def } => {
                let s = self.space(def, None, line)?;
                self.spaces.insert(name.clone(), s);
            }
            Stmt::Corr { name, expr } => {
                let f = self.expr(expr, None, line)?;
                self.corrs.insert(name.clone(), f);
            }
            Stmt::SemiConj { name, space, first, last, of, onto } => {
                let x = self.space(space, None, line)?;
                let f = self.expr(of, None, line)?;
                if *f.space() != x {
                    return Err(CliError::Command { line, msg: format!("{name}: {of} lives on {}, not {x}", f.space()) });
                }
                let keep: Vec<usize> = (first - 1..*last).collect();
                let ctx = format!("semiconj {name}");
                let sc = match onto {
                    Some(g) => {
                        let g = self.expr(g, None, line)?;
                        SemiConjugacy::projection_onto(&f, &keep, &g)
                    }
                    None => SemiConjugacy::projection(&f, &keep),
                }
                .map_err(engine(line, &ctx))?;
                self.semis.insert(name.clone(), sc);
            }
            Stmt::Graph { name, components, edges } => {
                let comps = components.iter().map(|c| self.space(c, None, line)).collect::<Result<Vec<_>, _>>()?;
                let es = edges.iter().map(|e| self.edge(e, &comps, line)).collect::<Result<Vec<_>, _>>()?;
                let g = ComponentGraph::new(comps, es).map_err(engine(line, &format!("graph {name}")))?;
                self.graphs.insert(name.clone(), g);
            }
            Stmt::Cmd { verb, args } => {
                let (blocks, outcome) = self.command(*verb, args, line)?;
                return Ok(Some(Section { line, command: stmt.to_string(), blocks, outcome }));
            }
        }
        Ok(None)
    }

    fn path(&self, file: &str) -> PathBuf {
        let f = Path::new(file);
        if f.is_absolute() {
            f.to_path_buf()
        } else {
            self.base.join(f)
        }
    }

    fn space(&mut self, s: &SpaceExpr, implicit: Option<&Space>, line: usize) -> Result<Space, CliError> {
        Ok(match s {
            SpaceExpr::Proj(k) => Space::projective(*k),
            SpaceExpr::Point => Space::Point,
            SpaceExpr::Prod(fs) => {
                let mut dims = Vec::new();
                for f in fs {
                    match self.space(f, implicit, line)? {
                        Space::Projective(k) => dims.push(k),
                        Space::Product(ks) => dims.extend(ks),
                        Space::Point => {}
                        other => {
                            return Err(CliError::Command { line, msg: format!("products need catalog factors, got {other}") });
                        }
                    }
                }
                match dims.len() {
                    0 => Space::Point,
                    1 => Space::projective(dims[0]),
                    _ => Space::product(&dims).map_err(engine(line, "product space"))?,
                }
            }
            SpaceExpr::Declared(file) => {
                let path = self.path(file);
                if let Some(r) = self.rings.get(&path) {
                    return Ok(Space::Declared(r.clone()));
                }
                let r = declared::load_ring(&path)?;
                self.rings.insert(path, r.clone());
                Space::Declared(r)
            }
            SpaceExpr::Name(n) => {
                self.spaces.get(n).cloned().ok_or_else(|| CliError::Unresolved { line, kind: "space", name: n.clone() })?
            }
            SpaceExpr::Implicit => {
                implicit.cloned().ok_or_else(|| CliError::Command { line, msg: "shorthand atoms only appear on graph edges".into() })?
            }
        })
    }

    fn family(&mut self, file: &str) -> Result<Arc<DeclaredFamily>, CliError> {
        let path = self.path(file);
        if let Some(f) = self.families.get(&path) {
            return Ok(f.clone());
        }
        let spaces = self.spaces.clone();
        let fam = declared::load_family(&path, &|n| spaces.get(n).cloned())?;
        self.families.insert(path, fam.clone());
        Ok(fam)
    }

    fn expr(&mut self, e: &Expr, implicit: Option<&Space>, line: usize) -> Result<Correspondence, CliError> {
        let ctx = e.to_string();
        let eng = engine(line, &ctx);
        Ok(match e {
            Expr::Power(s, d) => Correspondence::atom(Atom::power(&self.space(s, implicit, line)?, d.clone()).map_err(&eng)?),
            Expr::RevPower(s, d) => Correspondence::atom(Atom::revpower(&self.space(s, implicit, line)?, d.clone()).map_err(&eng)?),
            Expr::Diag(s) => Correspondence::atom(Atom::diag(&self.space(s, implicit, line)?)),
            Expr::AutSum(s, c) => Correspondence::atom(Atom::autsum(&self.space(s, implicit, line)?, c.clone()).map_err(&eng)?),
            Expr::Declared(file) => Correspondence::atom(Atom::declared(&self.family(file)?)),
            Expr::Name(n) => {
                self.corrs.get(n).cloned().ok_or_else(|| CliError::Unresolved { line, kind: "correspondence", name: n.clone() })?
            }
            Expr::Scale(c, inner) => self.expr(inner, implicit, line)?.scale(c).map_err(&eng)?,
            Expr::Rev(inner) => self.expr(inner, implicit, line)?.reverse().map_err(&eng)?,
            Expr::Sum(ts) => {
                let mut acc = self.expr(&ts[0], implicit, line)?;
                for t in &ts[1..] {
                    acc = acc.add(&self.expr(t, implicit, line)?).map_err(&eng)?;
                }
                acc
            }
            Expr::Prod(fs) => {
                let factors = fs.iter().map(|f| self.expr(f, implicit, line)).collect::<Result<Vec<_>, _>>()?;
                let mut terms: Vec<(BigUint, Vec<Atom>)> = vec![(BigUint::from(1u32), Vec::new())];
                for f in &factors {
                    let mut next = Vec::new();
                    for (c, atoms) in &terms {
                        for (a, k) in f.terms() {
                            let mut atoms = atoms.clone();
                            atoms.push(a.clone());
                            next.push((c * k, atoms));
                        }
                    }
                    terms = next;
                }
                let items = terms
                    .into_iter()
                    .map(|(c, atoms)| Ok((c, Atom::product(atoms)?)))
                    .collect::<dyndeg_core::Result<Vec<_>>>()
                    .map_err(&eng)?;
                let space = items[0].1.space();
                Correspondence::from_terms(&space, items).map_err(&eng)?
            }
        })
    }

    fn edge(&mut self, e: &EdgeDecl, comps: &[Space], line: usize) -> Result<Edge, CliError> {
        let f = self.expr(&e.expr, Some(&comps[e.from]), line)?;
        match f.single_term() {
            Some((a, c)) => Ok(Edge { from: e.from, to: e.to, atom: a.clone(), coef: c.clone() }),
            None => Err(CliError::Command { line, msg: format!("edge {}->{} must be a single term, got {f}", e.from + 1, e.to + 1) }),
        }
    }

    fn corr(&self, name: &str, line: usize) -> Result<&Correspondence, CliError> {
        self.corrs.get(name).ok_or_else(|| CliError::Unresolved { line, kind: "correspondence", name: name.into() })
    }

    fn semi(&self, name: &str, line: usize) -> Result<&SemiConjugacy, CliError> {
        self.semis.get(name).ok_or_else(|| CliError::Unresolved { line, kind: "semi-conjugacy", name: name.into() })
    }

    fn graph(&self, name: &str, line: usize) -> Result<&ComponentGraph, CliError> {
        self.graphs.get(name).ok_or_else(|| CliError::Unresolved { line, kind: "graph", name: name.into() })
    }

    fn command(&mut self, verb: Verb, raw: &[String], line: usize) -> Result<(Vec<Block>, Outcome), CliError> {
        let a = Args::new(raw, line)?;
        let s = self.settings.clone();
        let ctx = format!("cmd {}", verb.name());
        let eng = engine(line, &ctx);
        match verb {
            Verb::Degrees | Verb::Sequence => {
                a.only(&["p", "n"], 1)?;
                let target = a.positional(0, "target")?;
                let n = a.number("n", self.depth)?;
                if n == 0 {
                    return a.err("n must be positive");
                }
                let reports = if let Some(f) = self.corrs.get(target) {
                    let ps = a.range("p", f.dim())?;
                    let table = IterateTable::new(f, n, &s).map_err(&eng)?;
                    ps.iter().map(|&p| table.report(p, n)).collect::<dyndeg_core::Result<Vec<_>>>().map_err(&eng)?
                } else {
                    let g = self.graph(target, line)?;
                    let ps = a.range("p", g.dim())?;
                    ps.iter().map(|&p| g.dyn_degree(p, n, &s)).collect::<dyndeg_core::Result<Vec<_>>>().map_err(&eng)?
                };
                let label = match self.corrs.get(target) {
                    Some(f) => format!("{target} = {f}"),
                    None => format!("graph {target}"),
                };
                let blocks = if verb == Verb::Sequence {
                    reports.into_iter().map(|r| Block::Sequence { label: label.clone(), p: r.p, values: r.sequence }).collect()
                } else {
                    vec![Block::Item(Item::Degrees { label, relative: false, reports })]
                };
                Ok((blocks, Outcome::Holds))
            }
            Verb::Relative => {
                a.only(&["p", "n"], 1)?;
                let name = a.positional(0, "semi-conjugacy")?;
                let sc = self.semi(name, line)?;
                let n = a.number("n", self.depth)?;
                let ps = a.range("p", sc.relative_dim())?;
                let reports = ps.iter().map(|&p| sc.rel_dyn_degree(p, n, &s)).collect::<dyndeg_core::Result<Vec<_>>>().map_err(&eng)?;
                let blocks = vec![
                    Block::Item(Item::Note(format!("{name}: {}", sc.describe()))),
                    Block::Item(Item::Degrees { label: format!("{name}: f|pi"), relative: true, reports }),
                ];
                Ok((blocks, Outcome::Holds))
            }
            Verb::Scenario => {
                a.only(&["n"], 1)?;
                let name = a.positional(0, "scenario name")?;
                let n = a.number("n", self.depth)?;
                let names: Vec<&str> = if name == "all" { scenarios::NAMES.to_vec() } else { vec![name] };
                let mut blocks = Vec::new();
                let mut outcome = Outcome::Holds;
                for name in names {
                    let sc = scenarios::run(name, n, &s).map_err(&eng)?;
                    outcome = combine(outcome, sc.outcome());
                    blocks.push(Block::Item(Item::Note(format!("scenario {}: {}", sc.name, sc.title))));
                    blocks.extend(sc.items.into_iter().map(Block::Item));
                }
                Ok((blocks, outcome))
            }
            Verb::Verify => self.verify(&a, &s, line),
        }
    }

    fn verify(&mut self, a: &Args, s: &Settings, line: usize) -> Result<(Vec<Block>, Outcome), CliError> {
        let check = a.positional(0, "check name")?.to_string();
        let ctx = format!("cmd verify {check}");
        let eng = engine(line, &ctx);
        let n = a.number("n", self.depth)?;
        let expect = a.expect_fail()?;
        let report = match check.as_str() {
            "log_concavity" => {
                a.only(&["n", "expect"], 2)?;
                verify::check_log_concavity(self.corr(a.positional(1, "correspondence")?, line)?, n, s).map_err(&eng)?
            }
            "relative_log_concavity" => {
                a.only(&["n", "expect"], 2)?;
                verify::check_relative_log_concavity(self.semi(a.positional(1, "semi-conjugacy")?, line)?, n, s).map_err(&eng)?
            }
            "product_formula" => {
                a.only(&["n", "p", "expect"], 2)?;
                let sc = self.semi(a.positional(1, "semi-conjugacy")?, line)?;
                let ps = a.range("p", sc.x().dim())?;
                let mut r = verify::check_product_formula(sc, n, s).map_err(&eng)?;
                if !r.rows.is_empty() {
                    r.rows.retain(|row| ps.iter().any(|p| row.label == format!("p={p}")));
                    r.settle();
                }
                r
            }
            "weak_product" => {
                a.only(&["n", "expect"], 2)?;
                verify::check_weak_product(self.semi(a.positional(1, "semi-conjugacy")?, line)?, n, s).map_err(&eng)?
            }
            "weak_product_union" => {
                a.only(&["n", "expect"], usize::MAX)?;
                let parts = a.pos[1..].iter().map(|p| self.semi(p, line).cloned()).collect::<Result<Vec<_>, _>>()?;
                if parts.is_empty() {
                    return a.err("weak_product_union needs at least one semi-conjugacy");
                }
                let u = UnionSemiConjugacy::new(parts).map_err(&eng)?;
                verify::check_weak_product_union(&u, n, s).map_err(&eng)?
            }
            "triangle" => {
                a.only(&["n", "keep", "expect"], 3)?;
                let f1 = self.corr(a.positional(1, "first correspondence")?, line)?;
                let f2 = self.corr(a.positional(2, "second correspondence")?, line)?;
                let keep = a.factors("keep")?;
                verify::check_triangle(f1, f2, keep.as_deref(), n, s).map_err(&eng)?
            }
            "monotonicity" => {
                a.only(&["n", "phi", "keep1", "keep2", "expect"], 3)?;
                let f1 = self.corr(a.positional(1, "first correspondence")?, line)?;
                let f2 = self.corr(a.positional(2, "second correspondence")?, line)?;
                let Some(phi) = a.kv.get("phi") else {
                    return a.err("monotonicity needs phi=<correspondence>");
                };
                let phi = self.corr(phi, line)?;
                let (k1, k2) = (a.factors("keep1")?, a.factors("keep2")?);
                verify::check_monotonicity(f1, k1.as_deref(), f2, k2.as_deref(), phi, n, s).map_err(&eng)?
            }
            "primitivity" => {
                a.only(&["n", "expect"], 2)?;
                verify::check_primitivity(self.corr(a.positional(1, "correspondence")?, line)?, n, s).map_err(&eng)?
            }
            "obstruction" => {
                a.only(&["n", "lambda", "expect"], 2)?;
                let ls = match (a.kv.get("lambda"), a.pos.get(1)) {
                    (Some(v), None) => parse_lambdas(v).ok_or_else(|| CliError::Command { line, msg: format!("bad lambda list {v}") })?,
                    (None, Some(f)) => {
                        let f = self.corr(f, line)?;
                        let table = IterateTable::new(f, n, s).map_err(&eng)?;
                        let reps = (0..=f.dim()).map(|p| table.report(p, n)).collect::<dyndeg_core::Result<Vec<_>>>().map_err(&eng)?;
                        lambdas(&reps)
                    }
                    _ => return a.err("obstruction needs a correspondence or lambda=<list>"),
                };
                verify::check_obstruction(&ls)
            }
            "simplicity" => {
                a.only(&["m1", "m2", "expect"], 2)?;
                match (a.kv.get("m1"), a.kv.get("m2"), a.pos.get(1)) {
                    (Some(m1), Some(m2), None) => {
                        let parse = |m: &str| {
                            declared::parse_matrix(m).ok_or_else(|| CliError::Command { line, msg: format!("bad matrix literal {m}") })
                        };
                        let (m1, m2) = (parse(m1)?, parse(m2)?);
                        if !m1.is_square() || !m2.is_square() {
                            return a.err("simplicity needs square matrices");
                        }
                        verify::check_simplicity(&m1, &m2)
                    }
                    (None, None, Some(f)) => verify::check_simplicity_of(self.corr(f, line)?).map_err(&eng)?,
                    _ => return a.err("simplicity needs a correspondence or m1=<matrix> m2=<matrix>"),
                }
            }
            "submultiplicativity" | "dual_degree" => {
                a.only(&["n", "p", "expect"], 2)?;
                let f = self.corr(a.positional(1, "correspondence")?, line)?;
                let ps = a.range("p", f.dim())?;
                let mut blocks = Vec::new();
                let mut outcome = Outcome::Holds;
                for p in ps {
                    let mut r = if check == "dual_degree" {
                        verify::check_dual_degree(f, p)
                    } else {
                        verify::check_submultiplicativity(f, p, n, s)
                    }
                    .map_err(&eng)?;
                    r.expected_failure = expect && r.verdict == Verdict::Fails;
                    outcome = combine(outcome, check_outcome(&r));
                    blocks.push(Block::Item(Item::Check(r)));
                }
                return Ok((blocks, outcome));
            }
            "persistence" => {
                a.only(&["n", "expect"], 2)?;
                let name = a.positional(1, "semi-conjugacy")?;
                let sc = self.semi(name, line)?;
                let n = a.number("n", 4)?;
                let rows = sc.persistence(n, s).map_err(&eng)?;
                let first_failure = rows.iter().find(|(_, ok)| !ok).map(|(n, _)| *n);
                let lines = rows.into_iter().map(|(n, ok)| PersistenceLine { n, fixed: ok, power: ok, observed: None }).collect();
                let item = Item::Persistence {
                    label: format!("{name}: pi o f^n = a^n (g^n o pi)"),
                    multiplier: sc.multiplier().clone(),
                    lines,
                    first_failure,
                };
                return Ok((vec![Block::Item(item)], failure_outcome(first_failure, expect)));
            }
            "naive_semiconjugacy" => {
                a.only(&["n", "keep", "targets", "expect"], 3)?;
                let f = self.graph(a.positional(1, "graph")?, line)?;
                let g = self.graph(a.positional(2, "base graph")?, line)?;
                let Some(keep) = a.factors("keep")? else {
                    return a.err("naive_semiconjugacy needs keep=<i..j>");
                };
                let targets: Vec<usize> = match a.kv.get("targets") {
                    None => vec![0; f.components().len()],
                    Some(t) => t
                        .split(',')
                        .map(|x| x.parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
                        .collect::<Option<_>>()
                        .ok_or_else(|| CliError::Command { line, msg: format!("bad targets list {t}") })?,
                };
                let maps: Vec<ComponentMap> = targets.into_iter().map(|target| ComponentMap { target, keep: keep.clone() }).collect();
                let n = a.number("n", 4)?;
                let rep = check_no_naive_semiconjugacy(f, g, &maps, n, s).map_err(&eng)?;
                let lines = rep
                    .rows
                    .iter()
                    .map(|r| PersistenceLine { n: r.n, fixed: r.fixed_multiplier, power: r.power_multiplier, observed: r.observed.clone() })
                    .collect();
                let item = Item::Persistence {
                    label: "pi o f^n against a (g^n o pi) and a^n (g^n o pi)".into(),
                    multiplier: rep.multiplier,
                    lines,
                    first_failure: rep.first_failure,
                };
                return Ok((vec![Block::Item(item)], failure_outcome(rep.first_failure, expect)));
            }
            other => return a.err(format!("unknown check {other}")),
        };
        let mut report = report;
        if expect && report.verdict == Verdict::Fails {
            report.expected_failure = true;
        }
        let outcome = check_outcome(&report);
        Ok((vec![Block::Item(Item::Check(report))], outcome))
    }
}

fn failure_outcome(first_failure: Option<u32>, expect: bool) -> Outcome {
    match (first_failure, expect) {
        (None, _) => Outcome::Holds,
        (Some(_), true) => Outcome::ExpectedFailure,
        (Some(_), false) => Outcome::UnexpectedFailure,
    }
}

fn combine(a: Outcome, b: Outcome) -> Outcome {
    use Outcome::*;
    match (a, b) {
        (UnexpectedFailure, _) | (_, UnexpectedFailure) => UnexpectedFailure,
        (ExpectedFailure, _) | (_, ExpectedFailure) => ExpectedFailure,
        _ => Holds,
    }
}

/// `2,3,5` or `1,6^{1/2},6`; radicals as `r^{1/m}`.
fn parse_lambdas(v: &str) -> Option<Vec<Quantity>> {
    v.split(',')
        .map(|t| {
            if let Some((r, m)) = t.split_once("^{1/") {
                let r: Rat = r.parse().ok()?;
                let m: u32 = m.strip_suffix('}')?.parse().ok()?;
                (m >= 1 && r >= Rat::from_integer(0.into())).then(|| Quantity::Exact(AlgebraicReal::nth_root_of(&r, m)))
            } else {
                t.parse::<Rat>().ok().map(|r| Quantity::Exact(AlgebraicReal::from_rational(r)))
            }
        })
        .collect()
}
