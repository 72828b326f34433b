//! Scene files: one declaration or command per line.
//!
//! ```text
//! set char 0
//! space X = prod(P2,P1)
//! corr F = power(P2,2) + 1*diag(P2)
//! semiconj S = proj(X -> factor 2) of G
//! graph C = components(P1,P1); edge 1->2 power 2; edge 2->1 power 3
//! cmd degrees F p=0..2
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceExpr {
    Proj(u32),
    Point,
    Prod(Vec<SpaceExpr>),
    Declared(String),
    Name(String),
    /// The component space of a graph edge.
    Implicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Power(SpaceExpr, BigUint),
    RevPower(SpaceExpr, BigUint),
    Diag(SpaceExpr),
    AutSum(SpaceExpr, BigUint),
    Prod(Vec<Expr>),
    Declared(String),
    Scale(BigUint, Box<Expr>),
    Sum(Vec<Expr>),
    Rev(Box<Expr>),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub from: usize,
    pub to: usize,
    pub expr: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Degrees,
    Relative,
    Verify,
    Scenario,
    Sequence,
}

impl Verb {
    fn parse(s: &str) -> Option<Verb> {
        Some(match s {
            "degrees" => Verb::Degrees,
            "relative" => Verb::Relative,
            "verify" => Verb::Verify,
            "scenario" => Verb::Scenario,
            "sequence" => Verb::Sequence,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Verb::Degrees => "degrees",
            Verb::Relative => "relative",
            Verb::Verify => "verify",
            Verb::Scenario => "scenario",
            Verb::Sequence => "sequence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    SetChar(u32),
    Space { name: String, def: SpaceExpr },
    Corr { name: String, expr: Expr },
    SemiConj { name: String, space: SpaceExpr, first: usize, last: usize, of: Expr, onto: Option<Expr> },
    Graph { name: String, components: Vec<SpaceExpr>, edges: Vec<EdgeDecl> },
    Cmd { verb: Verb, args: Vec<String> },
}

#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub stmts: Vec<Stmt>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

impl PartialEq for Scene {
    fn eq(&self, other: &Self) -> bool {
        self.stmts == other.stmts
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigUint),
    Str(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "'{s}'"),
        }
    }
}

const SYMBOLS: &[&str] = &["->", "..", "(", ")", "[", "]", ",", "=", "+", "*", ";", "/", ":", "^", "{", "}"];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '/' | '-')
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, CliError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let end = (start..chars.len()).find(|&j| chars[j] == '"').ok_or_else(|| CliError::parse(lineno, col, "unterminated string"))?;
            out.push((Tok::Str(chars[start..end].iter().collect()), col));
            i = end + 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                if chars[i] == '.' && chars.get(i + 1) == Some(&'.') {
                    break;
                }
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let rest: String = chars[i..].iter().take(2).collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), col));
                i += s.len();
            }
            None => return Err(CliError::parse(lineno, col, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

/// Cursor over one line's tokens.
struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::parse(self.line, self.col(), msg))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), CliError> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<(), CliError> {
        if self.at_ident(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn describe(&self) -> String {
        self.peek().map_or("end of line".into(), |t| t.to_string())
    }

    fn ident(&mut self) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<BigUint, CliError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn small(&mut self) -> Result<usize, CliError> {
        let col = self.col();
        let n = self.int()?;
        usize::try_from(&n).map_err(|_| CliError::parse(self.line, col, "integer too large"))
    }

    fn path(&mut self) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected a file name, found {}", self.describe())),
        }
    }

    fn done(&self) -> Result<(), CliError> {
        if self.pos < self.toks.len() {
            return self.err(format!("unexpected {}", self.describe()));
        }
        Ok(())
    }
}

fn proj_name(s: &str) -> Option<u32> {
    let rest = s.strip_prefix('P')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn space_ref(c: &mut Cursor) -> Result<SpaceExpr, CliError> {
    let name = c.ident()?;
    if let Some(k) = proj_name(&name) {
        return Ok(SpaceExpr::Proj(k));
    }
    match name.as_str() {
        "point" => Ok(SpaceExpr::Point),
        "proj" => Ok(SpaceExpr::Proj(c.small()? as u32)),
        "prod" => {
            c.expect_sym("(")?;
            let mut fs = vec![space_ref(c)?];
            while c.at_sym(",") {
                c.next();
                fs.push(space_ref(c)?);
            }
            c.expect_sym(")")?;
            Ok(SpaceExpr::Prod(fs))
        }
        "declared" => Ok(SpaceExpr::Declared(c.path()?)),
        _ => Ok(SpaceExpr::Name(name)),
    }
}

fn expr(c: &mut Cursor, implicit: bool) -> Result<Expr, CliError> {
    let mut terms = vec![term(c, implicit)?];
    while c.at_sym("+") {
        c.next();
        terms.push(term(c, implicit)?);
    }
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
}

fn term(c: &mut Cursor, implicit: bool) -> Result<Expr, CliError> {
    if let Some(Tok::Int(_)) = c.peek() {
        let n = c.int()?;
        c.expect_sym("*")?;
        if n.is_zero() {
            return c.err("coefficients must be positive");
        }
        return Ok(Expr::Scale(n, Box::new(term(c, implicit)?)));
    }
    atom_expr(c, implicit)
}

fn atom_expr(c: &mut Cursor, implicit: bool) -> Result<Expr, CliError> {
    if c.at_sym("(") {
        c.next();
        let e = expr(c, implicit)?;
        c.expect_sym(")")?;
        return Ok(e);
    }
    let name = c.ident()?;
    let shorthand = implicit && !c.at_sym("(");
    match name.as_str() {
        "power" | "revpower" | "autsum" if shorthand => {
            let n = c.int()?;
            Ok(match name.as_str() {
                "power" => Expr::Power(SpaceExpr::Implicit, n),
                "revpower" => Expr::RevPower(SpaceExpr::Implicit, n),
                _ => Expr::AutSum(SpaceExpr::Implicit, n),
            })
        }
        "diag" if shorthand => Ok(Expr::Diag(SpaceExpr::Implicit)),
        "power" | "revpower" | "autsum" => {
            c.expect_sym("(")?;
            let s = space_ref(c)?;
            c.expect_sym(",")?;
            let n = c.int()?;
            c.expect_sym(")")?;
            Ok(match name.as_str() {
                "power" => Expr::Power(s, n),
                "revpower" => Expr::RevPower(s, n),
                _ => Expr::AutSum(s, n),
            })
        }
        "diag" => {
            c.expect_sym("(")?;
            let s = space_ref(c)?;
            c.expect_sym(")")?;
            Ok(Expr::Diag(s))
        }
        "prod" => {
            c.expect_sym("(")?;
            let mut fs = vec![expr(c, implicit)?];
            while c.at_sym(",") {
                c.next();
                fs.push(expr(c, implicit)?);
            }
            c.expect_sym(")")?;
            if fs.len() < 2 {
                return c.err("prod needs at least two factors");
            }
            Ok(Expr::Prod(fs))
        }
        "rev" => {
            c.expect_sym("(")?;
            let e = expr(c, implicit)?;
            c.expect_sym(")")?;
            Ok(Expr::Rev(Box::new(e)))
        }
        "declared" => {
            c.expect_sym("(")?;
            let p = c.path()?;
            c.expect_sym(")")?;
            Ok(Expr::Declared(p))
        }
        _ => Ok(Expr::Name(name)),
    }
}

#[derive(Default)]
struct Names {
    spaces: BTreeSet<String>,
    corrs: BTreeSet<String>,
    semis: BTreeSet<String>,
    graphs: BTreeSet<String>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

struct Checker {
    names: Names,
    characteristic: u32,
}

impl Checker {
    fn space(&self, s: &SpaceExpr, line: usize) -> Result<(), CliError> {
        match s {
            SpaceExpr::Name(n) if !self.names.spaces.contains(n) => Err(CliError::Unresolved { line, kind: "space", name: n.clone() }),
            SpaceExpr::Prod(fs) => fs.iter().try_for_each(|f| self.space(f, line)),
            _ => Ok(()),
        }
    }

    fn degree(&self, d: &BigUint, line: usize) -> Result<(), CliError> {
        if self.characteristic > 0 && (d % self.characteristic).is_zero() {
            return Err(CliError::Characteristic {
                line,
                msg: format!("degree {d} is divisible by the characteristic {}", self.characteristic),
            });
        }
        Ok(())
    }

    fn expr(&self, e: &Expr, line: usize) -> Result<(), CliError> {
        match e {
            Expr::Power(s, d) | Expr::RevPower(s, d) => {
                self.space(s, line)?;
                self.degree(d, line)
            }
            Expr::AutSum(s, _) | Expr::Diag(s) => self.space(s, line),
            Expr::Prod(fs) | Expr::Sum(fs) => fs.iter().try_for_each(|f| self.expr(f, line)),
            Expr::Scale(_, e) | Expr::Rev(e) => self.expr(e, line),
            Expr::Declared(_) => Ok(()),
            Expr::Name(n) if !self.names.corrs.contains(n) => Err(CliError::Unresolved { line, kind: "correspondence", name: n.clone() }),
            Expr::Name(_) => Ok(()),
        }
    }
}

fn declare(set: &mut BTreeSet<String>, name: &str, kind: &'static str, line: usize) -> Result<(), CliError> {
    if !set.insert(name.to_string()) {
        return Err(CliError::Duplicate { line, kind, name: name.to_string() });
    }
    Ok(())
}

pub fn parse_scene(text: &str) -> Result<Scene, CliError> {
    let mut scene = Scene::default();
    let mut ck = Checker { names: Names::default(), characteristic: 0 };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor { toks: &toks, pos: 0, line, end_col: raw.chars().count() + 1 };
        let stmt = statement(&mut c)?;
        c.done()?;
        check(&mut ck, &stmt, line)?;
        scene.stmts.push(stmt);
        scene.lines.push(line);
    }
    Ok(scene)
}

fn statement(c: &mut Cursor) -> Result<Stmt, CliError> {
    let kw = c.ident()?;
    match kw.as_str() {
        "set" => {
            c.expect_ident("char")?;
            let col = c.col();
            let p = c.small()?;
            let p = u32::try_from(p).map_err(|_| CliError::parse(c.line, col, "characteristic too large"))?;
            if p != 0 && !is_prime(p) {
                return Err(CliError::parse(c.line, col, format!("characteristic must be 0 or a prime, got {p}")));
            }
            Ok(Stmt::SetChar(p))
        }
        "space" => {
            let name = c.ident()?;
            c.expect_sym("=")?;
            Ok(Stmt::Space { name, def: space_ref(c)? })
        }
        "corr" => {
            let name = c.ident()?;
            c.expect_sym("=")?;
            Ok(Stmt::Corr { name, expr: expr(c, false)? })
        }
        "semiconj" => {
            let name = c.ident()?;
            c.expect_sym("=")?;
            c.expect_ident("proj")?;
            c.expect_sym("(")?;
            let space = space_ref(c)?;
            c.expect_sym("->")?;
            c.expect_ident("factor")?;
            let col = c.col();
            let first = c.small()?;
            let last = if c.at_sym("..") {
                c.next();
                c.small()?
            } else {
                first
            };
            if first == 0 || last < first {
                return Err(CliError::parse(c.line, col, "factor range must be 1-based and increasing"));
            }
            c.expect_sym(")")?;
            c.expect_ident("of")?;
            let of = expr(c, false)?;
            let onto = if c.at_ident("onto") {
                c.next();
                Some(expr(c, false)?)
            } else {
                None
            };
            Ok(Stmt::SemiConj { name, space, first, last, of, onto })
        }
        "graph" => {
            let name = c.ident()?;
            c.expect_sym("=")?;
            c.expect_ident("components")?;
            c.expect_sym("(")?;
            let mut components = vec![space_ref(c)?];
            while c.at_sym(",") {
                c.next();
                components.push(space_ref(c)?);
            }
            c.expect_sym(")")?;
            let mut edges = Vec::new();
            while c.at_sym(";") {
                c.next();
                c.expect_ident("edge")?;
                let col = c.col();
                let from = c.small()?;
                c.expect_sym("->")?;
                let to = c.small()?;
                if from == 0 || to == 0 || from > components.len() || to > components.len() {
                    return Err(CliError::parse(c.line, col, format!("edge {from}->{to} names a missing component")));
                }
                edges.push(EdgeDecl { from: from - 1, to: to - 1, expr: expr(c, true)? });
            }
            Ok(Stmt::Graph { name, components, edges })
        }
        "cmd" => {
            let col = c.col();
            let v = c.ident()?;
            let verb = Verb::parse(&v).ok_or_else(|| {
                CliError::parse(c.line, col, format!("unknown verb '{v}'; expected degrees, relative, verify, scenario or sequence"))
            })?;
            let mut args = Vec::new();
            while c.peek().is_some() {
                args.push(arg(c)?);
            }
            Ok(Stmt::Cmd { verb, args })
        }
        _ => Err(CliError::parse(c.line, 1, format!("unknown statement '{kw}'"))),
    }
}

/// One command argument: adjacent tokens rejoined; brackets may span spaces.
fn arg(c: &mut Cursor) -> Result<String, CliError> {
    let mut s = String::new();
    let mut next_col = None;
    let mut depth = 0i32;
    while let Some((t, col)) = c.toks.get(c.pos) {
        if depth == 0 && next_col.is_some_and(|n| n != *col) {
            break;
        }
        let text = match t {
            Tok::Ident(x) => x.clone(),
            Tok::Int(n) => n.to_string(),
            Tok::Str(x) => format!("\"{x}\""),
            Tok::Sym(x) => x.to_string(),
        };
        match text.as_str() {
            "[" | "(" => depth += 1,
            "]" | ")" => depth -= 1,
            _ => {}
        }
        next_col = Some(col + text.chars().count());
        s.push_str(&text);
        c.pos += 1;
    }
    if depth != 0 {
        return c.err("unbalanced brackets in argument");
    }
    Ok(s)
}

fn check(ck: &mut Checker, s: &Stmt, line: usize) -> Result<(), CliError> {
    match s {
        Stmt::SetChar(p) => ck.characteristic = *p,
        Stmt::Space { name, def } => {
            ck.space(def, line)?;
            declare(&mut ck.names.spaces, name, "space", line)?;
        }
        Stmt::Corr { name, expr } => {
            ck.expr(expr, line)?;
            declare(&mut ck.names.corrs, name, "correspondence", line)?;
        }
        Stmt::SemiConj { name, space, of, onto, .. } => {
            ck.space(space, line)?;
            ck.expr(of, line)?;
            if let Some(g) = onto {
                ck.expr(g, line)?;
            }
            declare(&mut ck.names.semis, name, "semi-conjugacy", line)?;
        }
        Stmt::Graph { name, components, edges } => {
            for sp in components {
                ck.space(sp, line)?;
            }
            for e in edges {
                ck.expr(&e.expr, line)?;
            }
            declare(&mut ck.names.graphs, name, "graph", line)?;
        }
        Stmt::Cmd { verb: Verb::Verify, args } => {
            for a in args.iter().skip(1).filter(|a| !a.contains('=')) {
                let n = &ck.names;
                if !(n.corrs.contains(a) || n.semis.contains(a) || n.graphs.contains(a)) {
                    return Err(CliError::Unresolved { line, kind: "name", name: a.clone() });
                }
            }
        }
        Stmt::Cmd { verb, args } => {
            if *verb != Verb::Scenario {
                let Some(target) = args.first() else {
                    return Err(CliError::Command { line, msg: format!("{} needs a target", verb.name()) });
                };
                let known = match verb {
                    Verb::Relative => ck.names.semis.contains(target),
                    _ => ck.names.corrs.contains(target) || ck.names.graphs.contains(target),
                };
                if !known {
                    return Err(CliError::Unresolved { line, kind: "target", name: target.clone() });
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Proj(k) => write!(f, "P{k}"),
            SpaceExpr::Point => write!(f, "point"),
            SpaceExpr::Prod(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "prod({})", parts.join(","))
            }
            SpaceExpr::Declared(p) => write!(f, "declared {}", quote(p)),
            SpaceExpr::Name(n) => write!(f, "{n}"),
            SpaceExpr::Implicit => Ok(()),
        }
    }
}

fn quote(p: &str) -> String {
    let plain = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && p.chars().all(is_ident_char)
        && !p.contains("->")
        && !p.contains("..");
    if plain {
        p.to_string()
    } else {
        format!("\"{p}\"")
    }
}

fn with_space(f: &mut fmt::Formatter<'_>, head: &str, s: &SpaceExpr, n: Option<&BigUint>) -> fmt::Result {
    match (s, n) {
        (SpaceExpr::Implicit, Some(n)) => write!(f, "{head} {n}"),
        (SpaceExpr::Implicit, None) => write!(f, "{head}"),
        (_, Some(n)) => write!(f, "{head}({s},{n})"),
        (_, None) => write!(f, "{head}({s})"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Power(s, d) => with_space(f, "power", s, Some(d)),
            Expr::RevPower(s, d) => with_space(f, "revpower", s, Some(d)),
            Expr::AutSum(s, c) => with_space(f, "autsum", s, Some(c)),
            Expr::Diag(s) => with_space(f, "diag", s, None),
            Expr::Prod(fs) => {
                let parts: Vec<String> = fs.iter().map(|e| e.to_string()).collect();
                write!(f, "prod({})", parts.join(","))
            }
            Expr::Declared(p) => write!(f, "declared({})", quote(p)),
            Expr::Scale(c, e) => match **e {
                Expr::Sum(_) => write!(f, "{c}*({e})"),
                _ => write!(f, "{c}*{e}"),
            },
            Expr::Sum(ts) => {
                let parts: Vec<String> =
                    ts.iter().map(|t| if matches!(t, Expr::Sum(_)) { format!("({t})") } else { t.to_string() }).collect();
                write!(f, "{}", parts.join(" + "))
            }
            Expr::Rev(e) => write!(f, "rev({e})"),
            Expr::Name(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::SetChar(p) => write!(f, "set char {p}"),
            Stmt::Space { name, def } => match def {
                SpaceExpr::Proj(k) => write!(f, "space {name} = proj {k}"),
                _ => write!(f, "space {name} = {def}"),
            },
            Stmt::Corr { name, expr } => write!(f, "corr {name} = {expr}"),
            Stmt::SemiConj { name, space, first, last, of, onto } => {
                let range = if first == last { first.to_string() } else { format!("{first}..{last}") };
                write!(f, "semiconj {name} = proj({space} -> factor {range}) of {of}")?;
                if let Some(g) = onto {
                    write!(f, " onto {g}")?;
                }
                Ok(())
            }
            Stmt::Graph { name, components, edges } => {
                let comps: Vec<String> = components.iter().map(|s| s.to_string()).collect();
                write!(f, "graph {name} = components({})", comps.join(","))?;
                for e in edges {
                    write!(f, "; edge {}->{} {}", e.from + 1, e.to + 1, e.expr)?;
                }
                Ok(())
            }
            Stmt::Cmd { verb, args } => {
                write!(f, "cmd {}", verb.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_lines() {
        let s = parse_scene("corr F = power(P2,2) + 1*diag(P2)\nspace X = prod(P2,P1)\n").unwrap();
        assert_eq!(
            s.stmts[0],
            Stmt::Corr {
                name: "F".into(),
                expr: Expr::Sum(vec![
                    Expr::Power(SpaceExpr::Proj(2), 2u32.into()),
                    Expr::Scale(1u32.into(), Box::new(Expr::Diag(SpaceExpr::Proj(2)))),
                ]),
            }
        );
        assert_eq!(s.stmts[1], Stmt::Space { name: "X".into(), def: SpaceExpr::Prod(vec![SpaceExpr::Proj(2), SpaceExpr::Proj(1)]) });
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_scene("corr F = power(P2,2) +\n").unwrap_err();
        assert_eq!(e.to_string(), "line 1, column 23: expected a name, found end of line");
        let e = parse_scene("\ncorr F = power(P2 2)").unwrap_err();
        assert_eq!(e.to_string(), "line 2, column 19: expected ',', found '2'");
        let e = parse_scene("corr F = G").unwrap_err();
        assert!(e.to_string().contains("unresolved correspondence G"));
        let e = parse_scene("set char 3\ncorr F = power(P2,6)").unwrap_err();
        assert!(e.to_string().contains("characteristic"));
        assert!(parse_scene("set char 4").is_err());
        assert!(parse_scene("corr F = diag(P1)\ncorr F = diag(P2)").is_err());
    }

    #[test]
    fn graph_and_commands() {
        let text = "graph G = components(P1,P1); edge 1->2 power 2; edge 2->1 power 3\ncmd degrees G p=0..1 n=10\ncorr F = prod(power(P2,2),power(P1,3))\nsemiconj S = proj(prod(P2,P1) -> factor 2) of F\ncmd verify product_formula S p=0..3\n";
        let s = parse_scene(text).unwrap();
        let Stmt::Graph { edges, .. } = &s.stmts[0] else { panic!() };
        assert_eq!(edges[1], EdgeDecl { from: 1, to: 0, expr: Expr::Power(SpaceExpr::Implicit, 3u32.into()) });
        assert_eq!(s.stmts[1], Stmt::Cmd { verb: Verb::Degrees, args: vec!["G".into(), "p=0..1".into(), "n=10".into()] });
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn round_trip() {
        let text = "set char 0\nspace X = proj 2\nspace Y = prod(X,P1)\ncorr F = 2*(power(X,2) + diag(X)) + rev(revpower(P2,3))\ncorr B = declared(\"dir/b.atom\")\nsemiconj S = proj(Y -> factor 1..1) of prod(F,diag(P1))\n";
        let s = parse_scene(text).unwrap();
        let again = parse_scene(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }
}
