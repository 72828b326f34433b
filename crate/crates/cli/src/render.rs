//! Table, csv and records output. Every format is a pure function of the sections.

use std::fmt::Write as _;

use dyndeg_core::arith::rat_to_f64;
use dyndeg_core::degree::{DegreeReport, Extraction};
use dyndeg_core::scenarios::{Item, PathLine, PersistenceLine};
use dyndeg_core::verify::{CheckReport, Quantity, Row, Verdict};
use num_bigint::BigUint;

use crate::eval::{Block, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Records,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub format: Format,
    pub approx: bool,
}

const DIGITS: usize = 6;

impl Style {
    fn q(&self, q: &Quantity) -> String {
        match q {
            Quantity::Exact(a) if self.approx && !a.as_rational().is_some_and(|r| r.is_integer()) => {
                format!("{q} (~{})", a.approx_string(DIGITS))
            }
            _ => q.to_string(),
        }
    }
}

pub fn render(sections: &[Section], style: Style) -> String {
    match style.format {
        Format::Table => table(sections, style),
        Format::Csv => csv_text(&records(sections, style)),
        Format::Records => records_text(&records(sections, style)),
    }
}

fn extraction(r: &DegreeReport) -> &'static str {
    match r.extraction {
        Extraction::Recurrence { .. } => "recurrence",
        Extraction::BirationalWalk => "birational-walk",
        Extraction::Estimate => "estimate",
    }
}

fn lambda(r: &DegreeReport, style: Style) -> String {
    style.q(&Quantity::from_report(r))
}

fn verdict(v: &Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Inconclusive(_) => "inconclusive",
    }
}

fn outcome(o: Option<bool>) -> &'static str {
    match o {
        Some(true) => "ok",
        Some(false) => "fails",
        None => "estimate",
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fekete(r: &DegreeReport) -> String {
    r.fekete_upper.as_ref().map_or("-".into(), |f| f.to_string())
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

// ---- table ----

fn table(sections: &[Section], style: Style) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "== {} ==", s.command);
        for b in &s.blocks {
            match b {
                Block::Item(item) => table_item(&mut out, item, style),
                Block::Sequence { label, p, values } => {
                    let _ = writeln!(out, "{label}: deg_{p}(F^n), n = 1..{}: {}", values.len(), join(values, " "));
                }
            }
        }
    }
    out
}

fn grid(out: &mut String, head: &[String], rows: &[Vec<String>]) {
    let mut w: Vec<usize> = head.iter().map(String::len).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:>width$}", width = w[i])).collect();
        format!("  {}", parts.join("  "))
    };
    let _ = writeln!(out, "{}", line(head));
    for r in rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

fn table_item(out: &mut String, item: &Item, style: Style) {
    match item {
        Item::Degrees { label, relative, reports } => {
            let prefix = if *relative { "rdeg" } else { "deg" };
            let _ = writeln!(out, "{label}");
            let n = reports.iter().map(|r| r.sequence.len()).max().unwrap_or(0);
            let mut head = vec!["n".to_string()];
            head.extend(reports.iter().map(|r| format!("{prefix}_{}", r.p)));
            let rows: Vec<Vec<String>> = (0..n)
                .map(|i| {
                    let mut row = vec![(i + 1).to_string()];
                    row.extend(reports.iter().map(|r| r.sequence.get(i).map_or("-".into(), |v| v.to_string())));
                    row
                })
                .collect();
            grid(out, &head, &rows);
            for r in reports {
                let bound = match &r.fekete_upper {
                    Some(f) if f.is_integer() => format!("; fekete <= {f}"),
                    Some(f) if style.approx => format!("; fekete <= ~{:.*}", DIGITS, rat_to_f64(f)),
                    _ => String::new(),
                };
                let _ =
                    writeln!(out, "  lambda_{} = {}  [{}{bound}; converged: {}]", r.p, lambda(r, style), extraction(r), yes(r.converged));
                for a in &r.stability_assertions {
                    let _ = writeln!(out, "    assumes: {a}");
                }
                for note in &r.notes {
                    let _ = writeln!(out, "    note: {note}");
                }
            }
        }
        Item::Lambdas { label, values } => {
            let vs: Vec<String> = values.iter().map(|q| style.q(q)).collect();
            let _ = writeln!(out, "{label}: lambda = ({})", vs.join(", "));
        }
        Item::Check(c) => table_check(out, c, style),
        Item::Paths { label, lines } => {
            let _ = writeln!(out, "{label}: {} composable paths", lines.len());
            for l in lines {
                let _ = writeln!(out, "  {}", path_text(l));
            }
        }
        Item::Persistence { label, multiplier, lines, first_failure } => {
            let _ = writeln!(out, "{label}, a = {multiplier}");
            let head: Vec<String> = ["n", "a", "a^n", "observed"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = lines.iter().map(persistence_cells).collect();
            grid(out, &head, &rows);
            match first_failure {
                Some(n) => {
                    let _ = writeln!(out, "  first failure: n = {n}");
                }
                None => {
                    let _ = writeln!(out, "  no failure up to n = {}", lines.len());
                }
            }
        }
        Item::Note(t) => {
            let _ = writeln!(out, "{t}");
        }
    }
}

fn path_text(l: &PathLine) -> String {
    format!("{} * {}  (components {})  = {}", l.coef, l.word, join(&l.components, " -> "), l.atom)
}

fn persistence_cells(l: &PersistenceLine) -> Vec<String> {
    vec![
        l.n.to_string(),
        if l.fixed { "holds" } else { "fails" }.into(),
        if l.power { "holds" } else { "fails" }.into(),
        l.observed.as_ref().map_or("-".into(), BigUint::to_string),
    ]
}

fn side(name: &str, value: String) -> String {
    if name == value {
        value
    } else {
        format!("{name} = {value}")
    }
}

fn row_text(r: &Row, style: Style) -> String {
    format!(
        "{}: {} {} {}  [{}]",
        r.label,
        side(&r.left_name, style.q(&r.left)),
        r.relation.symbol(),
        side(&r.right_name, style.q(&r.right)),
        outcome(r.outcome)
    )
}

fn table_check(out: &mut String, c: &CheckReport, style: Style) {
    let _ = writeln!(out, "{}", c.summary());
    let _ = writeln!(out, "  inputs: {}", c.inputs);
    for r in &c.rows {
        let _ = writeln!(out, "  {}", row_text(r, style));
    }
    for (name, v) in &c.values {
        let _ = writeln!(out, "  {name} = {}", style.q(v));
    }
    if let Some(cert) = &c.certificate {
        let _ = writeln!(out, "  certificate: {cert}");
    }
    for n in &c.notes {
        let _ = writeln!(out, "  note: {n}");
    }
}

// ---- records ----

/// One output record: a kind and fields in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: &'static str,
    pub fields: Vec<(&'static str, String)>,
}

fn rec(kind: &'static str, fields: Vec<(&'static str, String)>) -> Record {
    Record { kind, fields }
}

pub fn records(sections: &[Section], style: Style) -> Vec<Record> {
    let mut out = Vec::new();
    for s in sections {
        let cmd = s.line.to_string();
        out.push(rec("command", vec![("line", cmd.clone()), ("text", s.command.clone())]));
        for b in &s.blocks {
            match b {
                Block::Item(item) => item_records(&mut out, &cmd, item, style),
                Block::Sequence { label, p, values } => {
                    for (i, v) in values.iter().enumerate() {
                        out.push(rec(
                            "sequence",
                            vec![
                                ("line", cmd.clone()),
                                ("label", label.clone()),
                                ("p", p.to_string()),
                                ("n", (i + 1).to_string()),
                                ("value", v.to_string()),
                            ],
                        ));
                    }
                }
            }
        }
        let outcome = match s.outcome {
            dyndeg_core::scenarios::Outcome::Holds => "holds",
            dyndeg_core::scenarios::Outcome::ExpectedFailure => "expected-failure",
            dyndeg_core::scenarios::Outcome::UnexpectedFailure => "unexpected-failure",
        };
        out.push(rec("outcome", vec![("line", cmd), ("value", outcome.into())]));
    }
    out
}

fn item_records(out: &mut Vec<Record>, cmd: &str, item: &Item, style: Style) {
    let line = || ("line", cmd.to_string());
    match item {
        Item::Degrees { label, relative, reports } => {
            let kind = if *relative { "relative" } else { "degree" };
            for r in reports {
                for (i, v) in r.sequence.iter().enumerate() {
                    out.push(rec(
                        kind,
                        vec![
                            line(),
                            ("label", label.clone()),
                            ("p", r.p.to_string()),
                            ("n", (i + 1).to_string()),
                            ("value", v.to_string()),
                        ],
                    ));
                }
                out.push(rec(
                    "lambda",
                    vec![
                        line(),
                        ("label", label.clone()),
                        ("relative", relative.to_string()),
                        ("p", r.p.to_string()),
                        ("value", lambda(r, style)),
                        ("exact", r.is_exact().to_string()),
                        ("extraction", extraction(r).into()),
                        ("fekete_upper", fekete(r)),
                        ("converged", r.converged.to_string()),
                    ],
                ));
            }
        }
        Item::Lambdas { label, values } => {
            for (p, q) in values.iter().enumerate() {
                out.push(rec(
                    "lambda",
                    vec![
                        line(),
                        ("label", label.clone()),
                        ("relative", "false".into()),
                        ("p", p.to_string()),
                        ("value", style.q(q)),
                        ("exact", q.is_exact().to_string()),
                        ("extraction", "-".into()),
                        ("fekete_upper", "-".into()),
                        ("converged", "-".into()),
                    ],
                ));
            }
        }
        Item::Check(c) => {
            let reason = match &c.verdict {
                Verdict::Inconclusive(why) => why.clone(),
                _ => String::new(),
            };
            out.push(rec(
                "check",
                vec![
                    line(),
                    ("name", c.name.clone()),
                    ("verdict", verdict(&c.verdict).into()),
                    ("expected_failure", c.expected_failure.to_string()),
                    ("summary", c.summary()),
                    ("reason", reason),
                    ("inputs", c.inputs.clone()),
                ],
            ));
            for r in &c.rows {
                out.push(rec(
                    "row",
                    vec![
                        line(),
                        ("check", c.name.clone()),
                        ("label", r.label.clone()),
                        ("left_name", r.left_name.clone()),
                        ("left", style.q(&r.left)),
                        ("relation", r.relation.symbol().into()),
                        ("right_name", r.right_name.clone()),
                        ("right", style.q(&r.right)),
                        ("outcome", outcome(r.outcome).into()),
                    ],
                ));
            }
            for (name, v) in &c.values {
                out.push(rec("value", vec![line(), ("check", c.name.clone()), ("name", name.clone()), ("value", style.q(v))]));
            }
            if let Some(cert) = &c.certificate {
                out.push(rec("certificate", vec![line(), ("check", c.name.clone()), ("text", cert.clone())]));
            }
            for n in &c.notes {
                out.push(rec("note", vec![line(), ("text", n.clone())]));
            }
        }
        Item::Paths { label, lines } => {
            for l in lines {
                out.push(rec(
                    "path",
                    vec![
                        line(),
                        ("label", label.clone()),
                        ("coef", l.coef.to_string()),
                        ("word", l.word.clone()),
                        ("components", join(&l.components, "->")),
                        ("atom", l.atom.to_string()),
                    ],
                ));
            }
        }
        Item::Persistence { label, multiplier, lines, first_failure } => {
            for l in lines {
                let cells = persistence_cells(l);
                out.push(rec(
                    "persistence",
                    vec![
                        line(),
                        ("label", label.clone()),
                        ("multiplier", multiplier.to_string()),
                        ("n", cells[0].clone()),
                        ("fixed", cells[1].clone()),
                        ("power", cells[2].clone()),
                        ("observed", cells[3].clone()),
                    ],
                ));
            }
            let ff = first_failure.map_or("-".into(), |n| n.to_string());
            out.push(rec("first_failure", vec![line(), ("label", label.clone()), ("n", ff)]));
        }
        Item::Note(t) => out.push(rec("note", vec![line(), ("text", t.clone())])),
    }
}

fn quote(v: &str) -> String {
    let plain = !v.is_empty() && !v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '\\');
    if plain {
        return v.to_string();
    }
    let mut s = String::from("\"");
    for c in v.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    s
}

pub fn records_text(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(r.kind);
        for (k, v) in &r.fields {
            let _ = write!(out, " {k}={}", quote(v));
        }
        out.push('\n');
    }
    out
}

/// Comma-separated rows; a header row precedes each run of one record kind.
pub fn csv_text(records: &[Record]) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let mut last: Option<&'static str> = None;
    for r in records {
        if last != Some(r.kind) {
            let mut head = vec!["kind"];
            head.extend(r.fields.iter().map(|(k, _)| *k));
            w.write_record(&head).expect("in-memory write");
            last = Some(r.kind);
        }
        let mut row = vec![r.kind.to_string()];
        row.extend(r.fields.iter().map(|(_, v)| v.clone()));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_quote_values() {
        let r = vec![rec("note", vec![("line", "3".into()), ("text", "a \"b\" = c".into())])];
        assert_eq!(records_text(&r), "note line=3 text=\"a \\\"b\\\" = c\"\n");
    }

    #[test]
    fn csv_headers_per_run() {
        let r = vec![rec("a", vec![("x", "1".into())]), rec("a", vec![("x", "2,3".into())]), rec("b", vec![("y", "4".into())])];
        assert_eq!(csv_text(&r), "kind,x\na,1\na,\"2,3\"\nkind,y\nb,4\n");
    }
}
