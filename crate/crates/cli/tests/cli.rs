use std::path::Path;
use std::process::{Command, Output};

use dyndeg::scene::{EdgeDecl, Expr, SpaceExpr, Stmt, Verb};
use dyndeg::{parse_scene, Scene};
use num_bigint::BigUint;
use proptest::prelude::*;

fn dyndeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyndeg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scene_file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn expected_failures_exit_two() {
    let o = dyndeg(&["scenario", "example3"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("log-concavity: FAILS (9 < 10), expected"), "{out}");
}

#[test]
fn holding_scenario_exits_zero() {
    let o = dyndeg(&["scenario", "product-p2xp1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("product formula: HOLDS"));
}

#[test]
fn malformed_scene_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = scene_file(dir.path(), "bad.scene", "corr F = power(P2,2)\ncorr G = power(P2 2)\n");
    let o = dyndeg(&[&f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column 19"), "{}", stderr(&o));
    let f = scene_file(dir.path(), "unresolved.scene", "cmd degrees H n=4\n");
    let o = dyndeg(&[&f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1: unresolved target H"), "{}", stderr(&o));
}

#[test]
fn unexpected_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = scene_file(dir.path(), "f.scene", "corr F = power(P2,2) + diag(P2)\ncmd verify log_concavity F\n");
    let o = dyndeg(&[&f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("log-concavity: FAILS (9 < 10)"));
    assert!(stderr(&o).contains("without expect=fail"));
}

#[test]
fn output_before_an_error_is_kept() {
    let dir = tempfile::tempdir().unwrap();
    let f = scene_file(dir.path(), "f.scene", "corr F = power(P1,2)\ncmd degrees F n=3\ncorr B = declared(missing.atom)\ncmd degrees B\n");
    let o = dyndeg(&[&f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("== cmd degrees F n=3 =="), "{}", stdout(&o));
    assert!(stderr(&o).contains("missing.atom"), "{}", stderr(&o));
}

#[test]
fn csv_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let f = scene_file(dir.path(), "f.scene", "corr F = power(P2,2) + diag(P2)\ncmd degrees F p=1 n=4\n");
    let o = dyndeg(&[&f, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::ReaderBuilder::new().flexible(true).has_headers(false).from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let degrees: Vec<Vec<&str>> = rows.iter().filter(|r| &r[0] == "degree").map(|r| r.iter().collect()).collect();
    assert_eq!(degrees.len(), 4);
    for (i, r) in degrees.iter().enumerate() {
        assert_eq!(r[2], "F = diag(P2) + power(P2,2)");
        assert_eq!(r[5], 3u32.pow(i as u32 + 1).to_string());
    }
    assert!(rows.iter().any(|r| r.iter().collect::<Vec<_>>() == ["kind", "line", "label", "p", "n", "value"]));

    let o = dyndeg(&[&f, "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for n in 1..=4u32 {
        let want = format!("n={n} value={}", 3u32.pow(n));
        assert!(out.lines().any(|l| l.starts_with("degree ") && l.contains("p=1") && l.contains(&want)), "{out}");
    }
    assert!(out.lines().any(|l| l.starts_with("lambda ") && l.contains("value=3 exact=true")), "{out}");
}

#[test]
fn decimals_only_with_approx() {
    let decimal = |s: &str| s.as_bytes().windows(3).any(|w| w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit());
    let plain = stdout(&dyndeg(&["scenario", "all"]));
    assert!(!decimal(&plain), "{plain}");
    let approx = stdout(&dyndeg(&["scenario", "product-p2xp1", "--approx"]));
    assert!(approx.contains("~2.449490"), "{approx}");
}

#[test]
fn declared_files_relative_to_scene() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("b.atom"),
        "family b\nspace P3\nflags birational reversible\nmatrix 1 [[3]]\nmatrix 2 [[3]]\nmatrix 3 [[1]]\n",
    )
    .unwrap();
    let f = scene_file(dir.path(), "b.scene", "corr B = declared(b.atom)\ncorr S = B + rev(B)\ncmd degrees S p=1 n=10\n");
    let o = dyndeg(&[&f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("10/3"), "{}", stdout(&o));
}

#[test]
fn canonical_form_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let text = "space  X = prod( P2 ,P1 )\ncorr F=prod(power(P2,2),power(P1,3))  # comment\nsemiconj S = proj(X->factor 2) of F\n";
    let f = scene_file(dir.path(), "c.scene", text);
    let o = dyndeg(&[&f, "--canonical"]);
    assert_eq!(o.status.code(), Some(0));
    let canon = stdout(&o);
    assert_eq!(parse_scene(&canon).unwrap(), parse_scene(text).unwrap());
}

fn n(x: u32) -> BigUint {
    BigUint::from(x)
}

fn space() -> impl Strategy<Value = SpaceExpr> {
    let proj = (1u32..4).prop_map(SpaceExpr::Proj);
    prop_oneof![
        3 => proj.clone(),
        1 => Just(SpaceExpr::Point),
        1 => proptest::collection::vec(proj, 2..4).prop_map(SpaceExpr::Prod),
    ]
}

/// `implicit` marks graph edges, where the space may be left out.
fn expr(implicit: bool) -> impl Strategy<Value = Expr> {
    let sp = move || if implicit { prop_oneof![Just(SpaceExpr::Implicit), space()].boxed() } else { space().boxed() };
    let deg = prop_oneof![Just(2u32), Just(3), Just(4), Just(7), Just(9)].prop_map(n);
    let leaf = prop_oneof![
        (sp(), deg.clone()).prop_map(|(s, d)| Expr::Power(s, d)),
        (sp(), deg).prop_map(|(s, d)| Expr::RevPower(s, d)),
        sp().prop_map(Expr::Diag),
        (sp(), (1u32..5).prop_map(n)).prop_map(|(s, c)| Expr::AutSum(s, c)),
        "[a-z]{1,6}\\.atom".prop_map(Expr::Declared),
        "[A-Z][a-z0-9]{0,2}".prop_map(Expr::Name),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Expr::Prod),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Expr::Sum),
            ((1u32..7).prop_map(n), inner.clone()).prop_map(|(c, e)| Expr::Scale(c, Box::new(e))),
            inner.prop_map(|e| Expr::Rev(Box::new(e))),
        ]
    })
}

#[derive(Debug, Clone)]
enum Draft {
    Char(u32),
    Space(SpaceExpr),
    Corr(Expr),
    SemiConj(SpaceExpr, usize, usize, Expr, Option<Expr>),
    Graph(Vec<SpaceExpr>, Vec<(usize, usize, Expr)>),
    Degrees(usize, String),
    Verify(&'static str, usize, bool),
}

fn draft() -> impl Strategy<Value = Draft> {
    prop_oneof![
        1 => prop_oneof![Just(0u32), Just(7), Just(11)].prop_map(Draft::Char),
        2 => space().prop_map(Draft::Space),
        4 => expr(false).prop_map(Draft::Corr),
        1 => (space(), 1usize..3, 0usize..2, expr(false), proptest::option::of(expr(false)))
            .prop_map(|(s, a, w, of, onto)| Draft::SemiConj(s, a, a + w, of, onto)),
        1 => (proptest::collection::vec(space(), 1..4), proptest::collection::vec((0usize..3, 0usize..3, expr(true)), 0..4))
            .prop_map(|(c, e)| Draft::Graph(c, e)),
        2 => (0usize..8, prop_oneof![Just(String::new()), Just("p=0..1".into()), Just("n=10".into()), Just("p=1 n=6".into())])
            .prop_map(|(i, a)| Draft::Degrees(i, a)),
        2 => (prop_oneof![Just("log_concavity"), Just("primitivity"), Just("dual_degree")], 0usize..8, any::<bool>())
            .prop_map(|(c, i, e)| Draft::Verify(c, i, e)),
    ]
}

/// Rewrites names so every reference resolves to an earlier declaration.
fn resolve_expr(e: Expr, corrs: &[String], spaces: &[String]) -> Expr {
    let sp = |s: SpaceExpr| match (s, spaces.is_empty()) {
        (SpaceExpr::Proj(3), false) => SpaceExpr::Name(spaces[0].clone()),
        (s, _) => s,
    };
    match e {
        Expr::Name(x) if corrs.is_empty() => Expr::Diag(SpaceExpr::Proj(x.len() as u32)),
        Expr::Name(x) => Expr::Name(corrs[x.len() % corrs.len()].clone()),
        Expr::Power(s, d) => Expr::Power(sp(s), d),
        Expr::RevPower(s, d) => Expr::RevPower(sp(s), d),
        Expr::Diag(s) => Expr::Diag(sp(s)),
        Expr::AutSum(s, c) => Expr::AutSum(sp(s), c),
        Expr::Prod(fs) => Expr::Prod(fs.into_iter().map(|f| resolve_expr(f, corrs, spaces)).collect()),
        Expr::Sum(fs) => Expr::Sum(fs.into_iter().map(|f| resolve_expr(f, corrs, spaces)).collect()),
        Expr::Scale(c, e) => Expr::Scale(c, Box::new(resolve_expr(*e, corrs, spaces))),
        Expr::Rev(e) => Expr::Rev(Box::new(resolve_expr(*e, corrs, spaces))),
        e => e,
    }
}

fn build(drafts: Vec<Draft>) -> Scene {
    let (mut spaces, mut corrs, mut semis, mut graphs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut stmts = Vec::new();
    for d in drafts {
        let stmt = match d {
            Draft::Char(p) => Stmt::SetChar(p),
            Draft::Space(def) => {
                let name = format!("X{}", spaces.len());
                spaces.push(name.clone());
                Stmt::Space { name, def }
            }
            Draft::Corr(e) => {
                let expr = resolve_expr(e, &corrs, &spaces);
                let name = format!("F{}", corrs.len());
                corrs.push(name.clone());
                Stmt::Corr { name, expr }
            }
            Draft::SemiConj(space, first, last, of, onto) => {
                let name = format!("S{}", semis.len());
                semis.push(name.clone());
                let of = resolve_expr(of, &corrs, &spaces);
                let onto = onto.map(|g| resolve_expr(g, &corrs, &spaces));
                Stmt::SemiConj { name, space, first, last, of, onto }
            }
            Draft::Graph(components, edges) => {
                let k = components.len();
                let edges = edges
                    .into_iter()
                    .map(|(a, b, e)| EdgeDecl { from: a % k, to: b % k, expr: resolve_expr(e, &corrs, &spaces) })
                    .collect();
                let name = format!("G{}", graphs.len());
                graphs.push(name.clone());
                Stmt::Graph { name, components, edges }
            }
            Draft::Degrees(i, extra) => {
                let targets: Vec<&String> = corrs.iter().chain(&graphs).collect();
                if targets.is_empty() {
                    Stmt::Cmd { verb: Verb::Scenario, args: vec!["example3".into()] }
                } else {
                    let mut args = vec![targets[i % targets.len()].clone()];
                    args.extend(extra.split_whitespace().map(String::from));
                    Stmt::Cmd { verb: Verb::Degrees, args }
                }
            }
            Draft::Verify(check, i, expect) => {
                if corrs.is_empty() {
                    Stmt::Cmd { verb: Verb::Scenario, args: vec!["all".into(), "n=6".into()] }
                } else {
                    let mut args = vec![check.to_string(), corrs[i % corrs.len()].clone()];
                    if expect {
                        args.push("expect=fail".into());
                    }
                    Stmt::Cmd { verb: Verb::Verify, args }
                }
            }
        };
        stmts.push(stmt);
    }
    // Degrees must avoid the characteristic in force when they are read.
    let mut p = 0;
    for s in &mut stmts {
        match s {
            Stmt::SetChar(c) => p = *c,
            Stmt::Corr { expr, .. } => avoid_characteristic(expr, p),
            Stmt::SemiConj { of, onto, .. } => {
                avoid_characteristic(of, p);
                if let Some(g) = onto {
                    avoid_characteristic(g, p);
                }
            }
            Stmt::Graph { edges, .. } => edges.iter_mut().for_each(|e| avoid_characteristic(&mut e.expr, p)),
            _ => {}
        }
    }
    let lines = (1..=stmts.len()).collect();
    Scene { stmts, lines }
}

fn avoid_characteristic(e: &mut Expr, p: u32) {
    match e {
        Expr::Power(_, d) | Expr::RevPower(_, d) if p > 0 && (&*d % p) == n(0) => *d += 1u32,
        Expr::Prod(fs) | Expr::Sum(fs) => fs.iter_mut().for_each(|f| avoid_characteristic(f, p)),
        Expr::Scale(_, e) | Expr::Rev(e) => avoid_characteristic(e, p),
        _ => {}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_scenes_reparse(drafts in proptest::collection::vec(draft(), 1..12)) {
        let scene = build(drafts);
        let text = scene.to_string();
        let again = parse_scene(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&again, &scene, "{}", text);
        prop_assert_eq!(again.to_string(), text);
    }
}
