//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use dyndeg::{run_text, scenario_scene, Format, Options, Style};
use dyndeg_core::algebraic::AlgebraicReal;
use dyndeg_core::arith::rat_frac;
use dyndeg_core::atom::Atom;
use dyndeg_core::corr::{Correspondence, Settings, Strategy as Order};
use dyndeg_core::degree::{check_submultiplicative, degree_sequence, dual_degree_check, dyn_degree, dyn_degrees};
use dyndeg_core::relative::SemiConjugacy;
use dyndeg_core::ring::Space;
use dyndeg_core::scenarios::{self, Item};
use dyndeg_core::verify::{self, Quantity, Verdict};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn u(n: u64) -> BigUint {
    BigUint::from(n)
}

fn int(n: i64) -> AlgebraicReal {
    AlgebraicReal::from_int(n)
}

fn one(a: Atom) -> Correspondence {
    Correspondence::atom(a)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lambdas(f: &Correspondence, n: u32) -> Result<Vec<AlgebraicReal>, String> {
    dyn_degrees(f, n, &Settings::default())
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| r.exact.ok_or_else(|| format!("no exact lambda_{} for {f}", r.p)))
        .collect()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn example3() -> Check {
    let start = Instant::now();
    let s = Settings::default();
    let f = scenarios::power_plus_diagonal(2, 2, 1).map_err(|e| e.to_string())?;
    for (p, base) in [(0u32, 2u64), (1, 3), (2, 5)] {
        let seq = degree_sequence(&f, p, 10, &s).map_err(|e| e.to_string())?;
        let want: Vec<BigUint> = (1..=10).map(|n| u(base).pow(n)).collect();
        ensure(seq == want, format!("deg_{p} = {seq:?}"))?;
    }
    let l = lambdas(&f, 10)?;
    ensure(l == [int(2), int(3), int(5)], format!("lambda = {l:?}"))?;
    let r = verify::check_log_concavity(&f, 10, &s).map_err(|e| e.to_string())?;
    ensure(r.summary() == "log-concavity: FAILS (9 < 10)", r.summary())?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("lambda = (2, 3, 5), {} in {t:.2?}", r.summary()))
}

fn reverse_maps() -> Check {
    for d in [2i64, 3] {
        let f = one(Atom::revpower(&Space::projective(3), u(d as u64)).map_err(|e| e.to_string())?);
        let l = lambdas(&f, 12)?;
        ensure(l[0] == int(d.pow(3)) && l[1] == int(d * d), format!("d1 = {d}: lambda = {l:?}"))?;
    }
    Ok("lambda_0 = d^3, lambda_1 = d^2 for d in {2, 3}".into())
}

fn product_formula() -> Check {
    let start = Instant::now();
    let s = Settings::default();
    let sc = scenarios::product_semiconjugacy().map_err(|e| e.to_string())?;
    let total = lambdas(sc.f(), 12)?;
    let base = lambdas(sc.g(), 12)?;
    let rel: Vec<AlgebraicReal> = sc
        .rel_dyn_degrees(12, &s)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| r.exact.ok_or("inexact relative degree"))
        .collect::<Result<_, _>>()?;
    let mut values = Vec::new();
    for p in 0..=3usize {
        let formula = (0..=p)
            .filter(|&j| j < base.len() && p - j < rel.len())
            .map(|j| base[j].mul(&rel[p - j]))
            .reduce(|a, b| a.max(b))
            .ok_or("empty max")?;
        ensure(total[p] == formula, format!("p={p}: {} vs {}", total[p], formula))?;
        ensure(total[p].as_rational().is_some_and(|r| r.is_integer()), format!("p={p}: {} not an integer", total[p]))?;
        values.push(total[p].to_string());
    }
    let r = verify::check_product_formula(&sc, 12, &s).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Holds, r.summary())?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("lambda_p(f) = ({}) both ways in {t:.2?}", values.join(", ")))
}

fn weak_sharpness() -> Check {
    for (d, e) in [(2u64, 3i64), (3, 2)] {
        let sc = scenarios::sharpness_semiconjugacy(d, e as u64).map_err(|e| e.to_string())?;
        let r = verify::check_weak_product(&sc, 12, &Settings::default()).map_err(|e| e.to_string())?;
        let c = r.value("c_min").and_then(Quantity::exact).cloned();
        ensure(c == Some(int(e)), format!("(d, e) = ({d}, {e}): c_min = {c:?}"))?;
        ensure(r.value("lambda_0(g)").and_then(Quantity::exact) == Some(&int(e)), "lambda_0(g) differs from e")?;
    }
    Ok("c_min = lambda_0(g) = e for (2, 3) and (3, 2)".into())
}

fn reducible_counterexample() -> Check {
    let sc = scenarios::run("remark1pt6", 12, &Settings::default()).map_err(|e| e.to_string())?;
    let r = sc.checks().find(|c| c.name == "weak product formula").ok_or("no weak product check")?;
    ensure(r.summary() == "weak product formula: FAILS (25 < 40), expected", r.summary())?;
    Ok(r.summary())
}

fn triangle() -> Check {
    let s = Settings::default();
    let p2 = Space::projective(2);
    let diag = one(Atom::diag(&p2));
    for d in [2u64, 3] {
        for f in [one(Atom::power(&p2, u(d)).unwrap()), one(Atom::revpower(&p2, u(d)).unwrap())] {
            let sum = f.add(&diag).map_err(|e| e.to_string())?;
            let (ls, lf) = (lambdas(&sum, 12)?, lambdas(&f, 12)?);
            for p in 0..=2 {
                ensure(ls[p] == lf[p].add_rational(&rat_frac(1, 1)), format!("{f}: p={p}: {} vs {} + 1", ls[p], lf[p]))?;
            }
        }
    }
    let b = scenarios::birational_family(3).map_err(|e| e.to_string())?;
    let fb = one(b.clone());
    let rb = one(b.reverse().map_err(|e| e.to_string())?);
    let (l, lr) = (lambdas(&fb, 12)?, lambdas(&rb, 12)?);
    ensure(l[1] == int(3) && lr[1] == int(3), "lambda_1 of the pair is not 3")?;
    let sum = lambdas(&fb.add(&rb).map_err(|e| e.to_string())?, 12)?;
    let want = AlgebraicReal::from_rational(rat_frac(10, 3));
    ensure(sum[1] == want, format!("lambda_1(b + rev b) = {}", sum[1]))?;
    ensure(sum[1] < int(6), "not strict")?;
    let r = verify::check_triangle(&fb, &rb, None, 12, &s).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Holds, r.summary())?;
    Ok("lambda_p(F + diag) = lambda_p(F) + 1; lambda_1(b + rev b) = 10/3 < 6".into())
}

/// Catalog instance: a sum of product atoms on `P^a x P^b` (or `P^k`).
fn catalog() -> impl Strategy<Value = Correspondence> {
    let spaces: Vec<Vec<u32>> = vec![vec![1], vec![2], vec![3], vec![1, 1], vec![2, 1]];
    (0..spaces.len(), prop_oneof![Just(2u64), Just(3u64)]).prop_flat_map(move |(i, base)| {
        let dims = spaces[i].clone();
        let factor = prop_oneof![
            prop_oneof![Just(base), Just(base * base)].prop_map(|d| (0u8, d)),
            prop_oneof![Just(base), Just(base * base)].prop_map(|d| (1u8, d)),
            Just((2u8, 1u64)),
        ];
        let term = (1u64..4, proptest::collection::vec(factor, dims.len()));
        proptest::collection::vec(term, 1..3).prop_map(move |terms| {
            let items = terms
                .into_iter()
                .map(|(c, fs)| {
                    let atoms: Vec<Atom> = dims
                        .iter()
                        .zip(fs)
                        .map(|(&k, (kind, d))| {
                            let p = Space::projective(k);
                            match kind {
                                0 => Atom::power(&p, u(d)).unwrap(),
                                1 => Atom::revpower(&p, u(d)).unwrap(),
                                _ => Atom::diag(&p),
                            }
                        })
                        .collect();
                    let a = if atoms.len() == 1 { atoms[0].clone() } else { Atom::product(atoms).unwrap() };
                    (u(c), a)
                })
                .collect();
            let s = if dims.len() == 1 { Space::projective(dims[0]) } else { Space::product(&dims).unwrap() };
            Correspondence::from_terms(&s, items).unwrap()
        })
    })
}

fn commuting_catalog() -> impl Strategy<Value = Correspondence> {
    catalog().prop_filter("power maps and diagonals", |f| !f.to_string().contains("rev"))
}

fn property(
    name: &str,
    strategy: impl Strategy<Value = Correspondence>,
    test: impl Fn(&Correspondence) -> Result<(), String>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, |f| test(&f).map_err(|e| TestCaseError::fail(format!("{f}: {e}")))).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Check {
    let s = Settings::default();
    let e = |x: dyndeg_core::Error| x.to_string();
    property("submultiplicativity", catalog(), |f| {
        for p in 0..=f.dim() {
            ensure(check_submultiplicative(f, p, 6, &s).map_err(e)?.holds, format!("p={p}"))?;
        }
        Ok(())
    })?;
    property("dual degree", catalog(), |f| {
        for p in 0..=f.dim() {
            ensure(dual_degree_check(f, p).map_err(e)?.2, format!("p={p}"))?;
        }
        Ok(())
    })?;
    property("reverse duality", catalog(), |f| {
        let (l, r) = (lambdas(f, 8)?, lambdas(&f.reverse().map_err(e)?, 8)?);
        let k = l.len() - 1;
        (0..=k).try_for_each(|p| ensure(r[p] == l[k - p], format!("p={p}")))
    })?;
    property("power compatibility", catalog(), |f| {
        let l = lambdas(f, 8)?;
        for m in 1..=3 {
            let lm = lambdas(&f.iterate(m, Order::WordExpansion, &s).map_err(e)?, 8)?;
            (0..l.len()).try_for_each(|p| ensure(lm[p] == l[p].pow(m), format!("p={p} m={m}")))?;
        }
        Ok(())
    })?;
    property("strategy agreement", commuting_catalog(), |f| {
        (1..=6).try_for_each(|n| {
            let a = f.iterate(n, Order::WordExpansion, &s).map_err(e)?;
            let b = f.iterate(n, Order::CommutingMultinomial, &s).map_err(e)?;
            ensure(a == b, format!("n={n}"))
        })
    })?;
    property("relative top degree", catalog().prop_filter("products", |f| f.space().factors().is_some_and(|d| d.len() > 1)), |f| {
        for keep in [0usize, 1] {
            let sc = SemiConjugacy::projection(f, &[keep]).map_err(e)?;
            ensure(sc.is_verified(), "unverified projection")?;
            let rel = sc.rel_dyn_degree(0, 8, &s).map_err(e)?.exact;
            let tot = dyn_degree(f, 0, 8, &s).map_err(e)?.exact;
            ensure(rel.is_some() && rel == tot, format!("keep={keep}: {rel:?} vs {tot:?}"))?;
        }
        Ok(())
    })?;
    Ok("six suites, 100 catalog instances each".into())
}

fn simplicity() -> Check {
    let sc = scenarios::product_semiconjugacy().map_err(|e| e.to_string())?;
    let r = verify::check_simplicity_of(sc.f()).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Holds, r.summary())?;
    let v = |n: &str| r.value(n).and_then(Quantity::exact).cloned().ok_or(format!("missing {n}"));
    ensure(v("rho(M1)")? == int(3) && v("rho(M2)")? == int(6), "spectral radii")?;
    ensure(v("second eigenvalue")? == int(2), "second eigenvalue")?;
    let root6 = AlgebraicReal::nth_root_of(&rat_frac(6, 1), 2);
    ensure(v("sqrt(rho(M2))")? == root6 && int(2) < root6, "modulus bound")?;
    ensure(r.rows.iter().all(|row| row.outcome == Some(true)), "a row is not certified")?;
    Ok("rho(M1)^2 = 9 > 6 = rho(M2), simple, second eigenvalue 2 < 6^{1/2}".into())
}

fn reducible_iteration() -> Check {
    let sc = scenarios::run("reducible-iteration", 12, &Settings::default()).map_err(|e| e.to_string())?;
    let mut paths = None;
    let mut failure = None;
    for i in &sc.items {
        match i {
            Item::Paths { lines, .. } => paths = Some(lines.clone()),
            Item::Persistence { first_failure, .. } => failure = *first_failure,
            _ => {}
        }
    }
    let paths = paths.ok_or("no path expansion")?;
    ensure(failure == Some(2), format!("first failure at {failure:?}"))?;
    // Compared up to the order of the two edges in each word.
    let key = |coef: BigUint, word: &str| {
        let mut w: Vec<&str> = word.split(" o ").collect();
        w.sort();
        (coef, w.join(" o "))
    };
    let mut got: Vec<_> = paths.iter().map(|l| key(l.coef.clone(), &l.word)).collect();
    let mut stated = vec![key(u(2), "f12 o f22"), key(u(2), "f21 o f12"), key(u(1), "f21 o f22")];
    got.sort();
    stated.sort();
    let words: Vec<String> = paths.iter().map(|l| format!("{} {}", l.coef, l.word)).collect();
    ensure(
        got == stated,
        format!(
            "f^2 = {} ({} terms) differs from the stated 2 f12 f22 + 2 f21 f12 + f21 f22; pi o f^n != g^n o pi first at n = 2",
            words.join(" + "),
            paths.len()
        ),
    )?;
    Ok("f^2 = 2 f12 f22 + 2 f21 f12 + f21 f22; mismatch at n = 2".into())
}

fn determinism() -> Check {
    let start = Instant::now();
    let opts = Options::default();
    let style = Style { format: Format::Table, approx: false };
    let a = run_text(&scenario_scene("all"), &opts, style);
    let b = run_text(&scenario_scene("all"), &opts, style);
    ensure(a.error.is_none(), format!("{:?}", a.error))?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    let t = start.elapsed() / 2;
    ensure(t < Duration::from_secs(30), format!("battery took {t:?}"))?;
    Ok(format!("{} bytes identical, battery {t:.2?}", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("example 3 reproduction", example3),
        ("reverse-map degrees", reverse_maps),
        ("product formula", product_formula),
        ("weak-product sharpness", weak_sharpness),
        ("reducible counterexample", reducible_counterexample),
        ("triangle inequality", triangle),
        ("property suites", property_suites),
        ("simplicity", simplicity),
        ("reducible-iteration semantics", reducible_iteration),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
