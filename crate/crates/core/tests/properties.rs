use std::collections::BTreeMap;

use dyndeg_core::algebraic::AlgebraicReal;
use dyndeg_core::atom::Atom;
use dyndeg_core::corr::{Correspondence, Settings, Strategy as Order};
use dyndeg_core::degree::{check_submultiplicative, dual_degree_check, dyn_degree, dyn_degrees, DegreeReport};
use dyndeg_core::relative::SemiConjugacy;
use dyndeg_core::ring::Space;
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

const SPACES: &[&[u32]] = &[&[1], &[2], &[3], &[1, 1], &[2, 1], &[1, 2]];

#[derive(Clone, Debug)]
enum Factor {
    Power(u32),
    RevPower(u32),
    Diag,
    AutSum(u32),
}

#[derive(Clone, Debug)]
struct Instance {
    dims: Vec<u32>,
    terms: Vec<(u32, Vec<Factor>)>,
}

fn space(dims: &[u32]) -> Space {
    if dims.len() == 1 {
        Space::projective(dims[0])
    } else {
        Space::product(dims).unwrap()
    }
}

fn factor_atom(k: u32, f: &Factor) -> Atom {
    let p = Space::projective(k);
    match f {
        Factor::Power(d) => Atom::power(&p, BigUint::from(*d)).unwrap(),
        Factor::RevPower(d) => Atom::revpower(&p, BigUint::from(*d)).unwrap(),
        Factor::Diag => Atom::diag(&p),
        Factor::AutSum(c) => Atom::autsum(&p, BigUint::from(*c)).unwrap(),
    }
}

impl Instance {
    fn build(&self) -> Correspondence {
        let s = space(&self.dims);
        let items = self
            .terms
            .iter()
            .map(|(c, fs)| {
                let atoms: Vec<Atom> = self.dims.iter().zip(fs).map(|(&k, f)| factor_atom(k, f)).collect();
                let a = if atoms.len() == 1 { atoms.into_iter().next().unwrap() } else { Atom::product(atoms).unwrap() };
                (BigUint::from(*c), a)
            })
            .collect();
        Correspondence::from_terms(&s, items).unwrap()
    }
}

/// Degrees are powers of one base per factor, so every pair of power maps
/// divides one another and composes.
fn factor(base: u32, maps_only: bool) -> BoxedStrategy<Factor> {
    let deg = prop_oneof![Just(base), Just(base * base)];
    if maps_only {
        prop_oneof![deg.clone().prop_map(Factor::Power), Just(Factor::Diag)].boxed()
    } else {
        prop_oneof![
            deg.clone().prop_map(Factor::Power),
            deg.prop_map(Factor::RevPower),
            Just(Factor::Diag),
            (2u32..4).prop_map(Factor::AutSum),
        ]
        .boxed()
    }
}

fn instance(maps_only: bool) -> impl Strategy<Value = Instance> {
    (0..SPACES.len(), prop_oneof![Just(2u32), Just(3u32)]).prop_flat_map(move |(si, base)| {
        let dims = SPACES[si].to_vec();
        let term = (1u32..4, dims.iter().map(|_| factor(base, maps_only)).collect::<Vec<_>>());
        proptest::collection::vec(term, 1..4).prop_map(move |terms| Instance { dims: dims.clone(), terms })
    })
}

fn s() -> Settings {
    Settings::default()
}

fn exact(r: &DegreeReport) -> AlgebraicReal {
    r.exact.clone().unwrap_or_else(|| panic!("no exact value: {r:?}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn submultiplicativity(inst in instance(false), p_sel in 0u32..4) {
        let f = inst.build();
        let p = p_sel % (f.dim() + 1);
        let rep = check_submultiplicative(&f, p, 6, &s()).unwrap();
        prop_assert!(rep.holds, "{f}: max ratio {:?}", rep.max_ratio);
        let seq = &rep.sequence;
        for n in 1..=seq.len() {
            for m in 1..=seq.len() - n {
                prop_assert!(seq[n + m - 1] <= &seq[n - 1] * &seq[m - 1]);
            }
        }
    }

    #[test]
    fn projection_formula_pairing_symmetry(inst in instance(false)) {
        let f = inst.build();
        for p in 0..=f.dim() {
            let (a, b, ok) = dual_degree_check(&f, p).unwrap();
            prop_assert!(ok, "{f} p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn reverse_duality(inst in instance(false)) {
        let f = inst.build();
        let r = f.reverse().unwrap();
        let k = f.dim();
        let lf = dyn_degrees(&f, 8, &s()).unwrap();
        let lr = dyn_degrees(&r, 8, &s()).unwrap();
        for p in 0..=k {
            prop_assert_eq!(exact(&lr[p as usize]), exact(&lf[(k - p) as usize]), "{} p={}", f, p);
        }
    }

    #[test]
    fn power_compatibility(inst in instance(false), m in 1u32..4) {
        let f = inst.build();
        let fm = f.iterate(m, Order::WordExpansion, &s()).unwrap();
        for p in 0..=f.dim() {
            let l = exact(&dyn_degree(&f, p, 8, &s()).unwrap());
            let lm = exact(&dyn_degree(&fm, p, 8, &s()).unwrap());
            prop_assert_eq!(lm, l.pow(m), "{} p={} m={}", f, p, m);
        }
    }

    #[test]
    fn strategy_agreement(inst in instance(true), n in 1u32..7) {
        let f = inst.build();
        let words = f.iterate(n, Order::WordExpansion, &s()).unwrap();
        let multinomial = f.iterate(n, Order::CommutingMultinomial, &s()).unwrap();
        prop_assert_eq!(&words, &multinomial);
        // Brute force over all words: composition multiplies degrees factorwise.
        let mut oracle: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        oracle.insert(vec![1; inst.dims.len()], BigUint::one());
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (degs, c) in &oracle {
                for (k, fs) in &inst.terms {
                    let d: Vec<u32> = degs.iter().zip(fs).map(|(a, f)| match f {
                        Factor::Power(e) => a * e,
                        _ => *a,
                    }).collect();
                    *next.entry(d).or_insert_with(BigUint::default) += c * BigUint::from(*k);
                }
            }
            oracle = next;
        }
        let expected: Vec<(BigUint, Atom)> = oracle
            .into_iter()
            .map(|(degs, c)| {
                let fs: Vec<Factor> = degs.iter().map(|&d| if d == 1 { Factor::Diag } else { Factor::Power(d) }).collect();
                let one = Instance { dims: inst.dims.clone(), terms: vec![(1, fs)] }.build();
                (c, one.single_term().unwrap().0.clone())
            })
            .collect();
        let expected = Correspondence::from_terms(f.space(), expected).unwrap();
        prop_assert_eq!(&words, &expected);
    }

    #[test]
    fn relative_top_degree_matches(inst in instance(false).prop_filter("products only", |i| i.dims.len() == 2), side in 0usize..2) {
        let f = inst.build();
        let sc = SemiConjugacy::projection(&f, &[side]).unwrap();
        prop_assert!(sc.is_verified());
        let rel = sc.rel_dyn_degree(0, 8, &s()).unwrap();
        let total = dyn_degree(&f, 0, 8, &s()).unwrap();
        prop_assert_eq!(exact(&rel), exact(&total), "{}", sc.describe());
    }
}
