use dyndeg_core::arith::Rat;
use dyndeg_core::atom::Atom;
use dyndeg_core::corr::{Correspondence, Settings};
use dyndeg_core::ring::{CycleClass, Space};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const SPACES: &[&[u32]] = &[&[1], &[2], &[3], &[4], &[1, 1], &[2, 1], &[1, 1, 1], &[2, 2]];

fn space(dims: &[u32]) -> Space {
    if dims.len() == 1 {
        Space::projective(dims[0])
    } else {
        Space::product(dims).unwrap()
    }
}

fn any_space() -> impl Strategy<Value = Space> {
    (0..SPACES.len()).prop_map(|i| space(SPACES[i]))
}

fn class(s: &Space, p: u32, coeffs: &[i64]) -> CycleClass {
    let n = s.basis_size(p);
    let v: Vec<Rat> = (0..n).map(|i| Rat::from_integer(BigInt::from(coeffs[i % coeffs.len()]))).collect();
    CycleClass::new(s, p, v).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-6i64..7, 1..8)
}

/// Sums of power maps and the diagonal on each factor, degrees in `{1, 2, 4}`.
fn map_sum(s: Space) -> impl Strategy<Value = Correspondence> {
    let dims: Vec<u32> = s.factors().unwrap_or_else(|| vec![s.dim()]);
    let term = (1u64..4, proptest::collection::vec(0u32..3, dims.len()));
    proptest::collection::vec(term, 1..3).prop_map(move |terms| {
        let items = terms
            .into_iter()
            .map(|(c, es)| {
                let atoms: Vec<Atom> =
                    dims.iter().zip(&es).map(|(&k, &e)| Atom::power(&Space::projective(k), BigUint::from(1u32 << e)).unwrap()).collect();
                let a = if atoms.len() == 1 { atoms.into_iter().next().unwrap() } else { Atom::product(atoms).unwrap() };
                (BigUint::from(c), a)
            })
            .collect();
        Correspondence::from_terms(&s, items).unwrap()
    })
}

fn three_maps() -> impl Strategy<Value = (Correspondence, Correspondence, Correspondence)> {
    any_space().prop_flat_map(|s| (map_sum(s.clone()), map_sum(s.clone()), map_sum(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn intersection_commutes_and_associates(s in any_space(), a in coeffs(), b in coeffs(), c in coeffs(), ps in (0u32..5, 0u32..5, 0u32..5)) {
        let k = s.dim();
        let (p, q) = (ps.0 % (k + 1), ps.1 % (k + 1));
        prop_assume!(p + q <= k);
        let r = ps.2 % (k - p - q + 1);
        let (x, y, z) = (class(&s, p, &a), class(&s, q, &b), class(&s, r, &c));
        prop_assert_eq!(x.intersect(&y).unwrap(), y.intersect(&x).unwrap());
        prop_assert_eq!(x.intersect(&y).unwrap().intersect(&z).unwrap(), x.intersect(&y.intersect(&z).unwrap()).unwrap());
    }

    #[test]
    fn intersection_is_bilinear(s in any_space(), a in coeffs(), b in coeffs(), c in coeffs(), t in -5i64..6, ps in (0u32..5, 0u32..5)) {
        let k = s.dim();
        let (p, q) = (ps.0 % (k + 1), ps.1 % (k + 1));
        prop_assume!(p + q <= k);
        let (x, y, z) = (class(&s, p, &a), class(&s, p, &b), class(&s, q, &c));
        let t = Rat::from_integer(BigInt::from(t));
        let lhs = x.scale(&t).add(&y).unwrap().intersect(&z).unwrap();
        let rhs = x.intersect(&z).unwrap().scale(&t).add(&y.intersect(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_nondegenerate(s in any_space()) {
        for p in 0..=s.dim() {
            prop_assert!(!s.pairing_matrix(p).unwrap().det().is_zero());
        }
    }

    #[test]
    fn norm_is_a_norm(s in any_space(), a in coeffs(), b in coeffs(), t in -5i64..6, p in 0u32..5) {
        let p = p % (s.dim() + 1);
        let (x, y) = (class(&s, p, &a), class(&s, p, &b));
        let t = Rat::from_integer(BigInt::from(t));
        let nx = s.norm_l1(&x).unwrap();
        prop_assert!(!nx.is_negative());
        prop_assert_eq!(nx.is_zero(), x.is_zero());
        prop_assert_eq!(s.norm_l1(&x.scale(&t)).unwrap(), t.abs() * &nx);
        prop_assert!(s.norm_l1(&x.add(&y).unwrap()).unwrap() <= nx + s.norm_l1(&y).unwrap());
        if x.is_effective() {
            let w = s.omega_power(s.dim() - p).unwrap();
            prop_assert_eq!(s.norm_l1(&x).unwrap(), s.degree(&s.intersect(&x, &w).unwrap()).unwrap());
        }
    }

    #[test]
    fn pullback_is_linear(fs in any_space().prop_flat_map(|s| (map_sum(s.clone()), Just(s))), a in coeffs(), b in coeffs(), t in -5i64..6, p in 0u32..5) {
        let (f, s) = fs;
        let p = p % (s.dim() + 1);
        let (x, y) = (class(&s, p, &a), class(&s, p, &b));
        let t = Rat::from_integer(BigInt::from(t));
        let lhs = f.pullback_class(&x.scale(&t).add(&y).unwrap()).unwrap();
        let rhs = f.pullback_class(&x).unwrap().scale(&t).add(&f.pullback_class(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_associates_and_distributes((f, g, h) in three_maps()) {
        let st = Settings::default();
        let left = f.compose(&g, &st).unwrap().compose(&h, &st).unwrap();
        let right = f.compose(&g.compose(&h, &st).unwrap(), &st).unwrap();
        prop_assert_eq!(&left, &right);
        let sum = f.add(&g).unwrap().compose(&h, &st).unwrap();
        prop_assert_eq!(sum, f.compose(&h, &st).unwrap().add(&g.compose(&h, &st).unwrap()).unwrap());
    }

    #[test]
    fn pullback_is_contravariant((f, g, _h) in three_maps()) {
        let st = Settings::default();
        let fg = f.compose(&g, &st).unwrap();
        for p in 0..=f.dim() {
            let m = g.pullback_matrix(p).unwrap().mul(&f.pullback_matrix(p).unwrap());
            prop_assert_eq!(fg.pullback_matrix(p).unwrap(), m);
        }
    }
}
