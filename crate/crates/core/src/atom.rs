//! Irreducible correspondence generators with their pullback matrices and
//! the rewrite rules that normalize a composite of two atoms.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{rat_from_uint, rat_to_uint, uint_pow, Rat};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Space;

/// Reference to a power-one atom of a declared family, used in its
/// composition table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyRef {
    Forward,
    Reverse,
    Diagonal,
    AutSum(BigUint),
}

/// `left o right = coef * result`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableEntry {
    pub left: FamilyRef,
    pub right: FamilyRef,
    pub coef: BigUint,
    pub result: FamilyRef,
}

/// A user-declared stable correspondence: its iterates act on `N^p` by
/// matrix powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeclaredFamily {
    name: String,
    space: Space,
    matrices: Vec<Matrix>,
    reversible: bool,
    birational: bool,
    table: Vec<TableEntry>,
}

impl DeclaredFamily {
    pub fn new(
        name: &str,
        space: &Space,
        matrices: Vec<Matrix>,
        reversible: bool,
        birational: bool,
        table: Vec<TableEntry>,
    ) -> Result<Arc<DeclaredFamily>> {
        let bad = |m: String| Err(Error::InvalidAtom(format!("{name}: {m}")));
        let k = space.dim();
        if matrices.len() != k as usize + 1 {
            return bad(format!("expected pullback matrices for codimensions 0..={k}"));
        }
        for (p, m) in matrices.iter().enumerate() {
            let n = space.basis_size(p as u32);
            if m.rows() != n || m.cols() != n {
                return bad(format!("matrix in codimension {p} must be {n}x{n}"));
            }
            if !m.is_nonnegative() || !m.is_integral() {
                return bad(format!("matrix in codimension {p} must have nonnegative integer entries"));
            }
        }
        if matrices[0].get(0, 0).is_zero() {
            return bad("codimension-0 entry must be positive".into());
        }
        let birational = birational && {
            if !matrices[0].get(0, 0).is_one() || !matrices[k as usize].get(0, 0).is_one() {
                return bad("a birational family has one sheet in both directions".into());
            }
            true
        };
        let reversible = reversible || birational;
        let fam = DeclaredFamily { name: name.to_string(), space: space.clone(), matrices, reversible, birational, table };
        if reversible {
            for q in 0..=k {
                let r = fam.reverse_matrix(q)?;
                if !r.is_nonnegative() || !r.is_integral() {
                    return bad(format!("reverse matrix in codimension {q} is not a nonnegative integer matrix"));
                }
            }
        }
        for e in &fam.table {
            if e.coef.is_zero() {
                return bad("table coefficients must be positive".into());
            }
            if !reversible && (e.left == FamilyRef::Reverse || e.right == FamilyRef::Reverse || e.result == FamilyRef::Reverse) {
                return bad("table mentions the reverse of a family without one".into());
            }
        }
        Ok(Arc::new(fam))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    pub fn is_birational(&self) -> bool {
        self.birational
    }

    pub fn table(&self) -> &[TableEntry] {
        &self.table
    }

    fn reverse_matrix(&self, q: u32) -> Result<Matrix> {
        pairing_transpose(&self.space, &self.matrices[(self.space.dim() - q) as usize], q)
    }

    fn atom_of(self: &Arc<Self>, r: &FamilyRef) -> Atom {
        match r {
            FamilyRef::Forward => Atom::Declared { family: self.clone(), reversed: false, power: 1 },
            FamilyRef::Reverse => Atom::Declared { family: self.clone(), reversed: true, power: 1 },
            FamilyRef::Diagonal => Atom::Diagonal(self.space.clone()),
            FamilyRef::AutSum(c) => Atom::autsum(&self.space, c.clone()).expect("positive count"),
        }
    }
}

/// `G_{k-q}^{-1} M^T G_{k-q}`: the action on `N^q` adjoint to `M` on
/// `N^{k-q}` under the degree pairing.
pub fn pairing_transpose(space: &Space, m: &Matrix, q: u32) -> Result<Matrix> {
    let g = space.pairing_matrix(space.dim() - q)?;
    let gi = g.inverse().ok_or_else(|| Error::InvalidDeclaredRing("degenerate pairing".into()))?;
    Ok(gi.mul(&m.transpose()).mul(&g))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Diagonal(Space),
    /// Sum of `count` graphs of linear automorphisms, kept as one atom.
    AutSum {
        space: Space,
        count: BigUint,
    },
    /// Coordinate-wise `d`-th power map on `P^k`.
    Power {
        k: u32,
        d: BigUint,
    },
    /// Reverse of the `d`-th power map on `P^k`.
    RevPower {
        k: u32,
        d: BigUint,
    },
    /// Factor-wise product over a product of projective spaces.
    Product(Vec<Atom>),
    Declared {
        family: Arc<DeclaredFamily>,
        reversed: bool,
        power: u32,
    },
}

/// Normalized composite `coef * atom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub coef: BigUint,
    pub atom: Atom,
    /// The rule agrees with matrix multiplication on every `N^p`.
    pub multiplicative: bool,
}

impl Composite {
    fn new(coef: BigUint, atom: Atom) -> Self {
        Composite { coef, atom, multiplicative: true }
    }
}

impl Atom {
    pub fn diag(space: &Space) -> Atom {
        Atom::Diagonal(space.clone())
    }

    pub fn autsum(space: &Space, count: BigUint) -> Result<Atom> {
        if count.is_zero() {
            return Err(Error::InvalidAtom("autsum count must be at least 1".into()));
        }
        if count.is_one() {
            return Ok(Atom::Diagonal(space.clone()));
        }
        Ok(Atom::AutSum { space: space.clone(), count })
    }

    /// Coordinate-wise power map; on a product it acts on every factor.
    pub fn power(space: &Space, d: BigUint) -> Result<Atom> {
        Atom::power_like(space, d, false)
    }

    pub fn revpower(space: &Space, d: BigUint) -> Result<Atom> {
        Atom::power_like(space, d, true)
    }

    fn power_like(space: &Space, d: BigUint, rev: bool) -> Result<Atom> {
        if d.is_zero() {
            return Err(Error::InvalidAtom("power degree must be at least 1".into()));
        }
        match space {
            Space::Point => Ok(Atom::Diagonal(Space::Point)),
            Space::Projective(k) => Ok(power_atom(*k, d, rev)),
            Space::Product(fs) => Atom::product(fs.iter().map(|&k| power_atom(k, d.clone(), rev)).collect()),
            Space::Declared(r) => Err(Error::InvalidAtom(format!("power maps need a catalog space, not {}", r.name()))),
        }
    }

    pub fn declared(family: &Arc<DeclaredFamily>) -> Atom {
        Atom::Declared { family: family.clone(), reversed: false, power: 1 }
    }

    /// Product of atoms on projective spaces (nested products are flattened).
    pub fn product(factors: Vec<Atom>) -> Result<Atom> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Atom::Product(inner) => flat.extend(inner),
                Atom::Diagonal(Space::Product(ks)) => flat.extend(ks.into_iter().map(|k| Atom::Diagonal(Space::Projective(k)))),
                Atom::Diagonal(Space::Point) => {}
                other => {
                    if !matches!(other.space(), Space::Projective(_)) {
                        return Err(Error::InvalidAtom(format!("product factors must live on projective spaces, got {other}")));
                    }
                    flat.push(other);
                }
            }
        }
        let dims: Vec<u32> = flat.iter().map(|a| a.space().dim()).collect();
        let space = Space::product(&dims)?;
        if flat.iter().all(|a| matches!(a, Atom::Diagonal(_))) {
            return Ok(Atom::Diagonal(space));
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        Ok(Atom::Product(flat))
    }

    pub fn space(&self) -> Space {
        match self {
            Atom::Diagonal(s) | Atom::AutSum { space: s, .. } => s.clone(),
            Atom::Power { k, .. } | Atom::RevPower { k, .. } => Space::Projective(*k),
            Atom::Product(fs) => Space::product(&fs.iter().map(|a| a.space().dim()).collect::<Vec<_>>()).expect("valid product"),
            Atom::Declared { family, .. } => family.space.clone(),
        }
    }

    pub fn dim(&self) -> u32 {
        self.space().dim()
    }

    /// Per-factor atoms on a product of projective spaces.
    pub fn factors(&self) -> Option<Vec<Atom>> {
        match self {
            Atom::Product(fs) => Some(fs.clone()),
            Atom::Diagonal(s) => s.factors().map(|ks| ks.into_iter().map(|k| Atom::Diagonal(Space::Projective(k))).collect()),
            Atom::Power { .. } | Atom::RevPower { .. } => Some(vec![self.clone()]),
            Atom::AutSum { space: Space::Projective(_), .. } => Some(vec![self.clone()]),
            Atom::Declared { family, .. } if matches!(family.space, Space::Projective(_)) => Some(vec![self.clone()]),
            _ => None,
        }
    }

    /// Matrix of the pullback on `N^p`: entry `(i, j)` is the coefficient of
    /// basis class `i` in the pullback of basis class `j`.
    pub fn pullback_matrix(&self, p: u32) -> Result<Matrix> {
        let space = self.space();
        space.check_codim(p)?;
        let k = space.dim();
        Ok(match self {
            Atom::Diagonal(_) => Matrix::identity(space.basis_size(p)),
            Atom::AutSum { count, .. } => Matrix::scalar(space.basis_size(p), rat_from_uint(count)),
            Atom::Power { d, .. } => Matrix::scalar(1, rat_from_uint(&uint_pow(d, p))),
            Atom::RevPower { d, .. } => Matrix::scalar(1, rat_from_uint(&uint_pow(d, k - p))),
            Atom::Product(fs) => {
                let entries = space
                    .monomials(p)
                    .iter()
                    .map(|m| {
                        let mut e = Rat::one();
                        for (f, &a) in fs.iter().zip(m) {
                            e *= f.pullback_matrix(a)?.get(0, 0);
                        }
                        Ok(e)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Matrix::diagonal(entries)
            }
            Atom::Declared { family, reversed, power } => {
                let base = if *reversed { family.reverse_matrix(p)? } else { family.matrices[p as usize].clone() };
                base.pow(*power)
            }
        })
    }

    /// Matrix of the pushforward `N^q -> N^q`, adjoint to the pullback on
    /// `N^{k-q}` under the degree pairing.
    pub fn pushforward_matrix(&self, q: u32) -> Result<Matrix> {
        let space = self.space();
        space.check_codim(q)?;
        pairing_transpose(&space, &self.pullback_matrix(space.dim() - q)?, q)
    }

    pub fn reverse(&self) -> Result<Atom> {
        Ok(match self {
            Atom::Diagonal(_) | Atom::AutSum { .. } => self.clone(),
            Atom::Power { k, d } => Atom::RevPower { k: *k, d: d.clone() },
            Atom::RevPower { k, d } => Atom::Power { k: *k, d: d.clone() },
            Atom::Product(fs) => Atom::Product(fs.iter().map(|f| f.reverse()).collect::<Result<_>>()?),
            Atom::Declared { family, reversed, power } => {
                if !family.reversible {
                    return Err(Error::NoReverse(family.name.clone()));
                }
                Atom::Declared { family: family.clone(), reversed: !reversed, power: *power }
            }
        })
    }

    /// `deg(a^*(omega^p) . omega^{k-p})`.
    pub fn deg_p(&self, p: u32) -> Result<BigUint> {
        let space = self.space();
        let w = space.omega_power(p)?;
        let row = space.degree_row(p)?;
        let v = self.pullback_matrix(p)?.apply(w.coeffs());
        let d: Rat = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        rat_to_uint(&d).ok_or_else(|| Error::InvalidAtom(format!("non-integral degree {d}")))
    }

    /// Number of preimages of a generic point: the `N^0` entry.
    pub fn sheets(&self) -> BigUint {
        let m = self.pullback_matrix(0).expect("codimension 0");
        rat_to_uint(m.get(0, 0)).expect("integral sheet count")
    }

    /// Carries a declared commutation certificate with `other`.
    pub fn commutes_with(&self, other: &Atom) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            (Atom::Diagonal(_) | Atom::AutSum { .. }, _) | (_, Atom::Diagonal(_) | Atom::AutSum { .. }) => true,
            (Atom::Power { .. }, Atom::Power { .. }) | (Atom::RevPower { .. }, Atom::RevPower { .. }) => true,
            (Atom::Product(a), Atom::Product(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.commutes_with(y)),
            (Atom::Declared { family: f, reversed: r1, .. }, Atom::Declared { family: g, reversed: r2, .. }) => {
                f == g && (r1 == r2 || f.birational)
            }
            _ => false,
        }
    }

    /// Degree-equivalent multiple of the diagonal (`AutSum(c)` counts as `c`).
    pub fn diagonal_weight(&self) -> Option<BigUint> {
        match self {
            Atom::Diagonal(_) => Some(BigUint::one()),
            Atom::AutSum { count, .. } => Some(count.clone()),
            _ => None,
        }
    }

    /// Maps are atoms with a single sheet over a generic point.
    pub fn is_map_like(&self) -> bool {
        self.sheets().is_one()
    }
}

fn power_atom(k: u32, d: BigUint, rev: bool) -> Atom {
    if d.is_one() {
        Atom::Diagonal(Space::Projective(k))
    } else if rev {
        Atom::RevPower { k, d }
    } else {
        Atom::Power { k, d }
    }
}

fn divides_char(characteristic: u32, d: &BigUint) -> bool {
    characteristic > 0 && (d % characteristic).is_zero()
}

/// Normal form of `a1 o a2` (apply `a2` first).
pub fn compose_atoms(a1: &Atom, a2: &Atom, characteristic: u32) -> Result<Composite> {
    let (s1, s2) = (a1.space(), a2.space());
    if s1 != s2 {
        return Err(Error::SpaceMismatch { left: s1.to_string(), right: s2.to_string() });
    }
    let undeclared =
        |reason: &str| Error::UndeclaredComposition { left: a1.to_string(), right: a2.to_string(), reason: reason.to_string() };
    let one = BigUint::one;
    Ok(match (a1, a2) {
        (_, Atom::Diagonal(_)) => Composite::new(one(), a1.clone()),
        (Atom::Diagonal(_), _) => Composite::new(one(), a2.clone()),
        (Atom::AutSum { space, count: c }, Atom::AutSum { count: e, .. }) => {
            // Products of the two automorphism groups cover the larger one
            // gcd(c, e) times.
            Composite::new(c.gcd(e), Atom::autsum(space, c.lcm(e))?)
        }
        (Atom::AutSum { count, .. }, other) | (other, Atom::AutSum { count, .. }) => Composite::new(count.clone(), other.clone()),
        (Atom::Power { k, d }, Atom::Power { d: e, .. }) => Composite::new(one(), power_atom(*k, d * e, false)),
        (Atom::RevPower { k, d }, Atom::RevPower { d: e, .. }) => Composite::new(one(), power_atom(*k, d * e, true)),
        (Atom::Power { k, d }, Atom::RevPower { d: e, .. }) => {
            if divides_char(characteristic, d) || divides_char(characteristic, e) {
                return Err(undeclared("characteristic divides a power degree"));
            }
            if (d % e).is_zero() {
                // Each point has e^k preimages, all landing on x^(d/e).
                Composite::new(uint_pow(e, *k), power_atom(*k, d / e, false))
            } else if (e % d).is_zero() {
                Composite::new(uint_pow(d, *k), power_atom(*k, e / d, true))
            } else {
                return Err(undeclared("power degrees do not divide one another"));
            }
        }
        (Atom::RevPower { k, d: e }, Atom::Power { d, .. }) => {
            if divides_char(characteristic, d) || divides_char(characteristic, e) {
                return Err(undeclared("characteristic divides a power degree"));
            }
            if d == e {
                Composite::new(one(), Atom::autsum(&Space::Projective(*k), uint_pow(e, *k))?)
            } else if (d % e).is_zero() {
                Composite::new(uint_pow(e, *k), power_atom(*k, d / e, false))
            } else if (e % d).is_zero() {
                Composite::new(uint_pow(d, *k), power_atom(*k, e / d, true))
            } else {
                return Err(undeclared("power degrees do not divide one another"));
            }
        }
        (Atom::Product(f), Atom::Product(g)) => {
            let mut coef = one();
            let mut multiplicative = true;
            let mut out = Vec::with_capacity(f.len());
            for (x, y) in f.iter().zip(g) {
                let c = compose_atoms(x, y, characteristic)?;
                coef *= c.coef;
                multiplicative &= c.multiplicative;
                out.push(c.atom);
            }
            Composite { coef, atom: Atom::product(out)?, multiplicative }
        }
        (Atom::Declared { family: f, reversed: r1, power: n1 }, Atom::Declared { family: g, reversed: r2, power: n2 }) if f == g => {
            if r1 == r2 {
                let n = n1.checked_add(*n2).ok_or_else(|| undeclared("iterate exponent overflow"))?;
                Composite::new(one(), Atom::Declared { family: f.clone(), reversed: *r1, power: n })
            } else if f.birational {
                // b^m o rev(b)^n cancels to the net exponent.
                let net = *n1 as i64 - *n2 as i64;
                let signed = if *r1 { -net } else { net };
                let atom = match signed.cmp(&0) {
                    core::cmp::Ordering::Equal => Atom::Diagonal(f.space.clone()),
                    core::cmp::Ordering::Greater => Atom::Declared { family: f.clone(), reversed: false, power: signed as u32 },
                    core::cmp::Ordering::Less => Atom::Declared { family: f.clone(), reversed: true, power: (-signed) as u32 },
                };
                checked(a1, a2, Composite::new(one(), atom))?
            } else {
                table_rule(f, a1, a2).ok_or_else(|| undeclared("not in the family's composition table"))??
            }
        }
        _ => return Err(undeclared("no rule for this pair")),
    })
}

fn family_ref(fam: &DeclaredFamily, a: &Atom) -> Option<FamilyRef> {
    match a {
        Atom::Declared { family, reversed, power: 1 } if **family == *fam => {
            Some(if *reversed { FamilyRef::Reverse } else { FamilyRef::Forward })
        }
        _ => None,
    }
}

fn table_rule(fam: &Arc<DeclaredFamily>, a1: &Atom, a2: &Atom) -> Option<Result<Composite>> {
    let l = family_ref(fam, a1)?;
    let r = family_ref(fam, a2)?;
    let e = fam.table.iter().find(|e| e.left == l && e.right == r)?;
    Some(checked(a1, a2, Composite::new(e.coef.clone(), fam.atom_of(&e.result))))
}

/// Marks a rule multiplicative when `M_p(a2) M_p(a1) = coef * M_p(result)` for all `p`.
fn checked(a1: &Atom, a2: &Atom, mut c: Composite) -> Result<Composite> {
    let scale = rat_from_uint(&c.coef);
    let mut ok = true;
    for p in 0..=a1.dim() {
        let lhs = a2.pullback_matrix(p)?.mul(&a1.pullback_matrix(p)?);
        let rhs = c.atom.pullback_matrix(p)?.scale(&scale);
        ok &= lhs == rhs;
    }
    c.multiplicative = ok;
    Ok(c)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Diagonal(s) => write!(f, "diag({s})"),
            Atom::AutSum { space, count } => write!(f, "autsum({space},{count})"),
            Atom::Power { k, d } => write!(f, "power(P{k},{d})"),
            Atom::RevPower { k, d } => write!(f, "revpower(P{k},{d})"),
            Atom::Product(fs) => {
                write!(f, "prod(")?;
                for (i, a) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Atom::Declared { family, reversed, power } => {
                if *reversed {
                    write!(f, "rev({})", family.name)?;
                } else {
                    write!(f, "{}", family.name)?;
                }
                if *power != 1 {
                    write!(f, "^{power}")?;
                }
                Ok(())
            }
        }
    }
}
