//! Declared ring and atom-family files.
//!
//! Ring file:
//! ```text
//! ring S
//! dim 2
//! basis 0 1
//! basis 1 E L
//! basis 2 pt
//! product 1:0 1:0 = -1
//! product 1:0 1:1 = 1
//! product 1:1 1:1 = 0
//! polarization 1 2
//! ```
//! Family file:
//! ```text
//! family b
//! space P3
//! flags birational
//! matrix 1 [[3]]
//! rule forward reverse = 1 diag
//! ```
//! Missing matrices default to `[[1]]` only in codimension 0.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dyndeg_core::arith::Rat;
use dyndeg_core::atom::{DeclaredFamily, FamilyRef, TableEntry};
use dyndeg_core::matrix::Matrix;
use dyndeg_core::ring::{DeclaredRing, Space};
use num_bigint::BigUint;

use crate::error::CliError;

struct Lines<'a> {
    path: &'a Path,
    text: String,
}

impl<'a> Lines<'a> {
    fn read(path: &'a Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Ok(Lines { path, text })
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Declared { path: self.path.to_path_buf(), line, msg: msg.into() }
    }

    /// Non-empty lines with comments removed, split into keyword and rest.
    fn entries(&self) -> Vec<(usize, String, String)> {
        self.text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("").trim();
                if l.is_empty() {
                    return None;
                }
                let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
                Some((i + 1, kw.to_string(), rest.trim().to_string()))
            })
            .collect()
    }
}

fn rat(s: &str) -> Option<Rat> {
    s.parse().ok()
}

fn rats(s: &str) -> Option<Vec<Rat>> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(rat).collect()
}

pub fn parse_matrix(s: &str) -> Option<Matrix> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact.strip_prefix("[[")?.strip_suffix("]]")?;
    let rows: Vec<Vec<Rat>> = inner.split("],[").map(rats).collect::<Option<_>>()?;
    let width = rows.first()?.len();
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return None;
    }
    Some(Matrix::from_rows(rows))
}

fn class_ref(s: &str) -> Option<(u32, usize)> {
    let (p, i) = s.split_once(':')?;
    Some((p.parse().ok()?, i.parse().ok()?))
}

pub fn load_ring(path: &Path) -> Result<Arc<DeclaredRing>, CliError> {
    let src = Lines::read(path)?;
    let mut name = None;
    let mut dim = None;
    let mut labels: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut polarization = None;
    for (line, kw, rest) in src.entries() {
        match kw.as_str() {
            "ring" => name = Some(rest),
            "dim" => dim = Some(rest.parse::<u32>().map_err(|_| src.err(line, "dim must be a small integer"))?),
            "basis" => {
                let mut parts = rest.split_whitespace();
                let p = parts.next().and_then(|p| p.parse::<u32>().ok()).ok_or_else(|| src.err(line, "basis needs a codimension"))?;
                let names: Vec<String> = parts.map(String::from).collect();
                if labels.insert(p, names).is_some() {
                    return Err(src.err(line, format!("basis for codimension {p} given twice")));
                }
            }
            "product" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| src.err(line, "expected 'product p:i q:j = coeffs'"))?;
                let refs: Vec<(u32, usize)> =
                    lhs.split_whitespace().map(class_ref).collect::<Option<_>>().ok_or_else(|| src.err(line, "bad class reference"))?;
                let [a, b] = refs[..] else {
                    return Err(src.err(line, "a product names exactly two classes"));
                };
                let coeffs = rats(rhs).ok_or_else(|| src.err(line, "bad coefficient list"))?;
                entries.push((a, b, coeffs));
            }
            "polarization" => polarization = Some(rats(&rest).ok_or_else(|| src.err(line, "bad polarization"))?),
            _ => return Err(src.err(line, format!("unknown keyword '{kw}'"))),
        }
    }
    let name = name.ok_or_else(|| src.err(1, "missing 'ring <name>'"))?;
    let dim = dim.ok_or_else(|| src.err(1, "missing 'dim'"))?;
    let labels: Vec<Vec<String>> = (0..=dim).map(|p| labels.remove(&p).unwrap_or_default()).collect();
    let polarization = polarization.unwrap_or_default();
    Ok(DeclaredRing::new(&name, dim, labels, entries, polarization)?)
}

fn family_ref(s: &str) -> Option<FamilyRef> {
    Some(match s {
        "forward" => FamilyRef::Forward,
        "reverse" => FamilyRef::Reverse,
        "diag" => FamilyRef::Diagonal,
        _ => FamilyRef::AutSum(s.strip_prefix("autsum")?.parse().ok()?),
    })
}

/// Family file; `space` resolves catalog names, `ring <file>` or the given lookup.
pub fn load_family(path: &Path, lookup: &dyn Fn(&str) -> Option<Space>) -> Result<Arc<DeclaredFamily>, CliError> {
    let src = Lines::read(path)?;
    let mut name = None;
    let mut space = None;
    let (mut birational, mut reversible) = (false, false);
    let mut matrices: BTreeMap<u32, Matrix> = BTreeMap::new();
    let mut table = Vec::new();
    for (line, kw, rest) in src.entries() {
        match kw.as_str() {
            "family" => name = Some(rest),
            "space" => {
                let s = if let Some(file) = rest.strip_prefix("ring ") {
                    Space::Declared(load_ring(&relative_to(path, file.trim()))?)
                } else {
                    catalog_space(&rest).or_else(|| lookup(&rest)).ok_or_else(|| src.err(line, format!("unknown space '{rest}'")))?
                };
                space = Some(s);
            }
            "flags" => {
                for f in rest.split_whitespace() {
                    match f {
                        "birational" => birational = true,
                        "reversible" => reversible = true,
                        _ => return Err(src.err(line, format!("unknown flag '{f}'"))),
                    }
                }
            }
            "matrix" => {
                let (p, m) = rest.split_once(char::is_whitespace).ok_or_else(|| src.err(line, "expected 'matrix p [[..]]'"))?;
                let p: u32 = p.parse().map_err(|_| src.err(line, "bad codimension"))?;
                let m = parse_matrix(m).ok_or_else(|| src.err(line, "bad matrix literal"))?;
                matrices.insert(p, m);
            }
            "rule" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| src.err(line, "expected 'rule left right = coef result'"))?;
                let l: Vec<&str> = lhs.split_whitespace().collect();
                let r: Vec<&str> = rhs.split_whitespace().collect();
                let (&[a, b], &[c, res]) = (&l[..], &r[..]) else {
                    return Err(src.err(line, "expected 'rule left right = coef result'"));
                };
                let bad = || src.err(line, "unknown family reference; use forward, reverse, diag or autsum<c>");
                table.push(TableEntry {
                    left: family_ref(a).ok_or_else(bad)?,
                    right: family_ref(b).ok_or_else(bad)?,
                    coef: c.parse::<BigUint>().map_err(|_| src.err(line, "bad coefficient"))?,
                    result: family_ref(res).ok_or_else(bad)?,
                });
            }
            _ => return Err(src.err(line, format!("unknown keyword '{kw}'"))),
        }
    }
    let name = name.ok_or_else(|| src.err(1, "missing 'family <name>'"))?;
    let space = space.ok_or_else(|| src.err(1, "missing 'space'"))?;
    if space.basis_size(0) == 1 {
        matrices.entry(0).or_insert_with(|| Matrix::identity(1));
    }
    let k = space.dim();
    let ms = (0..=k)
        .map(|p| matrices.remove(&p).ok_or_else(|| src.err(1, format!("missing matrix for codimension {p}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeclaredFamily::new(&name, &space, ms, reversible, birational, table)?)
}

pub fn catalog_space(s: &str) -> Option<Space> {
    if s == "point" {
        return Some(Space::Point);
    }
    if let Some(k) = s.strip_prefix('P').and_then(|k| k.parse().ok()) {
        return Some(Space::projective(k));
    }
    let inner = s.strip_prefix("prod(")?.strip_suffix(')')?;
    let dims: Vec<u32> = inner.split(',').map(|f| f.trim().strip_prefix('P')?.parse().ok()).collect::<Option<_>>()?;
    Space::product(&dims).ok()
}

pub fn relative_to(base: &Path, file: &str) -> PathBuf {
    let f = Path::new(file);
    if f.is_absolute() {
        return f.to_path_buf();
    }
    base.parent().map_or_else(|| f.to_path_buf(), |d| d.join(f))
}
