//! JSON input formats and their conversion into library values.
//!
//! References to algebras are either a built-in name, a path relative to the
//! referring file, or an inline algebra object. Elements are strings in
//! literal syntax (`1/2 - 3i + k`) or coordinate lists (`1,0,-2`).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use divring::algebra::Algebra;
use divring::omega::{FiniteOmegaAlgebra, Hand, RepKind, Representation, Signature};
use divring::rational::{fmt_rational, int, parse_rational};
use divring::text::{format_element, parse_element};
use divring::tower::{build_tower, Tower};
use divring::Element;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Int(i64),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub unit: usize,
    pub constants: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraFile),
}

/// Square grid of elements; used for forms and for rank queries.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub algebra: AlgebraRef,
    pub matrix: Vec<Vec<String>>,
}

/// x ↦ xP + R (or Px + R with `--hand left`).
#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub algebra: AlgebraRef,
    pub p: Vec<Vec<String>>,
    pub r: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneFile {
    pub algebra: AlgebraRef,
    pub anchor: Vec<String>,
    pub span: Vec<Vec<String>>,
}

/// A polynomial chart (with optional inverse) or explicit connection
/// coefficients `gamma` over the variables, `v1..vn` and `a1..an`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub algebra: AlgebraRef,
    pub vars: Vec<String>,
    #[serde(default)]
    pub forward: Option<Vec<String>>,
    #[serde(default)]
    pub inverse: Option<Vec<String>>,
    #[serde(default)]
    pub gamma: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpec {
    pub name: String,
    pub arity: usize,
}

/// Carrier labels, operations and one flat table per operation, indexed by
/// argument tuples in lexicographic order.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaFile {
    pub carrier: Vec<String>,
    #[serde(default)]
    pub signature: Vec<OpSpec>,
    #[serde(default)]
    pub tables: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindSpec {
    MonoidAction,
    RingOnAbelianGroup,
    #[default]
    Raw,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HandSpec {
    #[default]
    Left,
    Right,
}

/// `action[a][m]` is the label of f(a)(m).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub acting: OmegaFile,
    pub acted: OmegaFile,
    pub action: Vec<Vec<String>>,
    #[serde(default)]
    pub kind: KindSpec,
    #[serde(default)]
    pub hand: HandSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RepRef {
    Path(String),
    Inline(RepFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    pub levels: Vec<RepRef>,
}

/// Parsed JSON together with the directory relative references resolve from.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, PathBuf)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((value, base))
}

pub fn build_algebra(f: &AlgebraFile) -> Result<Arc<Algebra>> {
    let n = f.dim;
    if f.constants.len() != n || f.constants.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(CliError::Parse(format!("constants must be a {n}x{n}x{n} array")));
    }
    let c = f
        .constants
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(scalar).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let alg = Algebra::new(c, f.unit)?;
    // a table equal to a built-in one takes its basis names and printing
    Ok(["quaternion", "complex", "rational"]
        .iter()
        .filter_map(|n| Algebra::builtin(n))
        .find(|b| **b == *alg)
        .unwrap_or(alg))
}

fn scalar(s: &Scalar) -> Result<divring::Rational> {
    match s {
        Scalar::Int(n) => Ok(int(*n)),
        Scalar::Text(t) => parse_rational(t).ok_or_else(|| CliError::Parse(format!("bad rational {t:?}"))),
    }
}

/// Built-in name, or a path to an algebra file relative to `base`.
pub fn resolve_algebra(r: &AlgebraRef, base: &Path) -> Result<Arc<Algebra>> {
    match r {
        AlgebraRef::Inline(f) => build_algebra(f),
        AlgebraRef::Name(name) => match Algebra::builtin(name) {
            Some(a) => Ok(a),
            None => {
                let (f, _) = read_json::<AlgebraFile>(&base.join(name))?;
                build_algebra(&f)
            }
        },
    }
}

/// The reference printed back into output files.
pub fn algebra_ref(alg: &Arc<Algebra>) -> AlgebraRef {
    if let Some(name) = alg.label() {
        if Algebra::builtin(name).is_some() {
            return AlgebraRef::Name(name.to_string());
        }
    }
    AlgebraRef::Inline(AlgebraFile {
        dim: alg.dim(),
        unit: alg.unit_index().unwrap_or(0),
        constants: alg
            .constants()
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|q| Scalar::Text(fmt_rational(q))).collect()).collect())
            .collect(),
    })
}

pub fn element(s: &str, alg: &Arc<Algebra>) -> Result<Element> {
    Ok(parse_element(s, alg)?)
}

pub fn elements(items: &[String], alg: &Arc<Algebra>) -> Result<Vec<Element>> {
    items.iter().map(|s| element(s, alg)).collect()
}

pub fn grid(rows: &[Vec<String>], alg: &Arc<Algebra>) -> Result<Vec<Vec<Element>>> {
    rows.iter().map(|r| elements(r, alg)).collect()
}

/// `x; y; z` on the command line.
pub fn element_list(s: &str, alg: &Arc<Algebra>) -> Result<Vec<Element>> {
    s.split(';').map(|p| element(p.trim(), alg)).collect()
}

pub fn format_list(v: &[Element]) -> String {
    v.iter().map(format_element).collect::<Vec<_>>().join("; ")
}

fn lookup(alg: &FiniteOmegaAlgebra, label: &str) -> Result<usize> {
    alg.index_of(label).map_err(|_| CliError::Parse(format!("unknown label {label:?}")))
}

pub fn build_omega(f: &OmegaFile, bound: usize) -> Result<FiniteOmegaAlgebra> {
    let sig = Signature::new(f.signature.iter().map(|o| (o.name.clone(), o.arity)).collect())?;
    let bare = FiniteOmegaAlgebra::with_bound(f.carrier.clone(), Signature::empty(), vec![], bound)?;
    let tables = f
        .tables
        .iter()
        .map(|t| t.iter().map(|l| lookup(&bare, l)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteOmegaAlgebra::with_bound(f.carrier.clone(), sig, tables, bound)?)
}

pub fn build_rep(f: &RepFile, bound: usize) -> Result<Representation> {
    let acting = Arc::new(build_omega(&f.acting, bound)?);
    let acted = Arc::new(build_omega(&f.acted, bound)?);
    let action = f
        .action
        .iter()
        .map(|row| row.iter().map(|l| lookup(&acted, l)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let kind = match f.kind {
        KindSpec::MonoidAction => RepKind::MonoidAction,
        KindSpec::RingOnAbelianGroup => RepKind::RingOnAbelianGroup,
        KindSpec::Raw => RepKind::Raw,
    };
    let hand = match f.hand {
        HandSpec::Left => Hand::Left,
        HandSpec::Right => Hand::Right,
    };
    Ok(Representation::new(acting, acted, action, kind, hand)?)
}

/// Loads the tower and rejects it when the carriers multiply past `product_bound`.
pub fn load_tower(path: &Path, bound: usize, product_bound: usize) -> Result<Tower> {
    let (f, base) = read_json::<TowerFile>(path)?;
    let reps = f
        .levels
        .iter()
        .map(|r| match r {
            RepRef::Inline(rf) => build_rep(rf, bound),
            RepRef::Path(p) => build_rep(&read_json::<RepFile>(&base.join(p))?.0, bound),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut product: usize = reps.first().map_or(1, |r| r.acting().size());
    for r in &reps {
        product = product.saturating_mul(r.acted().size());
    }
    if product > product_bound {
        return Err(CliError::Domain(format!(
            "tower carriers multiply to {product}, above the bound {product_bound}"
        )));
    }
    Ok(build_tower(reps)?)
}
