//! JSON wire formats for instance files and reports.
//!
//! Scalars follow the crate-wide conventions: integers are JSON numbers,
//! rationals are `"p/q"` strings, circle values are `"p/q mod 1"` strings.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brauer_formulas::{BrauerError, StandardSetup};
use crate::coefficients::{Circle, CoefficientRing, VectorValue};
use crate::homology::{CohomologyGroup, IntMat};
use crate::nerve::{build_nerve, Cochain, Nerve, NerveError, Simplex, VertexId};
use crate::twist::{validate_twist, TwistCocycle, TwistError};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed rational {0:?} (expected \"p/q\")")]
    BadRational(String),
    #[error("invalid groupoid data: {0}")]
    BadGroupoid(String),
    #[error("integer out of the JSON-safe range: {0}")]
    IntegerRange(BigInt),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Setup(#[from] BrauerError),
    #[error("bad base key {0:?} (expected \"component<N>\")")]
    BadBaseKey(String),
    #[error("json: {0}")]
    Serde(#[from] serde_json::Error),
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, JsonError> {
    let bad = || JsonError::BadRational(text.to_string());
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .and_then(|p| p.trim().parse().ok())
        .ok_or_else(bad)?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

pub fn format_circle(c: &Circle) -> String {
    format!("{} mod 1", format_rational(&c.lift()))
}

pub fn parse_circle(text: &str) -> Result<Circle, JsonError> {
    let trimmed = text.trim_end_matches("mod 1").trim();
    Ok(Circle::from_rational(&parse_rational(trimmed)?))
}

fn int_to_i64(v: &BigInt) -> Result<i64, JsonError> {
    i64::try_from(v).map_err(|_| JsonError::IntegerRange(v.clone()))
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

pub const INSTANCE_SCHEMA: &str = "dimred-instance/1";
pub const REPORT_SCHEMA: &str = "dimred-report/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NerveSpec {
    pub facets: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistEntry {
    pub simplex: Vec<u32>,
    pub value: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistSpec {
    pub n: usize,
    pub support: Vec<TwistEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetupEntry {
    pub pair: [u32; 2],
    pub value: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetupSpec {
    pub n: usize,
    pub s: Vec<SetupEntry>,
    /// Keys `"component<N>"`, values the base vertex id.
    pub base: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub nerve: NerveSpec,
    pub twist: TwistSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub setup: Option<SetupSpec>,
}

pub fn nerve_from_spec(spec: &NerveSpec) -> Result<Nerve, JsonError> {
    let facets: Vec<BTreeSet<u32>> = spec
        .facets
        .iter()
        .map(|f| f.iter().copied().collect())
        .collect();
    Ok(build_nerve(&facets)?)
}

pub fn twist_from_spec(nerve: &Nerve, spec: &TwistSpec) -> Result<TwistCocycle, JsonError> {
    let mut f = Cochain::new(2, VectorValue::zeros(spec.n));
    for entry in &spec.support {
        let simplex = Simplex::from_ids(&entry.simplex)?;
        f.set(simplex, VectorValue::from_i64(&entry.value));
    }
    Ok(validate_twist(nerve, spec.n, f)?)
}

pub fn twist_to_spec(twist: &TwistCocycle) -> Result<TwistSpec, JsonError> {
    let mut support = Vec::new();
    for (s, v) in twist.cochain().iter() {
        support.push(TwistEntry {
            simplex: s.vertices().iter().map(|v| v.0).collect(),
            value: v
                .components()
                .iter()
                .map(int_to_i64)
                .collect::<Result<_, _>>()?,
        });
    }
    Ok(TwistSpec {
        n: twist.n(),
        support,
    })
}

pub fn setup_from_spec(nerve: &Nerve, spec: &SetupSpec) -> Result<StandardSetup, JsonError> {
    let mut entries = Vec::new();
    for e in &spec.s {
        let value: Vec<BigRational> = e
            .value
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<_, _>>()?;
        entries.push(((VertexId(e.pair[0]), VertexId(e.pair[1])), value));
    }
    let mut base = BTreeMap::new();
    for (key, vertex) in &spec.base {
        let comp: usize = key
            .strip_prefix("component")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| JsonError::BadBaseKey(key.clone()))?;
        base.insert(comp, VertexId(*vertex));
    }
    Ok(StandardSetup::new(nerve.clone(), spec.n, entries, base)?)
}

pub fn setup_to_spec(setup: &StandardSetup) -> SetupSpec {
    let s = setup
        .s_entries()
        .iter()
        .map(|((a, b), v)| SetupEntry {
            pair: [a.0, b.0],
            value: v.iter().map(format_rational).collect(),
        })
        .collect();
    let base = setup
        .bases()
        .iter()
        .map(|(comp, v)| (format!("component{comp}"), v.0))
        .collect();
    SetupSpec {
        n: setup.n,
        s,
        base,
    }
}

// ---------------------------------------------------------------------------
// Groupoids
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionEntry {
    pub g: Vec<u64>,
    pub x: String,
    pub to: String,
}

/// A transformation groupoid `G ⋉ X` with `G = ℤ/m₁ × … × ℤ/m_r`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub group: Vec<u64>,
    pub set: Vec<String>,
    pub action: Vec<ActionEntry>,
}

/// Covers of the object and arrow spaces; arrows are `(g, x)` pairs named
/// by group element and target point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidCoverSpec {
    pub object_sets: Vec<Vec<String>>,
    pub arrow_sets: Vec<Vec<(Vec<u64>, String)>>,
}

pub fn groupoid_from_spec(
    spec: &GroupoidSpec,
) -> Result<crate::tu_groupoid::TransformationGroupoid, JsonError> {
    let index_of = |name: &str| spec.set.iter().position(|s| s == name);
    let mut table: BTreeMap<(Vec<u64>, usize), usize> = BTreeMap::new();
    for entry in &spec.action {
        let (Some(x), Some(to)) = (index_of(&entry.x), index_of(&entry.to)) else {
            return Err(JsonError::BadGroupoid(format!(
                "unknown set element in action entry {entry:?}"
            )));
        };
        table.insert((entry.g.clone(), x), to);
    }
    let moduli = spec.group.clone();
    let set = spec.set.clone();
    crate::tu_groupoid::TransformationGroupoid::new(moduli, set, move |g, x| {
        table.get(&(g.to_vec(), x)).copied().unwrap_or(x)
    })
    .map_err(|e| JsonError::BadGroupoid(e.to_string()))
}

pub fn cover_from_spec(
    groupoid: &crate::tu_groupoid::TransformationGroupoid,
    spec: &GroupoidCoverSpec,
) -> Result<crate::tu_groupoid::GroupoidCover, JsonError> {
    let index_of = |name: &str| {
        groupoid
            .set
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| JsonError::BadGroupoid(format!("unknown set element {name:?}")))
    };
    let mut object_sets = Vec::new();
    for names in &spec.object_sets {
        let mut set = BTreeSet::new();
        for name in names {
            set.insert(index_of(name)?);
        }
        object_sets.push(set);
    }
    let elements: Vec<Vec<u64>> = (0..groupoid.group_order())
        .map(|i| groupoid.element(i).to_vec())
        .collect();
    let mut arrow_sets = Vec::new();
    for arrows in &spec.arrow_sets {
        let mut set = BTreeSet::new();
        for (g, x) in arrows {
            let gi = elements
                .iter()
                .position(|e| e == g)
                .ok_or_else(|| JsonError::BadGroupoid(format!("unknown group element {g:?}")))?;
            set.insert(groupoid.arrow_id(gi, index_of(x)?));
        }
        arrow_sets.push(set);
    }
    let cover = crate::tu_groupoid::GroupoidCover {
        object_sets,
        arrow_sets,
    };
    cover
        .validate(&groupoid.groupoid)
        .map_err(|e| JsonError::BadGroupoid(e.to_string()))?;
    Ok(cover)
}

// ---------------------------------------------------------------------------
// Output forms
// ---------------------------------------------------------------------------

/// Coordinate-list export of a sparse integer matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

pub fn matrix_to_json(m: &IntMat) -> Result<MatrixJson, JsonError> {
    let mut entries: Vec<(usize, usize, i64)> = m
        .entries()
        .map(|(i, j, v)| Ok((i, j, int_to_i64(v)?)))
        .collect::<Result<_, JsonError>>()?;
    entries.sort_unstable();
    Ok(MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub rank: usize,
    pub torsion: Vec<i64>,
    pub coefficients: String,
}

pub fn group_to_json(g: &CohomologyGroup) -> Result<GroupJson, JsonError> {
    Ok(GroupJson {
        rank: g.rank,
        torsion: g.torsion.iter().map(int_to_i64).collect::<Result<_, _>>()?,
        coefficients: g.ring.to_string(),
    })
}

pub fn ring_from_str(text: &str) -> Option<CoefficientRing> {
    match text {
        "Z" | "z" => Some(CoefficientRing::Integer),
        "Q" | "q" => Some(CoefficientRing::Rational),
        "QZ" | "qz" | "Q/Z" => Some(CoefficientRing::Circle),
        _ => None,
    }
}
