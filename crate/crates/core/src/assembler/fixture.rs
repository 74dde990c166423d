//! JSON records describing amalgam and HNN inputs directly as cohomology
//! algebras plus restriction maps.
//!
//! ```json
//! { "kind": "amalgam", "p": 5,
//!   "g1": { "generators": ["a","b","c"], "graded_commutative": true,
//!           "omega_basis": [], "map_matrix": [[1,0,0],[0,1,0]] },
//!   "g2": { ... }, "h": { "generators": ["a","b"], "graded_commutative": true } }
//! ```
//!
//! HNN records use `g0` (with `map_matrix`), `a`, and `phi` (generator of A
//! to a word in the generators of G_0). Relations are either vectors of
//! length d^2 or sums like `"x*y + 2 y*x"`. With `graded_commutative` the
//! squares and anticommutators of all generators are added.

use super::{AssemblyError, RestrictionData};
use crate::arith::{reduce_i64, FpMatrix};
use crate::quadalg::QuadraticAlgebra;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RelationSpec {
    Vector(Vec<i64>),
    Expr(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct AlgebraRecord {
    pub generators: Vec<String>,
    #[serde(default)]
    pub omega_basis: Vec<RelationSpec>,
    #[serde(default)]
    pub graded_commutative: bool,
    #[serde(default)]
    pub map_matrix: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawFixture {
    #[serde(default)]
    name: Option<String>,
    kind: String,
    p: u64,
    #[serde(default)]
    g1: Option<AlgebraRecord>,
    #[serde(default)]
    g2: Option<AlgebraRecord>,
    #[serde(default)]
    h: Option<AlgebraRecord>,
    #[serde(default)]
    g0: Option<AlgebraRecord>,
    #[serde(default)]
    a: Option<AlgebraRecord>,
    #[serde(default)]
    phi: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Amalgam {
        name: String,
        d1: RestrictionData,
        d2: RestrictionData,
    },
    Hnn {
        name: String,
        data: RestrictionData,
        phi: Vec<String>,
    },
}

fn parse_expr(expr: &str, names: &[String], p: u64) -> Result<Vec<u64>, FixtureError> {
    let d = names.len();
    let mut v = vec![0u64; d * d];
    let bad = || FixtureError::Invalid(format!("cannot read relation `{expr}`"));
    let spaced = expr.replace('-', " -").replace('+', " +");
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for tok in spaced.split_whitespace() {
        let mut tok = tok;
        if let Some(rest) = tok.strip_prefix('+') {
            sign = 1;
            tok = rest;
        } else if let Some(rest) = tok.strip_prefix('-') {
            sign = -1;
            tok = rest;
        }
        if tok.is_empty() {
            continue;
        }
        if let Ok(c) = tok.parse::<i64>() {
            coef = Some(c);
            continue;
        }
        let (a, b) = tok.split_once('*').ok_or_else(bad)?;
        let ia = names.iter().position(|n| n == a).ok_or_else(bad)?;
        let ib = names.iter().position(|n| n == b).ok_or_else(bad)?;
        let c = sign * coef.take().unwrap_or(1);
        let slot = &mut v[ia * d + ib];
        *slot = (*slot + reduce_i64(c, p)) % p;
        sign = 1;
    }
    Ok(v)
}

impl AlgebraRecord {
    pub fn algebra(&self, p: u64) -> Result<QuadraticAlgebra, FixtureError> {
        let names = &self.generators;
        let d = names.len();
        let mut rels = Vec::new();
        if self.graded_commutative {
            for i in 0..d {
                for j in i..d {
                    let mut v = vec![0u64; d * d];
                    v[i * d + j] = 1;
                    v[j * d + i] = 1;
                    rels.push(v);
                }
            }
        }
        for r in &self.omega_basis {
            rels.push(match r {
                RelationSpec::Vector(v) => {
                    if v.len() != d * d {
                        return Err(FixtureError::Invalid(format!("relation of length {}, expected {}", v.len(), d * d)));
                    }
                    v.iter().map(|&x| reduce_i64(x, p)).collect()
                }
                RelationSpec::Expr(e) => parse_expr(e, names, p)?,
            });
        }
        QuadraticAlgebra::new(p, names.clone(), &rels).map_err(|e| FixtureError::Assembly(e.into()))
    }

    fn restriction(&self, sub: &AlgebraRecord, p: u64, label: &str) -> Result<RestrictionData, FixtureError> {
        let m = self
            .map_matrix
            .as_ref()
            .ok_or_else(|| FixtureError::Invalid(format!("{label} needs a map_matrix")))?;
        let cols = self.generators.len();
        if m.iter().any(|r| r.len() != cols) {
            return Err(FixtureError::Invalid(format!("{label}: map_matrix rows need {cols} entries")));
        }
        let map = FpMatrix::from_rows(p, cols, m);
        Ok(RestrictionData::new(self.algebra(p)?, sub.algebra(p)?, map)?)
    }
}

pub fn load_fixture(text: &str) -> Result<Fixture, FixtureError> {
    let raw: RawFixture = serde_json::from_str(text)?;
    if !crate::arith::is_prime(raw.p) {
        return Err(FixtureError::Invalid(format!("{} is not prime", raw.p)));
    }
    let need = |r: &Option<AlgebraRecord>, key: &str| {
        r.clone().ok_or_else(|| FixtureError::Invalid(format!("missing `{key}`")))
    };
    let name = raw.name.clone().unwrap_or_default();
    match raw.kind.as_str() {
        "amalgam" => {
            let h = need(&raw.h, "h")?;
            let d1 = need(&raw.g1, "g1")?.restriction(&h, raw.p, "g1")?;
            let d2 = need(&raw.g2, "g2")?.restriction(&h, raw.p, "g2")?;
            Ok(Fixture::Amalgam { name, d1, d2 })
        }
        "hnn" => {
            let a = need(&raw.a, "a")?;
            let data = need(&raw.g0, "g0")?.restriction(&a, raw.p, "g0")?;
            let phi = a
                .generators
                .iter()
                .map(|g| {
                    raw.phi
                        .get(g)
                        .cloned()
                        .ok_or_else(|| FixtureError::Invalid(format!("phi has no image for `{g}`")))
                })
                .collect::<Result<_, _>>()?;
            Ok(Fixture::Hnn { name, data, phi })
        }
        other => Err(FixtureError::Invalid(format!("unknown kind `{other}`"))),
    }
}
