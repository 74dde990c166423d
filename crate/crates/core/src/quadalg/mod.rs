//! Quadratic algebras over F_p: the graph algebras, degree-wise Hilbert
//! dimensions, direct sums and wedge products, the mildness test and the
//! Gärtner splitting search.

use crate::arith::{series_reciprocal, FpMatrix, IntSeries, SparseEchelon, SparseVec};
use crate::graph::{Graph, PGraph};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

/// Default cap on the number of candidate monomials in one degree.
pub const DEFAULT_MAX_CANDIDATES: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadAlgError {
    #[error("degree {degree} needs {size} candidates, above the limit {limit}")]
    ResourceLimit { degree: usize, size: usize, limit: usize },
    #[error("algebras over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("relation vector has length {got}, expected {expected}")]
    BadRelation { got: usize, expected: usize },
}

/// T(V)/(Omega) with V spanned by named generators and Omega a subspace of
/// V (x) V; basis vector x_a (x) x_b has index a * dim V + b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticAlgebra {
    p: u64,
    names: Vec<String>,
    omega: FpMatrix,
}

impl QuadraticAlgebra {
    /// Omega is row-reduced, so dependent input vectors are dropped.
    pub fn new(p: u64, names: Vec<String>, relations: &[Vec<u64>]) -> Result<Self, QuadAlgError> {
        let d2 = names.len() * names.len();
        if let Some(r) = relations.iter().find(|r| r.len() != d2) {
            return Err(QuadAlgError::BadRelation {
                got: r.len(),
                expected: d2,
            });
        }
        let m = FpMatrix::from_residue_rows(p, d2, relations);
        let omega = FpMatrix::from_residue_rows(p, d2, &m.row_space_basis());
        Ok(QuadraticAlgebra { p, names, omega })
    }

    pub fn from_i64(p: u64, names: Vec<String>, relations: &[Vec<i64>]) -> Result<Self, QuadAlgError> {
        let rows: Vec<Vec<u64>> = relations
            .iter()
            .map(|r| r.iter().map(|&x| crate::arith::reduce_i64(x, p)).collect())
            .collect();
        Self::new(p, names, &rows)
    }

    /// The exterior algebra on the given generators.
    pub fn exterior(p: u64, names: Vec<String>) -> Self {
        let d = names.len();
        let mut rels = Vec::new();
        for i in 0..d {
            for j in i..d {
                let mut v = vec![0u64; d * d];
                v[i * d + j] = 1;
                v[j * d + i] = 1;
                rels.push(v);
            }
        }
        Self::new(p, names, &rels).expect("well-formed relations")
    }

    /// The free algebra (no relations).
    pub fn free(p: u64, names: Vec<String>) -> Self {
        Self::new(p, names, &[]).expect("well-formed relations")
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn dim_v(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    /// Basis of Omega, one row per relation.
    pub fn omega(&self) -> &FpMatrix {
        &self.omega
    }
    pub fn omega_dim(&self) -> usize {
        self.omega.rows()
    }

    fn omega_sparse(&self) -> Vec<Vec<(usize, usize, u64)>> {
        let d = self.dim_v();
        (0..self.omega.rows())
            .map(|r| {
                self.omega
                    .row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(ab, &x)| (ab / d, ab % d, x))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// Commutators x_i x_j - x_j x_i for every edge.
    MildTest,
    /// Exterior algebra of the opposite graph: x_i x_j = 0 for non-edges.
    ExteriorOp,
}

pub fn graph_algebra(g: &PGraph, flavor: Flavor) -> QuadraticAlgebra {
    underlying_graph_algebra(g.graph(), g.p(), flavor)
}

pub fn underlying_graph_algebra(g: &Graph, p: u64, flavor: Flavor) -> QuadraticAlgebra {
    let d = g.n();
    let unit = |idx: &[(usize, u64)]| {
        let mut v = vec![0u64; d * d];
        for &(i, x) in idx {
            v[i] = (v[i] + x) % p;
        }
        v
    };
    let mut rels = Vec::new();
    match flavor {
        Flavor::MildTest => {
            for &(i, j) in g.edges() {
                rels.push(unit(&[(i * d + j, 1), (j * d + i, p - 1)]));
            }
        }
        Flavor::ExteriorOp => {
            for i in 0..d {
                rels.push(unit(&[(i * d + i, 1)]));
                for j in i + 1..d {
                    rels.push(unit(&[(i * d + j, 1), (j * d + i, 1)]));
                    if !g.adjacent(i, j) {
                        rels.push(unit(&[(i * d + j, 1)]));
                        rels.push(unit(&[(j * d + i, 1)]));
                    }
                }
            }
        }
    }
    QuadraticAlgebra::new(p, g.vertices().to_vec(), &rels).expect("well-formed relations")
}

/// Walks the degrees of a quadratic algebra. A_n is presented as
/// (V (x) A_{n-1}) / image(Omega (x) A_{n-2}); every candidate x_a (x) beta
/// keeps its normal form in the basis of A_n for use one degree up.
pub struct DegreeWalker<'a> {
    alg: &'a QuadraticAlgebra,
    omega: Vec<Vec<(usize, usize, u64)>>,
    limit: usize,
    /// dim A_0 .. dim A_n so far
    dims: Vec<usize>,
    /// Normal forms of the degree-n candidates (compressed rows).
    offsets: Vec<usize>,
    entries: Vec<(u32, u64)>,
}

impl<'a> DegreeWalker<'a> {
    pub fn new(alg: &'a QuadraticAlgebra, limit: usize) -> Self {
        DegreeWalker {
            alg,
            omega: alg.omega_sparse(),
            limit,
            dims: vec![1],
            offsets: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Compute the next degree and return its dimension.
    pub fn step(&mut self) -> Result<usize, QuadAlgError> {
        let d = self.alg.dim_v();
        let p = self.alg.p;
        let n = self.dims.len();
        if n == 1 {
            self.offsets = (0..=d).collect();
            self.entries = (0..d as u32).map(|i| (i, 1 % p)).collect();
            self.dims.push(d);
            return Ok(d);
        }
        let (dprev, dpp) = (self.dims[n - 1], self.dims[n - 2]);
        let cols = d * dprev;
        if cols > self.limit {
            return Err(QuadAlgError::ResourceLimit {
                degree: n,
                size: cols,
                limit: self.limit,
            });
        }
        let mut ech = SparseEchelon::new(p, cols);
        let mut row: Vec<(usize, u64)> = Vec::new();
        for w in &self.omega {
            for beta in 0..dpp {
                row.clear();
                for &(a, b, c) in w {
                    let cand = b * dpp + beta;
                    for &(g, y) in &self.entries[self.offsets[cand]..self.offsets[cand + 1]] {
                        row.push((a * dprev + g as usize, crate::arith::mul_mod(c, y, p)));
                    }
                }
                ech.insert(merge(&mut row, p));
            }
        }
        let (basis, offsets, entries) = ech.normal_forms();
        self.offsets = offsets;
        self.entries = entries;
        self.dims.push(basis.len());
        Ok(basis.len())
    }
}

fn merge(row: &mut [(usize, u64)], p: u64) -> SparseVec {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(row.len());
    for &(c, x) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = (last.1 + x) % p,
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// [dim A_0, ..., dim A_N].
pub fn hilbert_dims(a: &QuadraticAlgebra, n: usize) -> Result<Vec<usize>, QuadAlgError> {
    hilbert_dims_with_limit(a, n, DEFAULT_MAX_CANDIDATES)
}

pub fn hilbert_dims_with_limit(a: &QuadraticAlgebra, n: usize, limit: usize) -> Result<Vec<usize>, QuadAlgError> {
    let mut w = DegreeWalker::new(a, limit);
    for _ in 0..n {
        w.step()?;
    }
    Ok(w.dims)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MildnessVerdict {
    /// Dimensions agree with 1/(1 - dT + rT^2) through this degree.
    MildUpTo(usize),
    NotMild { degree: usize, algebra: usize, series: i64 },
    /// The computation hit the resource guard before a mismatch was found.
    Undecided { verified_through: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MildnessReport {
    pub verdict: MildnessVerdict,
    pub dims: Vec<usize>,
    pub series: Vec<i64>,
}

/// Coefficients of 1/(1 - dT + rT^2) through degree n.
pub fn mild_series(d: usize, r: usize, n: usize) -> Vec<i64> {
    let poly = IntSeries::from_ints(&[1, -(d as i64), r as i64]);
    let inv = series_reciprocal(&poly, n).expect("constant term is 1");
    inv.integer_coeffs()
        .expect("integral reciprocal")
        .iter()
        .map(|c: &BigInt| c.to_i64().expect("coefficient fits in i64"))
        .collect()
}

/// Compare the commutator algebra with the series of a mild presentation,
/// stopping at the first mismatch.
pub fn mildness_check(g: &PGraph, depth: usize) -> MildnessReport {
    mildness_check_with_limit(g, depth, DEFAULT_MAX_CANDIDATES)
}

pub fn mildness_check_with_limit(g: &PGraph, depth: usize, limit: usize) -> MildnessReport {
    let alg = graph_algebra(g, Flavor::MildTest);
    let series = mild_series(g.graph().n(), g.graph().edges().len(), depth);
    let mut w = DegreeWalker::new(&alg, limit);
    for n in 1..=depth {
        match w.step() {
            Ok(dim) => {
                if dim as i64 != series[n] {
                    return MildnessReport {
                        verdict: MildnessVerdict::NotMild {
                            degree: n,
                            algebra: dim,
                            series: series[n],
                        },
                        dims: w.dims,
                        series,
                    };
                }
            }
            Err(e) => {
                return MildnessReport {
                    verdict: MildnessVerdict::Undecided {
                        verified_through: n - 1,
                        reason: e.to_string(),
                    },
                    dims: w.dims,
                    series,
                }
            }
        }
    }
    MildnessReport {
        verdict: MildnessVerdict::MildUpTo(depth),
        dims: w.dims,
        series,
    }
}

fn check_same_p(a: &QuadraticAlgebra, b: &QuadraticAlgebra) -> Result<u64, QuadAlgError> {
    if a.p != b.p {
        return Err(QuadAlgError::PrimeMismatch(a.p, b.p));
    }
    Ok(a.p)
}

/// Omega_A and Omega_B placed in (V_A + V_B)^(x)2, plus the relations
/// `mixed(i, j, dim)` for every generator i of A and j of B.
fn combine(
    a: &QuadraticAlgebra,
    b: &QuadraticAlgebra,
    mixed: impl Fn(usize, usize, usize) -> Vec<Vec<(usize, u64)>>,
) -> Result<QuadraticAlgebra, QuadAlgError> {
    let p = check_same_p(a, b)?;
    let (da, db) = (a.dim_v(), b.dim_v());
    let dc = da + db;
    let mut rels = Vec::new();
    for (alg, shift) in [(a, 0), (b, da)] {
        let d = alg.dim_v();
        for r in 0..alg.omega.rows() {
            let mut v = vec![0u64; dc * dc];
            for (ab, &x) in alg.omega.row(r).iter().enumerate() {
                v[(ab / d + shift) * dc + ab % d + shift] = x;
            }
            rels.push(v);
        }
    }
    for i in 0..da {
        for j in da..dc {
            for rel in mixed(i, j, dc) {
                let mut v = vec![0u64; dc * dc];
                for (idx, x) in rel {
                    v[idx] = x % p;
                }
                rels.push(v);
            }
        }
    }
    let mut names = a.names.clone();
    names.extend(b.names.iter().cloned());
    QuadraticAlgebra::new(p, names, &rels)
}

/// All products between the two generator sets vanish.
pub fn direct_sum(a: &QuadraticAlgebra, b: &QuadraticAlgebra) -> Result<QuadraticAlgebra, QuadAlgError> {
    combine(a, b, |i, j, dc| vec![vec![(i * dc + j, 1)], vec![(j * dc + i, 1)]])
}

/// Generators of A and B anticommute.
pub fn wedge_product(a: &QuadraticAlgebra, b: &QuadraticAlgebra) -> Result<QuadraticAlgebra, QuadAlgError> {
    combine(a, b, |i, j, dc| vec![vec![(i * dc + j, 1), (j * dc + i, 1)]])
}

/// r <= d^2 / 4.
pub fn mantel_bound_check(d: u64, r: u64) -> bool {
    4 * r <= d * d
}

/// A splitting V = V_1 + V_2 of generators with V_1 independent and every
/// edge meeting both parts; larger V_1 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GartnerSplit {
    Found { v1: Vec<String>, v2: Vec<String> },
    NoneFound,
}

pub fn gartner_split_valid(g: &Graph, v1_mask: u64) -> bool {
    g.edges().iter().all(|&(a, b)| {
        let (ia, ib) = (v1_mask >> a & 1 == 1, v1_mask >> b & 1 == 1);
        ia != ib
    })
}

pub fn gartner_split_search(g: &PGraph) -> GartnerSplit {
    let gr = g.graph();
    let n = gr.n();
    assert!(n <= 20, "exhaustive split search is limited to 20 vertices");
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for m in masks {
        if gartner_split_valid(gr, m) {
            let names = gr.vertices();
            let (v1, v2) = (0..n).partition::<Vec<usize>, _>(|&v| m >> v & 1 == 1);
            return GartnerSplit::Found {
                v1: v1.iter().map(|&v| names[v].clone()).collect(),
                v2: v2.iter().map(|&v| names[v].clone()).collect(),
            };
        }
    }
    GartnerSplit::NoneFound
}

#[cfg(test)]
mod tests;
