//! Cohomology of amalgamated products and HNN extensions of quadratic
//! pro-p groups, assembled from restriction data, with the hypothesis
//! checks and a recursive pipeline for chordal p-graphs.

mod chordal;
mod fixture;

pub use chordal::{chordal_pipeline, ChordalPipelineError, ProofTree};
pub use fixture::{load_fixture, AlgebraRecord, Fixture, FixtureError, RelationSpec};

use crate::arith::FpMatrix;
use crate::presentation::parse_word;
use crate::quadalg::{hilbert_dims, QuadAlgError, QuadraticAlgebra};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),
    #[error("restriction map has shape {got:?}, expected {expected:?}")]
    Shape { got: (usize, usize), expected: (usize, usize) },
    #[error("restriction map does not send the relations of {0} into those of the subgroup")]
    NotAMorphism(String),
    #[error("algebras over different primes")]
    PrimeMismatch,
    #[error("subgroup algebras differ between the two sides")]
    SubgroupMismatch,
    #[error("bad image word for {generator}: {reason}")]
    BadWord { generator: String, reason: String },
    #[error(transparent)]
    Algebra(#[from] QuadAlgError),
}

/// The degree-1 restriction from an ambient cohomology algebra to a
/// subgroup's, as a matrix with one row per subgroup generator and one
/// column per ambient generator. Row j is the image of subgroup generator j
/// in the ambient Frattini quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionData {
    pub ambient: QuadraticAlgebra,
    pub sub: QuadraticAlgebra,
    pub map: FpMatrix,
}

/// A subspace of F_p^n kept in reduced row-echelon form.
#[derive(Debug, Clone)]
struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    fn span(p: u64, n: usize, rows: &[Vec<u64>]) -> Self {
        let rr = FpMatrix::from_residue_rows(p, n, rows).rref();
        let basis = FpMatrix::from_residue_rows(p, n, &rr.reduced.row_vecs()[..rr.rank]);
        Subspace {
            basis,
            pivots: rr.pivots,
        }
    }

    fn of(m: &FpMatrix) -> Self {
        Self::span(m.p(), m.cols(), &m.row_vecs())
    }

    fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of v modulo the subspace, on the non-pivot columns.
    fn quotient_coords(&self, v: &[u64]) -> Vec<u64> {
        let p = self.basis.p();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = v[c];
            if f != 0 {
                for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = (*x + (p - f) * b % p) % p;
                }
            }
        }
        v.into_iter()
            .enumerate()
            .filter(|(c, _)| !self.pivots.contains(c))
            .map(|(_, x)| x)
            .collect()
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.quotient_coords(v).iter().all(|&x| x == 0)
    }
}

fn tensor_apply(m: &FpMatrix, v: &[u64]) -> Vec<u64> {
    let (r, c) = (m.rows(), m.cols());
    let p = m.p();
    let mut out = vec![0u64; r * r];
    for (ab, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let (a, b) = (ab / c, ab % c);
        for j1 in 0..r {
            let y = m.get(j1, a);
            if y == 0 {
                continue;
            }
            for j2 in 0..r {
                let z = m.get(j2, b);
                if z != 0 {
                    let slot = &mut out[j1 * r + j2];
                    *slot = (*slot + x * y % p * z) % p;
                }
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

impl RestrictionData {
    pub fn new(ambient: QuadraticAlgebra, sub: QuadraticAlgebra, map: FpMatrix) -> Result<Self, AssemblyError> {
        if ambient.p() != sub.p() || map.p() != ambient.p() {
            return Err(AssemblyError::PrimeMismatch);
        }
        let expected = (sub.dim_v(), ambient.dim_v());
        if (map.rows(), map.cols()) != expected {
            return Err(AssemblyError::Shape {
                got: (map.rows(), map.cols()),
                expected,
            });
        }
        let omega_h = Subspace::of(sub.omega());
        for r in 0..ambient.omega().rows() {
            if !omega_h.contains(&tensor_apply(&map, ambient.omega().row(r))) {
                return Err(AssemblyError::NotAMorphism(ambient.names().join(",")));
            }
        }
        Ok(RestrictionData { ambient, sub, map })
    }

    /// Coordinate projection onto the named subset of generators.
    pub fn projection(ambient: QuadraticAlgebra, sub: QuadraticAlgebra) -> Result<Self, AssemblyError> {
        let rows: Vec<Vec<u64>> = sub
            .names()
            .iter()
            .map(|n| {
                let i = ambient
                    .names()
                    .iter()
                    .position(|a| a == n)
                    .ok_or_else(|| AssemblyError::BadWord {
                        generator: n.clone(),
                        reason: "not an ambient generator".into(),
                    })?;
                Ok(unit(ambient.dim_v(), i))
            })
            .collect::<Result<_, AssemblyError>>()?;
        let map = FpMatrix::from_residue_rows(ambient.p(), ambient.dim_v(), &rows);
        Self::new(ambient, sub, map)
    }

    fn p(&self) -> u64 {
        self.ambient.p()
    }

    /// Basis of ker(res^1).
    pub fn kernel_1(&self) -> Vec<Vec<u64>> {
        self.map.kernel()
    }

    /// ker(res^2) inside A_2 of the ambient algebra, as a subspace of
    /// V (x) V containing Omega.
    fn kernel_2(&self) -> Subspace {
        let p = self.p();
        let d = self.ambient.dim_v();
        let omega_h = Subspace::of(self.sub.omega());
        // columns of N: images of basis tensors in A_H,2
        let cols: Vec<Vec<u64>> = (0..d * d)
            .map(|ab| omega_h.quotient_coords(&tensor_apply(&self.map, &unit(d * d, ab))))
            .collect();
        let h = cols.first().map_or(0, |c| c.len());
        let n = FpMatrix::from_residue_rows(p, h, &cols).transpose();
        Subspace::span(p, d * d, &n.kernel())
    }

    /// (ker res^1) A^1 + A^1 (ker res^1) + Omega.
    fn kernel_ideal_2(&self) -> Subspace {
        let d = self.ambient.dim_v();
        let p = self.p();
        let mut rows = self.ambient.omega().row_vecs();
        for k in self.kernel_1() {
            for i in 0..d {
                let mut left = vec![0u64; d * d];
                let mut right = vec![0u64; d * d];
                for (j, &x) in k.iter().enumerate() {
                    left[j * d + i] = x % p;
                    right[i * d + j] = x % p;
                }
                rows.push(left);
                rows.push(right);
            }
        }
        Subspace::span(p, d * d, &rows)
    }

    /// The ambient algebra modulo the ideal generated by ker(res^1), written
    /// on the subgroup's generators.
    pub fn quotient_by_kernel(&self) -> Result<QuadraticAlgebra, AssemblyError> {
        let rels: Vec<Vec<u64>> = (0..self.ambient.omega().rows())
            .map(|r| tensor_apply(&self.map, self.ambient.omega().row(r)))
            .collect();
        Ok(QuadraticAlgebra::new(self.p(), self.sub.names().to_vec(), &rels)?)
    }

    fn generator_label(&self, v: &[u64]) -> String {
        let names = self.ambient.names();
        let nz: Vec<(usize, u64)> = v.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
        match nz.as_slice() {
            [(i, 1)] => names[*i].clone(),
            _ => nz
                .iter()
                .map(|&(i, x)| if x == 1 { names[i].clone() } else { format!("{x}{}", names[i]) })
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub detail: String,
}

/// Condition (i): res^1 is onto.
pub fn check_surjective(d: &RestrictionData) -> ConditionCheck {
    let rank = d.map.rank();
    ConditionCheck {
        holds: rank == d.sub.dim_v(),
        detail: format!("rank res^1 = {rank}, dim H^1 of subgroup = {}", d.sub.dim_v()),
    }
}

/// Condition (ii): ker res^2 = ker res^1 . H^1.
pub fn check_kernel_generated(d: &RestrictionData) -> ConditionCheck {
    let base = d.ambient.omega_dim();
    let k2 = d.kernel_2().dim() - base;
    let ideal = d.kernel_ideal_2().dim() - base;
    ConditionCheck {
        holds: k2 == ideal,
        detail: format!("dim ker res^2 = {k2}, dim (ker res^1 . H^1) = {ideal}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamHypotheses {
    pub condition_i: [ConditionCheck; 2],
    pub condition_ii: [ConditionCheck; 2],
}

impl AmalgamHypotheses {
    pub fn i_holds(&self) -> bool {
        self.condition_i.iter().all(|c| c.holds)
    }
    pub fn ii_holds(&self) -> bool {
        self.condition_ii.iter().all(|c| c.holds)
    }
}

pub fn check_amalgam_hypotheses(d1: &RestrictionData, d2: &RestrictionData) -> Result<AmalgamHypotheses, AssemblyError> {
    if d1.p() != d2.p() {
        return Err(AssemblyError::PrimeMismatch);
    }
    if d1.sub != d2.sub {
        return Err(AssemblyError::SubgroupMismatch);
    }
    Ok(AmalgamHypotheses {
        condition_i: [check_surjective(d1), check_surjective(d2)],
        condition_ii: [check_kernel_generated(d1), check_kernel_generated(d2)],
    })
}

/// A recognisable sufficient condition for the amalgam to be proper.
pub fn recognize_amalgam_properness(d1: &RestrictionData, _d2: &RestrictionData) -> Option<&'static str> {
    (d1.sub.dim_v() <= 1).then_some("amalgamated subgroup is pro-cyclic")
}

pub fn recognize_hnn_properness(d: &RestrictionData) -> Option<&'static str> {
    (d.sub.dim_v() <= 1).then_some("associated subgroup is pro-cyclic")
}

/// The algebra on V_1 + W + V_2 whose relations are the kernel of the
/// degree-2 map into H^2(G_1) + H^2(G_2) induced by v_1 -> (v_1, 0),
/// v_2 -> (0, v_2), w -> (lift_1 w, lift_2 w).
pub fn amalgam_cohomology(d1: &RestrictionData, d2: &RestrictionData) -> Result<QuadraticAlgebra, AssemblyError> {
    let hyp = check_amalgam_hypotheses(d1, d2)?;
    if !hyp.i_holds() || !hyp.ii_holds() {
        return Err(AssemblyError::HypothesesNotSatisfied(describe(&hyp)));
    }
    let p = d1.p();
    let (n1, n2, w) = (d1.ambient.dim_v(), d2.ambient.dim_v(), d1.sub.dim_v());
    let lift = |d: &RestrictionData, j: usize| {
        d.map
            .transpose()
            .solve_left(&unit(w, j))
            .expect("res^1 is onto")
    };
    // images of the new generators in V_{G1} + V_{G2}
    let mut images: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut names = Vec::new();
    for k in d1.kernel_1() {
        names.push(d1.generator_label(&k));
        images.push((k, vec![0; n2]));
    }
    for j in 0..w {
        names.push(d1.sub.names()[j].clone());
        images.push((lift(d1, j), lift(d2, j)));
    }
    for k in d2.kernel_1() {
        names.push(d2.generator_label(&k));
        images.push((vec![0; n1], k));
    }
    let om1 = Subspace::of(d1.ambient.omega());
    let om2 = Subspace::of(d2.ambient.omega());
    let outer = |a: &[u64], b: &[u64]| -> Vec<u64> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| x * y % p)).collect()
    };
    let rows: Vec<Vec<u64>> = images
        .iter()
        .flat_map(|a| images.iter().map(move |b| (a, b)))
        .map(|(a, b)| {
            let mut r = om1.quotient_coords(&outer(&a.0, &b.0));
            r.extend(om2.quotient_coords(&outer(&a.1, &b.1)));
            r
        })
        .collect();
    let width = rows.first().map_or(0, |r| r.len());
    let x = FpMatrix::from_residue_rows(p, width, &rows);
    let omega = x.transpose().kernel();
    Ok(QuadraticAlgebra::new(p, names, &omega)?)
}

fn describe(h: &AmalgamHypotheses) -> String {
    let mut parts = Vec::new();
    for (side, c) in h.condition_i.iter().enumerate() {
        if !c.holds {
            parts.push(format!("(i) fails for G{}: {}", side + 1, c.detail));
        }
    }
    for (side, c) in h.condition_ii.iter().enumerate() {
        if !c.holds {
            parts.push(format!("(ii) fails for G{}: {}", side + 1, c.detail));
        }
    }
    parts.join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MayerVietorisDegree {
    pub degree: usize,
    /// dim V_1 . H^{n-1}(G_1)
    pub v1_part: usize,
    /// dim V_2 . H^{n-1}(G_2)
    pub v2_part: usize,
    /// dim H^n(H)
    pub h_part: usize,
    pub total: usize,
}

/// dim ker f_H^n for n = 1..=N, each split into its three summands.
pub fn mayer_vietoris_dims(
    d1: &RestrictionData,
    d2: &RestrictionData,
    n: usize,
) -> Result<Vec<MayerVietorisDegree>, AssemblyError> {
    let hyp = check_amalgam_hypotheses(d1, d2)?;
    if !hyp.i_holds() || !hyp.ii_holds() {
        return Err(AssemblyError::HypothesesNotSatisfied(describe(&hyp)));
    }
    let ideal_dims = |d: &RestrictionData| -> Result<Vec<usize>, AssemblyError> {
        let full = hilbert_dims(&d.ambient, n)?;
        let quot = hilbert_dims(&d.quotient_by_kernel()?, n)?;
        Ok(full.iter().zip(&quot).map(|(a, b)| a - b).collect())
    };
    let (i1, i2) = (ideal_dims(d1)?, ideal_dims(d2)?);
    let h = hilbert_dims(&d1.sub, n)?;
    Ok((1..=n)
        .map(|k| MayerVietorisDegree {
            degree: k,
            v1_part: i1[k],
            v2_part: i2[k],
            h_part: h[k],
            total: i1[k] + i2[k] + h[k],
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnnHypotheses {
    pub condition_i: ConditionCheck,
    pub condition_ii: ConditionCheck,
    pub condition_iii: ConditionCheck,
}

impl HnnHypotheses {
    pub fn all_hold(&self) -> bool {
        self.condition_i.holds && self.condition_ii.holds && self.condition_iii.holds
    }
}

/// `phi` gives, for each generator of A in order, its image as a word in the
/// generators of G_0. Condition (iii) compares exponent vectors mod p with
/// the rows of the restriction map.
pub fn check_hnn_hypotheses(d: &RestrictionData, phi: &[String]) -> Result<HnnHypotheses, AssemblyError> {
    let a_names = d.sub.names();
    if phi.len() != a_names.len() {
        return Err(AssemblyError::BadWord {
            generator: format!("{} images", phi.len()),
            reason: format!("expected {}", a_names.len()),
        });
    }
    let p = d.p();
    let mut bad = Vec::new();
    for (j, word) in phi.iter().enumerate() {
        let w = parse_word(word, d.ambient.names()).map_err(|e| AssemblyError::BadWord {
            generator: a_names[j].clone(),
            reason: e.to_string(),
        })?;
        if w.exponent_vector(d.ambient.dim_v(), p) != d.map.row(j) {
            bad.push(format!("{} -> {}", a_names[j], word));
        }
    }
    let condition_iii = ConditionCheck {
        holds: bad.is_empty(),
        detail: if bad.is_empty() {
            "phi is the identity modulo the Frattini subgroup".into()
        } else {
            format!("phi moves the Frattini class of: {}", bad.join(", "))
        },
    };
    Ok(HnnHypotheses {
        condition_i: check_surjective(d),
        condition_ii: check_kernel_generated(d),
        condition_iii,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnnCohomology {
    pub dims: Vec<usize>,
    /// dim H^n(G_0) per degree
    pub base_part: Vec<usize>,
    /// dim alpha_t . H^{n-1}(A) per degree
    pub alpha_t_part: Vec<usize>,
}

/// dims[n] = dim H^n(G_0) + dim H^{n-1}(A).
pub fn hnn_cohomology(d: &RestrictionData, phi: &[String], n: usize) -> Result<HnnCohomology, AssemblyError> {
    let hyp = check_hnn_hypotheses(d, phi)?;
    if !hyp.all_hold() {
        let mut parts = Vec::new();
        for (tag, c) in [("i", &hyp.condition_i), ("ii", &hyp.condition_ii), ("iii", &hyp.condition_iii)] {
            if !c.holds {
                parts.push(format!("({tag}) fails: {}", c.detail));
            }
        }
        return Err(AssemblyError::HypothesesNotSatisfied(parts.join("; ")));
    }
    let g0 = hilbert_dims(&d.ambient, n)?;
    let a = hilbert_dims(&d.sub, n)?;
    let alpha_t_part: Vec<usize> = (0..=n).map(|k| if k == 0 { 0 } else { a[k - 1] }).collect();
    Ok(HnnCohomology {
        dims: g0.iter().zip(&alpha_t_part).map(|(x, y)| x + y).collect(),
        base_part: g0,
        alpha_t_part,
    })
}

/// H^*(G_0) with a new generator t that anticommutes with everything,
/// squares to zero and kills ker(res^1).
pub fn hnn_algebra(d: &RestrictionData) -> Result<QuadraticAlgebra, AssemblyError> {
    let p = d.p();
    let n0 = d.ambient.dim_v();
    let n = n0 + 1;
    let t = n0;
    let mut rels = Vec::new();
    for r in d.ambient.omega().row_vecs() {
        let mut v = vec![0u64; n * n];
        for (ab, x) in r.into_iter().enumerate() {
            v[(ab / n0) * n + ab % n0] = x;
        }
        rels.push(v);
    }
    rels.push(unit(n * n, t * n + t));
    for i in 0..n0 {
        let mut v = unit(n * n, t * n + i);
        v[i * n + t] = 1;
        rels.push(v);
    }
    for k in d.kernel_1() {
        let mut v = vec![0u64; n * n];
        for (i, x) in k.into_iter().enumerate() {
            v[t * n + i] = x % p;
        }
        rels.push(v);
    }
    let mut names = d.ambient.names().to_vec();
    names.push("t".into());
    Ok(QuadraticAlgebra::new(p, names, &rels)?)
}

#[cfg(test)]
mod tests;
