use super::{
    amalgam_cohomology, check_amalgam_hypotheses, mayer_vietoris_dims, AmalgamHypotheses, AssemblyError,
    RestrictionData,
};
use crate::graph::{chordal_structure, clique_polynomial, PGraph, PastingTree};
use crate::presentation::{completion_search, CompletionConfig, CompletionOutcome};
use crate::quadalg::{hilbert_dims, QuadraticAlgebra};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordalPipelineError {
    #[error("graph is not chordal: chordless cycle {}", .0.join(" - "))]
    NotChordal(Vec<String>),
    #[error("p-graph is not known to be non-degenerate: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProofTree {
    /// A complete subgraph: uniform group, exterior cohomology.
    Leaf { vertices: Vec<String>, dims: Vec<usize> },
    Amalgam {
        separator: Vec<String>,
        left: Box<ProofTree>,
        right: Box<ProofTree>,
        hypotheses: AmalgamHypotheses,
        dims: Vec<usize>,
        mayer_vietoris: Vec<usize>,
    },
}

impl ProofTree {
    pub fn dims(&self) -> &[usize] {
        match self {
            ProofTree::Leaf { dims, .. } | ProofTree::Amalgam { dims, .. } => dims,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ProofTree::Leaf { .. } => 1,
            ProofTree::Amalgam { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordalProof {
    pub tree: ProofTree,
    pub dims: Vec<usize>,
    pub predicted: Vec<u64>,
    pub matches_prediction: bool,
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn build(
    g: &PGraph,
    node: &PastingTree,
) -> Result<(QuadraticAlgebra, ProofTree), ChordalPipelineError> {
    let names = |vs: &[usize]| vs.iter().map(|&v| g.graph().vertices()[v].clone()).collect::<Vec<_>>();
    let p = g.p();
    match node {
        PastingTree::Leaf(vs) => {
            let alg = QuadraticAlgebra::exterior(p, names(vs));
            let dims = trim(hilbert_dims(&alg, vs.len() + 1).map_err(AssemblyError::from)?);
            Ok((alg, ProofTree::Leaf { vertices: names(vs), dims }))
        }
        PastingTree::Paste { left, right, separator } => {
            let (al, tl) = build(g, left)?;
            let (ar, tr) = build(g, right)?;
            let h = QuadraticAlgebra::exterior(p, names(separator));
            let d1 = RestrictionData::projection(al, h.clone())?;
            let d2 = RestrictionData::projection(ar, h)?;
            let hypotheses = check_amalgam_hypotheses(&d1, &d2)?;
            let alg = amalgam_cohomology(&d1, &d2)?;
            let n = node.vertices().len() + 1;
            let dims = trim(hilbert_dims(&alg, n).map_err(AssemblyError::from)?);
            let mv = mayer_vietoris_dims(&d1, &d2, n)?;
            let mayer_vietoris = trim(std::iter::once(1).chain(mv.iter().map(|m| m.total)).collect());
            Ok((
                alg,
                ProofTree::Amalgam {
                    separator: names(separator),
                    left: Box::new(tl),
                    right: Box::new(tr),
                    hypotheses,
                    dims,
                    mayer_vietoris,
                },
            ))
        }
    }
}

/// Cut a chordal non-degenerate p-graph along complete separators down to
/// complete subgraphs and reassemble the cohomology by amalgams.
pub fn chordal_pipeline(g: &PGraph) -> Result<ChordalProof, ChordalPipelineError> {
    let gr = g.graph();
    let structure = chordal_structure(gr).map_err(|nc| {
        ChordalPipelineError::NotChordal(nc.cycle.iter().map(|&v| gr.vertices()[v].clone()).collect())
    })?;
    match completion_search(g, &CompletionConfig::default()) {
        CompletionOutcome::Completed(_) => {}
        CompletionOutcome::RefutedModPk(k) => {
            return Err(ChordalPipelineError::Degenerate(format!("no completion mod p^{k}")))
        }
        CompletionOutcome::Inconclusive(why) => return Err(ChordalPipelineError::Degenerate(why)),
    }
    let (_, tree) = build(g, &structure.tree)?;
    let predicted = clique_polynomial(gr);
    let dims = tree.dims().to_vec();
    let matches_prediction = dims.iter().map(|&x| x as u64).eq(predicted.iter().copied());
    Ok(ChordalProof {
        tree,
        dims,
        predicted,
        matches_prediction,
    })
}
