//! Lie lattices: the triangle Jacobi system, family classification, complete
//! graph lattices, the SL_2 linear system, and truncated Campbell-Hausdorff
//! products.

mod bch;
mod lattice;
mod sl2;
mod triangle;

pub use bch::{bch_multiply, group_commutator, lazard_verify, solve_edge_relation, BchConfig, EdgeRelation};
pub use lattice::{complete_graph_lattice, is_metabelian, oriented_label, PowerfulLieLattice};
pub use sl2::{sl2_matrix, sl2_rank_over_fp, sl2_rank_over_q, sl2_symbolic_check, sl2_system, Sl2System};
pub use triangle::{
    classify_triangle, jacobi_residuals, triangle_jacobi, triangle_labels, Classification, FamilyTag,
    FrameChange, TriangleLabels,
};

use crate::arith::PrecisionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("not a Lie lattice: Jacobi residuals {0:?}")]
    NotALattice(Vec<String>),
    #[error("Jacobi identity fails on the triple ({0}, {1}, {2})")]
    TripleFailure(String, String, String),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("p = 2 is not supported on this path")]
    PrimeTwo,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("graph is not complete")]
    NotComplete,
    #[error("term of bracket degree {degree} is not p-integral")]
    NonIntegralTerm { degree: usize },
    #[error("truncation unstable: degree caps {0} and {1} disagree")]
    TruncationUnstable(usize, usize),
    #[error("span of X_{0}, X_{1} is not closed under the bracket")]
    NotClosed(usize, usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
