use super::completion::{completion_search, CompletionConfig, CompletionOutcome};
use crate::arith::{PrecisionError, TruncatedPadic, Valuation};
use crate::graph::{chordal_structure, clique_polynomial, is_triangle_free, PGraph};
use crate::lie::{triangle_jacobi, triangle_labels};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedCohomology {
    /// dim H^n(G, F_p) for n = 0, 1, ...
    pub betti: Vec<u64>,
    pub note: &'static str,
}

/// Clique counts of the underlying graph.
pub fn predicted_cohomology(g: &PGraph) -> PredictedCohomology {
    PredictedCohomology {
        betti: clique_polynomial(g.graph()),
        note: "unconditional through degree 2; degrees >= 3 valid under quadraticity",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadReason {
    TriangleFree,
    ChordalNonDegenerate,
    CompleteUniform,
    DisjointUnionOfProven,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Diagnostic {
    JacobiFails { triple: [String; 3] },
    JacobiUndecided { triple: [String; 3], reason: String },
    NotChordal { cycle: Vec<String> },
    CompletionRefuted { precision: u32 },
    CompletionInconclusive { reason: String },
    ComponentUnknown { vertices: Vec<String> },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::JacobiFails { triple } => write!(f, "Jacobi fails on ({})", triple.join(", ")),
            Diagnostic::JacobiUndecided { triple, reason } => {
                write!(f, "Jacobi undecided on ({}): {reason}", triple.join(", "))
            }
            Diagnostic::NotChordal { cycle } => write!(f, "chordless cycle {}", cycle.join(" - ")),
            Diagnostic::CompletionRefuted { precision } => {
                write!(f, "no non-degenerate completion mod p^{precision}")
            }
            Diagnostic::CompletionInconclusive { reason } => write!(f, "completion inconclusive: {reason}"),
            Diagnostic::ComponentUnknown { vertices } => {
                write!(f, "component {{{}}} not proven", vertices.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QuadraticityStatus {
    ProvenQuadratic(QuadReason),
    Unknown(Vec<Diagnostic>),
}

impl QuadraticityStatus {
    pub fn is_proven(&self) -> bool {
        matches!(self, QuadraticityStatus::ProvenQuadratic(_))
    }
}

fn triangle_diagnostics(g: &PGraph) -> Vec<Diagnostic> {
    let gr = g.graph();
    let names = gr.vertices();
    let n = gr.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !gr.adjacent(a, b) {
                continue;
            }
            for c in b + 1..n {
                if !(gr.adjacent(b, c) && gr.adjacent(a, c)) {
                    continue;
                }
                let triple = [names[a].clone(), names[b].clone(), names[c].clone()];
                match triangle_jacobi(&triangle_labels(g, a, b, c)) {
                    Ok(true) => {}
                    Ok(false) => out.push(Diagnostic::JacobiFails { triple }),
                    Err(e) => out.push(Diagnostic::JacobiUndecided { triple, reason: e.0 }),
                }
            }
        }
    }
    out
}

pub fn quadraticity_status(g: &PGraph) -> QuadraticityStatus {
    quadraticity_status_with(g, &CompletionConfig::default())
}

pub fn quadraticity_status_with(g: &PGraph, cfg: &CompletionConfig) -> QuadraticityStatus {
    let gr = g.graph();
    if is_triangle_free(gr) {
        return QuadraticityStatus::ProvenQuadratic(QuadReason::TriangleFree);
    }
    let comps = gr.components();
    if comps.len() > 1 {
        let mut diags = Vec::new();
        for comp in &comps {
            if let QuadraticityStatus::Unknown(d) = quadraticity_status_with(&g.induced(comp), cfg) {
                diags.push(Diagnostic::ComponentUnknown {
                    vertices: comp.iter().map(|&v| gr.vertices()[v].clone()).collect(),
                });
                diags.extend(d);
            }
        }
        return if diags.is_empty() {
            QuadraticityStatus::ProvenQuadratic(QuadReason::DisjointUnionOfProven)
        } else {
            QuadraticityStatus::Unknown(diags)
        };
    }
    let mut diags = triangle_diagnostics(g);
    if gr.is_complete() && diags.is_empty() {
        return QuadraticityStatus::ProvenQuadratic(QuadReason::CompleteUniform);
    }
    match chordal_structure(gr) {
        Err(nc) => diags.push(Diagnostic::NotChordal {
            cycle: nc.cycle.iter().map(|&v| gr.vertices()[v].clone()).collect(),
        }),
        Ok(_) => match completion_search(g, cfg) {
            CompletionOutcome::Completed(_) => {
                return QuadraticityStatus::ProvenQuadratic(QuadReason::ChordalNonDegenerate)
            }
            CompletionOutcome::RefutedModPk(k) => diags.push(Diagnostic::CompletionRefuted { precision: k }),
            CompletionOutcome::Inconclusive(reason) => diags.push(Diagnostic::CompletionInconclusive { reason }),
        },
    }
    QuadraticityStatus::Unknown(diags)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicEntry {
    pub edge: (String, String),
    pub vertex: String,
    pub kappa: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicTable {
    pub entries: Vec<CyclotomicEntry>,
    /// Per vertex: whether all incident eigenvalues agree.
    pub vertex_verdicts: Vec<(String, bool)>,
    pub cyclotomic: bool,
}

/// For an edge (x_i, x_j) labelled (a, b): kappa at x_i is b, kappa at x_j is -a.
pub fn cyclotomic_check(g: &PGraph) -> Result<CyclotomicTable, PrecisionError> {
    let gr = g.graph();
    let names = gr.vertices();
    let mut entries = Vec::new();
    let mut per_vertex: Vec<Vec<TruncatedPadic>> = vec![Vec::new(); gr.n()];
    for (&(i, j), (a, b)) in gr.edges().iter().zip(g.labels()) {
        for l in [a, b] {
            if let Valuation::AtLeast(_) = l.valuation() {
                return Err(PrecisionError(format!(
                    "label {l} on ({}, {}) has unknown valuation",
                    names[i], names[j]
                )));
            }
        }
        let edge = (names[i].clone(), names[j].clone());
        for (v, kappa) in [(i, b.clone()), (j, -a)] {
            entries.push(CyclotomicEntry {
                edge: edge.clone(),
                vertex: names[v].clone(),
                kappa: kappa.to_string(),
            });
            per_vertex[v].push(kappa);
        }
    }
    let mut vertex_verdicts = Vec::new();
    for (v, ks) in per_vertex.iter().enumerate() {
        let mut agree = true;
        for k in ks.iter().skip(1) {
            if !(k - &ks[0]).is_zero()? {
                agree = false;
                break;
            }
        }
        vertex_verdicts.push((names[v].clone(), agree));
    }
    let cyclotomic = vertex_verdicts.iter().all(|(_, ok)| *ok);
    Ok(CyclotomicTable {
        entries,
        vertex_verdicts,
        cyclotomic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_pgraph, Graph};
    use crate::presentation::{cup_pairing_matrix, praag_presentation};

    fn mennicke() -> PGraph {
        parse_pgraph("pgraph v1\nvertices x1 x2 x3\nedge x1 x2 0 -5\nedge x2 x3 0 -5\nedge x3 x1 0 -5\n").unwrap()
    }

    #[test]
    fn predicted_examples() {
        let z = |g| PGraph::zero_labelled(g, 5, 4);
        assert_eq!(predicted_cohomology(&z(Graph::cycle(4))).betti, vec![1, 4, 4]);
        let k4e = Graph::from_pairs(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(predicted_cohomology(&z(k4e)).betti, vec![1, 4, 5, 2]);
        assert_eq!(predicted_cohomology(&z(Graph::edgeless(1))).betti, vec![1, 1]);
    }

    #[test]
    fn status_examples() {
        let z = |g| PGraph::zero_labelled(g, 5, 4);
        assert_eq!(
            quadraticity_status(&z(Graph::cycle(4))),
            QuadraticityStatus::ProvenQuadratic(QuadReason::TriangleFree)
        );
        let k4e = Graph::from_pairs(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            quadraticity_status(&z(k4e)),
            QuadraticityStatus::ProvenQuadratic(QuadReason::ChordalNonDegenerate)
        );
        assert_eq!(
            quadraticity_status(&z(Graph::complete(4))),
            QuadraticityStatus::ProvenQuadratic(QuadReason::CompleteUniform)
        );
        let two_triangles = Graph::from_pairs(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(
            quadraticity_status(&z(two_triangles)),
            QuadraticityStatus::ProvenQuadratic(QuadReason::DisjointUnionOfProven)
        );
        let QuadraticityStatus::Unknown(d) = quadraticity_status(&mennicke()) else {
            panic!()
        };
        assert!(d.contains(&Diagnostic::JacobiFails {
            triple: ["x1".into(), "x2".into(), "x3".into()]
        }));
    }

    #[test]
    fn wheel_is_not_chordal() {
        // 4-cycle with a hub: triangles, but the rim is a chordless 4-cycle
        let g = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)]);
        let QuadraticityStatus::Unknown(d) = quadraticity_status(&PGraph::zero_labelled(g, 5, 4)) else {
            panic!()
        };
        assert!(matches!(d[0], Diagnostic::NotChordal { .. }));
    }

    #[test]
    fn proven_graphs_satisfy_relation_bound() {
        for n in 1..=5 {
            for g in Graph::all_on(n) {
                let pg = PGraph::zero_labelled(g, 5, 4);
                let pres = praag_presentation(&pg);
                if quadraticity_status(&pg).is_proven() {
                    assert!(pres.r() <= n * (n - 1) / 2);
                    assert_eq!(cup_pairing_matrix(&pres).rank(), pres.r());
                }
            }
        }
    }

    #[test]
    fn cyclotomic_examples() {
        let t = cyclotomic_check(&mennicke()).unwrap();
        assert!(!t.cyclotomic);
        let x2: Vec<&str> = t.entries.iter().filter(|e| e.vertex == "x2").map(|e| e.kappa.as_str()).collect();
        assert_eq!(x2, vec!["0", "-5"]);
        let star = parse_pgraph("pgraph v1\nvertices x1 x2 x3\nedge x1 x2 0 25\nedge x1 x3 0 25\n").unwrap();
        assert!(cyclotomic_check(&star).unwrap().cyclotomic);
        assert!(cyclotomic_check(&PGraph::zero_labelled(Graph::complete(4), 5, 4)).unwrap().cyclotomic);
        let unknown = parse_pgraph("pgraph v1\nvertices a b\nedge a b 0~ 5\n").unwrap();
        assert!(cyclotomic_check(&unknown).is_err());
    }
}
