//! The full p-graph pipeline as one serializable record.

use crate::gocha::{free_subgroup_verdict_with, ggs_search, FreeSubgroupVerdict, GgsBounds, GgsOutcome};
use crate::graph::{chordal_structure, is_triangle_free, maximal_cliques, PGraph};
use crate::lie::{jacobi_residuals, triangle_jacobi, triangle_labels};
use crate::presentation::{
    abelianization, cyclotomic_check, praag_presentation, predicted_cohomology, quadraticity_status, CyclotomicTable,
    PredictedCohomology, QuadraticityStatus,
};
use crate::quadalg::{mildness_check_with_limit, MildnessReport, MildnessVerdict, DEFAULT_MAX_CANDIDATES};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub mild_depth: usize,
    pub matrix_limit: usize,
    pub ggs: GgsBounds,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            mild_depth: 8,
            matrix_limit: DEFAULT_MAX_CANDIDATES,
            ggs: GgsBounds::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeEcho {
    pub from: String,
    pub to: String,
    pub f1: String,
    pub f2: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub p: u64,
    pub precision: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEcho>,
    pub presentation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleReport {
    pub vertices: [String; 3],
    /// `None` when undecidable at the working precision.
    pub jacobi: Option<bool>,
    pub residuals: [String; 3],
}

/// Either a value or the reason it could not be computed.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error(String),
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(t) => Some(t),
            Outcome::Error(_) => None,
        }
    }
}

impl<T, E: std::fmt::Display> From<Result<T, E>> for Outcome<T> {
    fn from(r: Result<T, E>) -> Self {
        match r {
            Ok(t) => Outcome::Ok(t),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelianizationReport {
    pub group: String,
    pub free_rank: usize,
    pub torsion_exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputEcho,
    pub d: usize,
    pub r: usize,
    pub triangle_free: bool,
    pub chordal: bool,
    pub complete: bool,
    pub predicted: PredictedCohomology,
    pub mildness: MildnessReport,
    pub mild_up_to: Option<usize>,
    pub mild_depth: usize,
    pub triangles: Vec<TriangleReport>,
    pub jacobi_fails: Vec<[String; 3]>,
    pub quadraticity: QuadraticityStatus,
    pub cyclotomic: Outcome<CyclotomicTable>,
    pub ggs: Outcome<GgsOutcome>,
    pub abelianization: Outcome<AbelianizationReport>,
    pub free_subgroup: Outcome<Vec<FreeSubgroupVerdict>>,
}

fn triangles(g: &PGraph) -> Vec<TriangleReport> {
    let gr = g.graph();
    let names = gr.vertices();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for clique in maximal_cliques(gr) {
        for (x, &a) in clique.iter().enumerate() {
            for (y, &b) in clique.iter().enumerate().skip(x + 1) {
                for &c in clique.iter().skip(y + 1) {
                    let mut key = [a, b, c];
                    key.sort_unstable();
                    if !seen.insert(key) {
                        continue;
                    }
                    let [a, b, c] = key;
                    let t = triangle_labels(g, a, b, c);
                    out.push(TriangleReport {
                        vertices: [names[a].clone(), names[b].clone(), names[c].clone()],
                        jacobi: triangle_jacobi(&t).ok(),
                        residuals: jacobi_residuals(&t).map(|r| r.to_string()),
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| x.vertices.cmp(&y.vertices));
    out
}

pub fn analyze(g: &PGraph, opts: &AnalyzeOptions) -> AnalysisReport {
    let gr = g.graph();
    let pres = praag_presentation(g);
    let input = InputEcho {
        p: g.p(),
        precision: g.precision(),
        vertices: gr.vertices().to_vec(),
        edges: gr
            .edges()
            .iter()
            .zip(g.labels())
            .map(|(&(u, v), (f1, f2))| EdgeEcho {
                from: gr.vertices()[u].clone(),
                to: gr.vertices()[v].clone(),
                f1: f1.to_string(),
                f2: f2.to_string(),
            })
            .collect(),
        presentation: pres.to_string(),
    };
    let mildness = mildness_check_with_limit(g, opts.mild_depth, opts.matrix_limit);
    let mild_up_to = match mildness.verdict {
        MildnessVerdict::MildUpTo(n) => Some(n),
        _ => None,
    };
    let triangles = triangles(g);
    let jacobi_fails = triangles.iter().filter(|t| t.jacobi == Some(false)).map(|t| t.vertices.clone()).collect();
    let abelianization = abelianization(&pres)
        .map(|a| AbelianizationReport {
            group: a.to_string(),
            free_rank: a.free_rank,
            torsion_exponents: a.torsion.clone(),
        })
        .into();
    AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input,
        d: pres.d(),
        r: pres.r(),
        triangle_free: is_triangle_free(gr),
        chordal: chordal_structure(gr).is_ok(),
        complete: gr.is_complete(),
        predicted: predicted_cohomology(g),
        mildness,
        mild_up_to,
        mild_depth: opts.mild_depth,
        triangles,
        jacobi_fails,
        quadraticity: quadraticity_status(g),
        cyclotomic: cyclotomic_check(g).into(),
        ggs: ggs_search(&pres, opts.ggs).into(),
        abelianization,
        free_subgroup: free_subgroup_verdict_with(&pres, opts.ggs).into(),
    }
}

impl AnalysisReport {
    /// Canonical JSON: object keys sorted, two-space indentation.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| s.push_str(&format!("{k:<16}{v}\n"));
        line("presentation", self.input.presentation.clone());
        line("p, precision", format!("{}, {}", self.input.p, self.input.precision));
        line("d, r", format!("{}, {}", self.d, self.r));
        line("triangle_free", self.triangle_free.to_string());
        line("chordal", self.chordal.to_string());
        line("complete", self.complete.to_string());
        line("betti", format!("{:?}", self.predicted.betti));
        line("", format!("({})", self.predicted.note));
        let mild = match &self.mildness.verdict {
            MildnessVerdict::MildUpTo(n) => format!("mild_up_to={n}"),
            MildnessVerdict::NotMild { degree, algebra, series } => {
                format!("not mild: degree {degree} has dim {algebra}, series {series}")
            }
            MildnessVerdict::Undecided { verified_through, reason } => {
                format!("undecided after degree {verified_through}: {reason}")
            }
        };
        line("mildness", mild);
        for t in &self.triangles {
            let j = match t.jacobi {
                Some(true) => "holds".to_string(),
                Some(false) => format!("fails, residuals ({})", t.residuals.join(", ")),
                None => "undecided".to_string(),
            };
            line("jacobi", format!("({}) {j}", t.vertices.join(", ")));
        }
        let quad = match &self.quadraticity {
            QuadraticityStatus::ProvenQuadratic(r) => format!("proven ({r:?})"),
            QuadraticityStatus::Unknown(ds) => {
                let ds: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                format!("unknown: {}", ds.join("; "))
            }
        };
        line("quadraticity", quad);
        line(
            "cyclotomic",
            match &self.cyclotomic {
                Outcome::Ok(t) => t.cyclotomic.to_string(),
                Outcome::Error(e) => format!("undecided: {e}"),
            },
        );
        line(
            "abelianization",
            match &self.abelianization {
                Outcome::Ok(a) => a.group.clone(),
                Outcome::Error(e) => format!("undecided: {e}"),
            },
        );
        line(
            "ggs",
            match &self.ggs {
                Outcome::Ok(GgsOutcome::Certificate(c)) => {
                    let w: Vec<String> = c.weights.weights().iter().map(|w| w.to_string()).collect();
                    format!("certificate, weights [{}], T0 = {}, value = {}", w.join(", "), c.t0, c.value)
                }
                Outcome::Ok(GgsOutcome::NoneFound) => "none found".to_string(),
                Outcome::Error(e) => format!("error: {e}"),
            },
        );
        if let Outcome::Ok(vs) = &self.free_subgroup {
            for v in vs {
                let text = match v {
                    FreeSubgroupVerdict::PowerfulByCompleteness { justification } => {
                        format!("powerful by completeness: {justification}")
                    }
                    FreeSubgroupVerdict::FreeSubgroupByMissingEdge { justification, .. } => {
                        format!("free subgroup: {justification}")
                    }
                    FreeSubgroupVerdict::FreeSubgroupByGgs { justification, .. } => {
                        format!("free subgroup (GGS): {justification}")
                    }
                };
                line("free_subgroup", text);
            }
        }
        s
    }
}
