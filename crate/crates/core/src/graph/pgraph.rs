use super::{Graph, GraphError};
use crate::arith::{is_prime, TruncatedPadic, Valuation};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_P: u64 = 5;
pub const DEFAULT_PRECISION: u32 = 4;

/// A combinatorial graph with a p-labelling f(e) = (f1, f2) on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGraph {
    graph: Graph,
    p: u64,
    precision: u32,
    labels: Vec<(TruncatedPadic, TruncatedPadic)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `pgraph v1`")]
    MissingHeader,
    #[error("{0}")]
    Syntax(String),
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("antiparallel pair: {0} -> {1} already present")]
    Antiparallel(String, String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("edge {0} -> {1} is missing its label")]
    MissingLabel(String, String),
    #[error("label {token} has valuation below {required}")]
    LabelValuation { token: String, required: u32 },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Minimum label valuation: 1, or 2 when p = 2.
pub fn min_label_valuation(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Whether a label coordinate is admissible (valuation at least the minimum).
pub fn label_ok(x: &TruncatedPadic) -> bool {
    let need = min_label_valuation(x.p());
    match x.valuation() {
        Valuation::Infinite => true,
        Valuation::Exact(v) | Valuation::AtLeast(v) => v >= need,
    }
}

impl PGraph {
    pub fn new(
        graph: Graph,
        p: u64,
        precision: u32,
        labels: Vec<(TruncatedPadic, TruncatedPadic)>,
    ) -> Result<Self, String> {
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        if precision == 0 {
            return Err("precision must be positive".into());
        }
        if labels.len() != graph.edges().len() {
            return Err("one label per edge required".into());
        }
        for (a, b) in &labels {
            for x in [a, b] {
                if x.p() != p || x.precision() != precision {
                    return Err(format!("label {x} has the wrong prime or precision"));
                }
                if !label_ok(x) {
                    return Err(format!("label {x} has valuation below {}", min_label_valuation(p)));
                }
            }
        }
        Ok(PGraph {
            graph,
            p,
            precision,
            labels,
        })
    }

    /// Every edge labelled (0, 0) exactly.
    pub fn zero_labelled(graph: Graph, p: u64, precision: u32) -> Self {
        let z = TruncatedPadic::exact_zero(p, precision);
        let labels = vec![(z.clone(), z); graph.edges().len()];
        PGraph::new(graph, p, precision, labels).expect("zero labels are admissible")
    }

    /// Labels given as exact integers, one pair per edge.
    pub fn with_int_labels(
        graph: Graph,
        p: u64,
        precision: u32,
        labels: &[(i64, i64)],
    ) -> Result<Self, String> {
        let l = labels
            .iter()
            .map(|&(a, b)| {
                (
                    TruncatedPadic::from_int(p, precision, a),
                    TruncatedPadic::from_int(p, precision, b),
                )
            })
            .collect();
        PGraph::new(graph, p, precision, l)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn labels(&self) -> &[(TruncatedPadic, TruncatedPadic)] {
        &self.labels
    }

    /// Full p-subgraph on the given vertex indices.
    pub fn induced(&self, subset: &[usize]) -> PGraph {
        let g = self.graph.induced(subset);
        let labels = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (i, rev) = self.graph.edge_between(subset[a], subset[b]).unwrap();
                debug_assert!(!rev);
                self.labels[i].clone()
            })
            .collect();
        PGraph {
            graph: g,
            p: self.p,
            precision: self.precision,
            labels,
        }
    }

    /// Add an edge (a, b) with the given label.
    pub fn with_edge(
        &self,
        a: usize,
        b: usize,
        label: (TruncatedPadic, TruncatedPadic),
    ) -> Result<PGraph, String> {
        let mut edges = self.graph.edges().to_vec();
        edges.push((a, b));
        let g = Graph::new(self.graph.vertices().to_vec(), edges).map_err(|e| e.to_string())?;
        let mut labels = self.labels.clone();
        labels.push(label);
        PGraph::new(g, self.p, self.precision, labels)
    }

    /// Canonical text form; parse(to_text(g)) == g.
    pub fn to_text(&self) -> String {
        let mut s = String::from("pgraph v1\n");
        s.push_str(&format!("p {}\nprecision {}\n", self.p, self.precision));
        s.push_str("vertices");
        for v in self.graph.vertices() {
            s.push(' ');
            s.push_str(v);
        }
        s.push('\n');
        for (&(a, b), (f1, f2)) in self.graph.edges().iter().zip(&self.labels) {
            let names = self.graph.vertices();
            s.push_str(&format!("edge {} {} {} {}\n", names[a], names[b], f1, f2));
        }
        s
    }
}

impl fmt::Display for PGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parse with p = 5 and precision 4 as defaults.
pub fn parse_pgraph(text: &str) -> Result<PGraph, ParseError> {
    parse_pgraph_with(text, DEFAULT_P, DEFAULT_PRECISION)
}

/// Parse the line-based p-graph format; `p` and `precision` lines override
/// the given defaults.
pub fn parse_pgraph_with(
    text: &str,
    default_p: u64,
    default_precision: u32,
) -> Result<PGraph, ParseError> {
    let err = |line: usize, kind| ParseError { line, kind };
    let syntax = |line: usize, msg: &str| ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.to_string()),
    };

    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();

    let mut it = lines.iter();
    match it.next() {
        Some((_, t)) if t[..] == ["pgraph", "v1"] => {}
        Some((n, _)) => return Err(err(*n, ParseErrorKind::MissingHeader)),
        None => return Err(err(1, ParseErrorKind::MissingHeader)),
    }

    let (mut p, mut k) = (default_p, default_precision);
    let mut p_line = 0;
    let mut vertices: Option<Vec<String>> = None;
    let mut edge_lines = Vec::new();
    for (n, toks) in it {
        match toks[0] {
            "p" => {
                if toks.len() != 2 {
                    return Err(syntax(*n, "expected `p <prime>`"));
                }
                p = toks[1].parse().map_err(|_| syntax(*n, "p must be a positive integer"))?;
                p_line = *n;
            }
            "precision" => {
                if toks.len() != 2 {
                    return Err(syntax(*n, "expected `precision <k>`"));
                }
                k = toks[1]
                    .parse()
                    .ok()
                    .filter(|&k: &u32| k >= 1)
                    .ok_or_else(|| syntax(*n, "precision must be a positive integer"))?;
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(syntax(*n, "repeated vertices line"));
                }
                let names: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                for (i, v) in names.iter().enumerate() {
                    if names[..i].contains(v) {
                        return Err(err(*n, ParseErrorKind::DuplicateVertex(v.clone())));
                    }
                }
                vertices = Some(names);
            }
            "edge" => edge_lines.push((*n, toks)),
            other => return Err(syntax(*n, &format!("unknown directive `{other}`"))),
        }
    }
    if !is_prime(p) {
        return Err(err(p_line.max(1), ParseErrorKind::NonPrime(p)));
    }
    let vertices = vertices.ok_or_else(|| syntax(lines.last().map_or(1, |l| l.0), "missing vertices line"))?;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut labels = Vec::new();
    for (n, toks) in edge_lines {
        if toks.len() < 3 {
            return Err(syntax(n, "expected `edge <origin> <terminus> <f1> <f2>`"));
        }
        let idx = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| err(n, ParseErrorKind::UnknownVertex(name.to_string())))
        };
        let (a, b) = (idx(toks[1])?, idx(toks[2])?);
        let (na, nb) = (toks[1].to_string(), toks[2].to_string());
        if a == b {
            return Err(err(n, ParseErrorKind::Loop(na)));
        }
        if edges.contains(&(b, a)) {
            return Err(err(n, ParseErrorKind::Antiparallel(nb, na)));
        }
        if edges.contains(&(a, b)) {
            return Err(err(n, ParseErrorKind::DuplicateEdge(na, nb)));
        }
        if toks.len() < 5 {
            return Err(err(n, ParseErrorKind::MissingLabel(na, nb)));
        }
        if toks.len() > 5 {
            return Err(syntax(n, "trailing tokens after label"));
        }
        let mut pair = Vec::new();
        for t in &toks[3..5] {
            let x = TruncatedPadic::parse_token(p, k, t)
                .ok_or_else(|| syntax(n, &format!("bad label token `{t}`")))?;
            if !label_ok(&x) {
                return Err(err(
                    n,
                    ParseErrorKind::LabelValuation {
                        token: t.to_string(),
                        required: min_label_valuation(p),
                    },
                ));
            }
            pair.push(x);
        }
        let f2 = pair.pop().unwrap();
        let f1 = pair.pop().unwrap();
        edges.push((a, b));
        labels.push((f1, f2));
    }
    let graph = Graph::new(vertices, edges).map_err(|e| {
        // validated above; kept for completeness
        let kind = match e {
            GraphError::Loop(v) => ParseErrorKind::Loop(v),
            other => ParseErrorKind::Syntax(other.to_string()),
        };
        err(0, kind)
    })?;
    PGraph::new(graph, p, k, labels).map_err(|m| syntax(0, &m))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const MENNICKE: &str = "pgraph v1
p 5
precision 4
vertices x1 x2 x3
edge x1 x2 0 -5
edge x2 x3 0 -5
edge x3 x1 0 -5
";

    #[test]
    fn mennicke_parses() {
        let g = parse_pgraph(MENNICKE).unwrap();
        assert_eq!(g.graph().edges().len(), 3);
        assert_eq!(g.graph().vertices(), ["x1", "x2", "x3"]);
        assert_eq!(g.to_text(), MENNICKE);
    }

    #[test]
    fn roundtrip_with_unknown_zero() {
        let text = "pgraph v1\np 3\nprecision 2\nvertices a b c\nedge a b 0~ 3\nedge c b -9 0\n";
        let g = parse_pgraph(text).unwrap();
        assert_eq!(g.to_text(), text);
        assert_eq!(parse_pgraph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn comments_and_defaults() {
        let text = "# demo\npgraph v1 # header\nvertices a b\nedge a b 5 25 # edge\n";
        let g = parse_pgraph(text).unwrap();
        assert_eq!((g.p(), g.precision()), (5, 4));
    }

    fn kind(text: &str) -> ParseError {
        parse_pgraph(text).unwrap_err()
    }

    #[test]
    fn diagnostics() {
        let e = kind("pgraph v1\nvertices a b\nedge a b 5 5\nedge b a 5 5\n");
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::Antiparallel(..)));

        let e = kind("pgraph v1\nvertices a b\nedge a a 5 5\n");
        assert!(matches!(e.kind, ParseErrorKind::Loop(_)));

        let e = kind("pgraph v1\nvertices a b\nedge a b 5\n");
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::MissingLabel(..)));

        let e = kind("pgraph v1\np 2\nvertices a b\nedge a b 2 4\n");
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::LabelValuation { required: 2, .. }));

        let e = kind("pgraph v1\np 6\nvertices a b\n");
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::NonPrime(6));

        let e = kind("pgraph v1\nvertices a b\nedge a b 1 5\n");
        assert!(matches!(e.kind, ParseErrorKind::LabelValuation { required: 1, .. }));

        assert_eq!(kind("graph\n").kind, ParseErrorKind::MissingHeader);
    }
}
