//! Pro-p presentations in commutator-power form: p-RAAG presentations,
//! images modulo the third Zassenhaus term, cup-product pairings,
//! abelianizations and the graph-level analyses built on them.

mod completion;
mod status;

pub use completion::{completion_search, CompletionConfig, CompletionOutcome};
pub use status::{
    cyclotomic_check, predicted_cohomology, quadraticity_status, CyclotomicEntry, CyclotomicTable,
    Diagnostic, PredictedCohomology, QuadReason, QuadraticityStatus, quadraticity_status_with,
};

use crate::arith::{smith_normal_form, FpMatrix, PrecisionError, TruncatedPadic, Valuation};
use crate::graph::{label_ok, min_label_valuation, PGraph};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed token `{0}`")]
    Malformed(String),
    #[error("exponent {token} has valuation below {required}")]
    Valuation { token: String, required: u32 },
    #[error("relator images are linearly dependent: relator {index} lies in the span of the earlier ones")]
    DependentRelators { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Commutator(usize, usize),
    Power(usize, TruncatedPadic),
}

/// A product of commutator and p-power tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Relator {
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Relator>,
    p: u64,
    precision: u32,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Relator>, p: u64, precision: u32) -> Self {
        let d = generators.len();
        for r in &relators {
            for t in &r.tokens {
                match t {
                    Token::Commutator(i, j) => assert!(*i < d && *j < d, "generator index out of range"),
                    Token::Power(i, _) => assert!(*i < d, "generator index out of range"),
                }
            }
        }
        Presentation {
            generators,
            relators,
            p,
            precision,
        }
    }

    /// Parse relators in the `[x1,x2] x2^-5` syntax.
    pub fn parse(
        generators: Vec<String>,
        relators: &[&str],
        p: u64,
        precision: u32,
    ) -> Result<Self, PresentationError> {
        let rs = relators
            .iter()
            .map(|r| parse_relator(r, &generators, p, precision))
            .collect::<Result<_, _>>()?;
        Ok(Presentation::new(generators, rs, p, precision))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }
    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    /// d(G)
    pub fn d(&self) -> usize {
        self.generators.len()
    }
    /// r(G)
    pub fn r(&self) -> usize {
        self.relators.len()
    }

    pub fn relator_text(&self, r: &Relator) -> String {
        let g = &self.generators;
        let parts: Vec<String> = r
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Commutator(i, j) => Some(format!("[{},{}]", g[*i], g[*j])),
                Token::Power(_, e) if e.is_exact_zero() => None,
                Token::Power(i, e) => Some(format!("{}^{}", g[*i], e)),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.relator_text(r)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

fn gen_index(name: &str, generators: &[String]) -> Result<usize, PresentationError> {
    generators
        .iter()
        .position(|g| g == name)
        .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))
}

fn parse_commutator(tok: &str, generators: &[String]) -> Result<Option<(usize, usize)>, PresentationError> {
    let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
        return Ok(None);
    };
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(PresentationError::Malformed(tok.to_string()));
    }
    Ok(Some((gen_index(parts[0], generators)?, gen_index(parts[1], generators)?)))
}

/// Split on whitespace, keeping `[a, b]` together.
fn tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parse a relator; power exponents must have valuation at least 1 (2 for p = 2).
pub fn parse_relator(
    text: &str,
    generators: &[String],
    p: u64,
    precision: u32,
) -> Result<Relator, PresentationError> {
    let mut toks = Vec::new();
    for tok in tokens(text) {
        if tok == "1" {
            continue;
        }
        if let Some((i, j)) = parse_commutator(&tok, generators)? {
            toks.push(Token::Commutator(i, j));
            continue;
        }
        let (base, exp) = tok
            .split_once('^')
            .ok_or_else(|| PresentationError::Malformed(tok.clone()))?;
        let i = gen_index(base, generators)?;
        let e = TruncatedPadic::parse_token(p, precision, exp)
            .ok_or_else(|| PresentationError::Malformed(tok.clone()))?;
        if !label_ok(&e) {
            return Err(PresentationError::Valuation {
                token: tok.clone(),
                required: min_label_valuation(p),
            });
        }
        toks.push(Token::Power(i, e));
    }
    Ok(Relator { tokens: toks })
}

/// A word for generator images: commutators and powers with any integer exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    /// (generator, exponent) pairs; commutators are recorded with exponent 0
    /// contribution and kept only for display.
    pub letters: Vec<(usize, i64)>,
    pub commutators: Vec<(usize, usize)>,
}

pub fn parse_word(text: &str, generators: &[String]) -> Result<Word, PresentationError> {
    let mut w = Word {
        letters: Vec::new(),
        commutators: Vec::new(),
    };
    for tok in tokens(text) {
        if tok == "1" {
            continue;
        }
        if let Some(c) = parse_commutator(&tok, generators)? {
            w.commutators.push(c);
            continue;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b, e.parse::<i64>().map_err(|_| PresentationError::Malformed(tok.clone()))?),
            None => (tok.as_str(), 1),
        };
        w.letters.push((gen_index(base, generators)?, exp));
    }
    Ok(w)
}

impl Word {
    /// Image in G/G_(2) = F_p^d.
    pub fn exponent_vector(&self, d: usize, p: u64) -> Vec<u64> {
        let mut v = vec![0i64; d];
        for &(i, e) in &self.letters {
            v[i] += e;
        }
        v.into_iter().map(|x| crate::arith::reduce_i64(x, p)).collect()
    }
}

/// One relator [x_i, x_j] x_i^{-f1} x_j^{-f2} per edge (x_i, x_j).
pub fn praag_presentation(g: &PGraph) -> Presentation {
    let relators = g
        .graph()
        .edges()
        .iter()
        .zip(g.labels())
        .map(|(&(i, j), (f1, f2))| Relator {
            tokens: vec![Token::Commutator(i, j), Token::Power(i, -f1), Token::Power(j, -f2)],
        })
        .collect();
    Presentation::new(g.graph().vertices().to_vec(), relators, g.p(), g.precision())
}

/// Position of the pair (i, j), i < j, in lexicographic order.
pub fn pair_index(i: usize, j: usize, d: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * d - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

/// Coefficients a_ij (i < j) of a relator modulo F_(3), over F_p.
pub fn f2f3_image(r: &Relator, d: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; d * d.saturating_sub(1) / 2];
    for t in &r.tokens {
        if let Token::Commutator(i, j) = *t {
            if i < j {
                let k = pair_index(i, j, d);
                v[k] = (v[k] + 1) % p;
            } else if j < i {
                let k = pair_index(j, i, d);
                v[k] = (v[k] + p - 1) % p;
            }
        }
    }
    v
}

fn image_matrix(pres: &Presentation) -> FpMatrix {
    let d = pres.d();
    let rows: Vec<Vec<u64>> = pres.relators.iter().map(|r| f2f3_image(r, d, pres.p)).collect();
    FpMatrix::from_residue_rows(pres.p, d * d.saturating_sub(1) / 2, &rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussReduction {
    /// Leading pairs (i_h, j_h), 0-based, strictly increasing.
    pub leading_pairs: Vec<(usize, usize)>,
    /// Reduced image rows, one per relator.
    pub reduced: FpMatrix,
}

/// Row-reduce the relator images; fails when they are linearly dependent.
pub fn gauss_reduce(pres: &Presentation) -> Result<GaussReduction, PresentationError> {
    let m = image_matrix(pres);
    for h in 0..pres.r() {
        let prefix = FpMatrix::from_residue_rows(pres.p, m.cols(), &m.row_vecs()[..=h]);
        if prefix.rank() <= h {
            return Err(PresentationError::DependentRelators { index: h });
        }
    }
    let rr = m.rref();
    let all = pairs(pres.d());
    let reduced = FpMatrix::from_residue_rows(pres.p, m.cols(), &rr.reduced.row_vecs()[..rr.rank]);
    Ok(GaussReduction {
        leading_pairs: rr.pivots.iter().map(|&c| all[c]).collect(),
        reduced,
    })
}

/// Rows = relators, columns = pairs i < j, entries -a_ij.
pub fn cup_pairing_matrix(pres: &Presentation) -> FpMatrix {
    let m = image_matrix(pres);
    let p = pres.p;
    let rows: Vec<Vec<u64>> = m
        .row_vecs()
        .into_iter()
        .map(|r| r.into_iter().map(|x| (p - x) % p).collect())
        .collect();
    FpMatrix::from_residue_rows(p, m.cols(), &rows)
}

/// Abelianization over Z_p: free rank plus cyclic p-power torsion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub p: u64,
    pub free_rank: usize,
    /// Exponents e of the torsion summands Z/p^e, ascending.
    pub torsion: Vec<u32>,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z_p".to_string()),
            r => parts.push(format!("Z_p^{r}")),
        }
        for &e in &self.torsion {
            parts.push(format!("Z/{}", BigInt::from(self.p).pow(e)));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Smith normal form of the d x r exponent-sum matrix, read p-locally.
pub fn abelianization(pres: &Presentation) -> Result<Abelianization, PrecisionError> {
    let (d, r, p, k) = (pres.d(), pres.r(), pres.p, pres.precision);
    let mut m = vec![vec![BigInt::zero(); r]; d];
    let mut all_exact = true;
    for (h, rel) in pres.relators.iter().enumerate() {
        for t in &rel.tokens {
            if let Token::Power(i, e) = t {
                if let Valuation::AtLeast(_) = e.valuation() {
                    return Err(PrecisionError(format!(
                        "exponent of {} in relator {} has unknown valuation",
                        pres.generators[*i],
                        h + 1
                    )));
                }
                all_exact &= e.is_exact();
                m[*i][h] += e.representative();
            }
        }
    }
    let factors = smith_normal_form(&m);
    let mut free_rank = d - factors.len();
    let mut torsion = Vec::new();
    let pk = BigInt::from(p).pow(k);
    for f in factors {
        if f.is_zero() {
            if !all_exact {
                return Err(PrecisionError("invariant factor vanishes at finite precision".into()));
            }
            free_rank += 1;
            continue;
        }
        let e = crate::arith::padic::vp_int(&f, p);
        if !all_exact && (f.abs() % &pk).is_zero() {
            return Err(PrecisionError(format!("invariant factor {f} is not determined mod {p}^{k}")));
        }
        if e > 0 {
            torsion.push(e);
        }
    }
    torsion.sort_unstable();
    Ok(Abelianization { p, free_rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_pgraph, Graph};

    fn names(n: usize) -> Vec<String> {
        Graph::standard_names(n)
    }

    pub(crate) fn mennicke() -> PGraph {
        parse_pgraph("pgraph v1\np 5\nprecision 4\nvertices x1 x2 x3\nedge x1 x2 0 -5\nedge x2 x3 0 -5\nedge x3 x1 0 -5\n")
            .unwrap()
    }

    #[test]
    fn single_edge_presentation() {
        let g = PGraph::with_int_labels(Graph::path(2), 5, 4, &[(5, 25)]).unwrap();
        let p = praag_presentation(&g);
        assert_eq!(p.to_string(), "<x1, x2 | [x1,x2] x1^-5 x2^-25>");
        let m = praag_presentation(&mennicke());
        assert_eq!(m.relator_text(&m.relators()[0]), "[x1,x2] x2^5");
        assert_eq!(praag_presentation(&PGraph::zero_labelled(Graph::edgeless(3), 5, 4)).r(), 0);
    }

    #[test]
    fn images() {
        let g = names(4);
        let r = parse_relator("[x1,x2] x2^5", &g, 5, 4).unwrap();
        assert_eq!(f2f3_image(&r, 4, 5), vec![1, 0, 0, 0, 0, 0]);
        let r = parse_relator("[x1,x2] [x3,x4]", &g, 5, 4).unwrap();
        assert_eq!(f2f3_image(&r, 4, 5), vec![1, 0, 0, 0, 0, 1]);
        let r = parse_relator("[x2,x1]", &g, 5, 4).unwrap();
        assert_eq!(f2f3_image(&r, 4, 5), vec![4, 0, 0, 0, 0, 0]);
        assert_eq!(f2f3_image(&Relator::default(), 4, 5), vec![0; 6]);
    }

    #[test]
    fn relator_grammar() {
        let g = names(3);
        assert!(parse_relator("x1^5 [x2,x3]", &g, 5, 4).is_ok());
        assert!(matches!(parse_relator("x1^3", &g, 5, 4), Err(PresentationError::Valuation { .. })));
        assert!(matches!(parse_relator("x4^5", &g, 5, 4), Err(PresentationError::UnknownGenerator(_))));
        assert!(matches!(parse_relator("x1", &g, 5, 4), Err(PresentationError::Malformed(_))));
        assert!(parse_relator("[x1, x2] x2^-5", &g, 5, 4).is_ok());
        let w = parse_word("x1 x2^5 [x1,x3]", &g).unwrap();
        assert_eq!(w.exponent_vector(3, 5), vec![1, 0, 0]);
    }

    #[test]
    fn gauss_examples() {
        let c4 = PGraph::zero_labelled(Graph::cycle(4), 5, 4);
        let gr = gauss_reduce(&praag_presentation(&c4)).unwrap();
        assert_eq!(gr.leading_pairs, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        let one = PGraph::zero_labelled(Graph::path(2), 5, 4);
        assert_eq!(gauss_reduce(&praag_presentation(&one)).unwrap().leading_pairs, vec![(0, 1)]);
        let dup = Presentation::parse(names(2), &["[x1,x2]", "[x1,x2] x1^5"], 5, 4).unwrap();
        assert_eq!(gauss_reduce(&dup), Err(PresentationError::DependentRelators { index: 1 }));
    }

    #[test]
    fn cup_pairing_examples() {
        let c4 = PGraph::zero_labelled(Graph::cycle(4), 5, 4);
        let m = cup_pairing_matrix(&praag_presentation(&c4));
        assert_eq!(m.rank(), 4);
        let nonzero: Vec<usize> = (0..6).filter(|&c| !m.column_is_zero(c)).collect();
        // pairs: 12 13 14 23 24 34 ; edges 12 23 34 41
        assert_eq!(nonzero, vec![0, 2, 3, 5]);
        assert_eq!(m.get(0, 0), 4);
        let free = PGraph::zero_labelled(Graph::edgeless(3), 5, 4);
        assert_eq!(cup_pairing_matrix(&praag_presentation(&free)).rank(), 0);
        let one = PGraph::zero_labelled(Graph::path(2), 5, 4);
        assert_eq!(cup_pairing_matrix(&praag_presentation(&one)).rank(), 1);
    }

    #[test]
    fn cup_rank_counts_edges() {
        for n in 1..=5 {
            for g in Graph::all_on(n) {
                let e = g.edges().len();
                let pres = praag_presentation(&PGraph::zero_labelled(g.clone(), 5, 4));
                assert_eq!(cup_pairing_matrix(&pres).rank(), e);
                assert_eq!(pres.d(), n);
                assert_eq!(predicted_cohomology(&PGraph::zero_labelled(g, 5, 4)).betti.get(2).copied().unwrap_or(0), e as u64);
            }
        }
    }

    #[test]
    fn gauss_preserves_row_span() {
        for g in Graph::all_on(4) {
            let pres = praag_presentation(&PGraph::zero_labelled(g, 5, 4));
            let gr = gauss_reduce(&pres).unwrap();
            let orig = cup_pairing_matrix(&pres);
            assert_eq!(gr.reduced.rank(), orig.rank());
            assert_eq!(gr.reduced.vstack(&orig).rank(), orig.rank());
            for (h, &(i, j)) in gr.leading_pairs.iter().enumerate() {
                let lead = pair_index(i, j, 4);
                assert_eq!(gr.reduced.get(h, lead), 1);
                assert!((0..lead).all(|c| gr.reduced.get(h, c) == 0));
            }
        }
    }

    #[test]
    fn abelianization_examples() {
        let e = PGraph::with_int_labels(Graph::path(2), 5, 4, &[(5, 25)]).unwrap();
        assert_eq!(abelianization(&praag_presentation(&e)).unwrap().to_string(), "Z_p + Z/5");
        let e = PGraph::with_int_labels(Graph::path(2), 5, 4, &[(0, 25)]).unwrap();
        assert_eq!(abelianization(&praag_presentation(&e)).unwrap().to_string(), "Z_p + Z/25");
        let z = PGraph::zero_labelled(Graph::complete(3), 5, 4);
        let a = abelianization(&praag_presentation(&z)).unwrap();
        assert_eq!((a.free_rank, a.torsion.len()), (3, 0));
        let a = abelianization(&praag_presentation(&mennicke())).unwrap();
        assert_eq!(a.to_string(), "Z/5 + Z/5 + Z/5");
        let unknown = parse_pgraph("pgraph v1\nvertices a b\nedge a b 0~ 5\n").unwrap();
        assert!(abelianization(&praag_presentation(&unknown)).is_err());
    }
}
