//! Search for a complete p-graph extending a given one whose every vertex
//! triple satisfies the Jacobi system.

use crate::arith::TruncatedPadic;
use crate::graph::PGraph;
use crate::lie::complete_graph_lattice;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionConfig {
    /// Units u for candidate labels u * p^j.
    pub units: Vec<i64>,
    pub max_exponent: u32,
    /// Precision of the exhaustive residue sweep (raised to 3, or 5 for p = 2).
    pub refutation_precision: u32,
    /// Maximum number of partial assignments visited per phase.
    pub node_budget: u64,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            units: vec![1, -1, 2, -2],
            max_exponent: 2,
            refutation_precision: 3,
            node_budget: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionOutcome {
    Completed(PGraph),
    RefutedModPk(u32),
    Inconclusive(String),
}

type Label = (i128, i128);

struct Problem {
    /// Known labels oriented low -> high; None for missing pairs.
    known: Vec<Vec<Option<Label>>>,
    missing: Vec<(usize, usize)>,
    /// Triples to check once missing edge t is assigned (t = index of the
    /// last missing edge the triple uses).
    buckets: Vec<Vec<(usize, usize, usize)>>,
    /// Triples made only of known edges.
    closed: Vec<(usize, usize, usize)>,
}

enum Search {
    Found(Vec<Label>),
    Exhausted,
    Budget,
}

impl Problem {
    fn new(n: usize, known: Vec<Vec<Option<Label>>>) -> Self {
        let mut missing = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if known[i][j].is_none() {
                    missing.push((i, j));
                }
            }
        }
        let idx = |a: usize, b: usize| missing.iter().position(|&e| e == (a, b));
        let mut buckets = vec![Vec::new(); missing.len()];
        let mut closed = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let last = [idx(a, b), idx(b, c), idx(a, c)].into_iter().flatten().max();
                    match last {
                        Some(t) => buckets[t].push((a, b, c)),
                        None => closed.push((a, b, c)),
                    }
                }
            }
        }
        Problem {
            known,
            missing,
            buckets,
            closed,
        }
    }

    fn label(&self, assigned: &[Label], u: usize, v: usize) -> Label {
        let (lo, hi) = (u.min(v), u.max(v));
        let l = self.known[lo][hi].unwrap_or_else(|| {
            let t = self.missing.iter().position(|&e| e == (lo, hi)).unwrap();
            assigned[t]
        });
        if u < v {
            l
        } else {
            (-l.1, -l.0)
        }
    }

    fn triple_ok(&self, assigned: &[Label], (a, b, c): (usize, usize, usize), modulus: Option<i128>) -> bool {
        let (a1, a2) = self.label(assigned, a, b);
        let (b2, b3) = self.label(assigned, b, c);
        let (g3, g1) = self.label(assigned, c, a);
        let res = [a1 * b2 - g1 * b3, g1 * a2 - b2 * g3, a1 * g3 - a2 * b3];
        res.iter().all(|&r| match modulus {
            Some(m) => r.rem_euclid(m) == 0,
            None => r == 0,
        })
    }

    fn search(&self, candidates: &[Label], modulus: Option<i128>, budget: u64) -> Search {
        if !self.closed.iter().all(|&t| self.triple_ok(&[], t, modulus)) {
            return Search::Exhausted;
        }
        let m = self.missing.len();
        if m == 0 {
            return Search::Found(Vec::new());
        }
        let mut assigned: Vec<Label> = Vec::with_capacity(m);
        let mut choice = vec![0usize; m];
        let mut nodes = 0u64;
        let mut depth = 0;
        loop {
            if choice[depth] == candidates.len() {
                if depth == 0 {
                    return Search::Exhausted;
                }
                choice[depth] = 0;
                depth -= 1;
                assigned.pop();
                choice[depth] += 1;
                continue;
            }
            nodes += 1;
            if nodes > budget {
                return Search::Budget;
            }
            assigned.truncate(depth);
            assigned.push(candidates[choice[depth]]);
            if self.buckets[depth].iter().all(|&t| self.triple_ok(&assigned, t, modulus)) {
                if depth + 1 == m {
                    return Search::Found(assigned);
                }
                depth += 1;
            } else {
                assigned.pop();
                choice[depth] += 1;
            }
        }
    }
}

fn exact_i128(x: &TruncatedPadic) -> Option<i128> {
    x.exact_value().and_then(|v| v.to_i128())
}

fn known_labels(g: &PGraph, f: impl Fn(&TruncatedPadic) -> Option<i128>) -> Option<Vec<Vec<Option<Label>>>> {
    let n = g.graph().n();
    let mut known = vec![vec![None; n]; n];
    for (&(u, v), (f1, f2)) in g.graph().edges().iter().zip(g.labels()) {
        let (a, b) = (f(f1)?, f(f2)?);
        if u < v {
            known[u][v] = Some((a, b));
        } else {
            known[v][u] = Some((-b, -a));
        }
    }
    Some(known)
}

/// Smallest precision at which the Jacobi equations are not vacuous.
pub(crate) fn min_refutation_precision(p: u64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}

/// Exact search among labels u * p^j, then an exhaustive residue sweep.
pub fn completion_search(g: &PGraph, cfg: &CompletionConfig) -> CompletionOutcome {
    let p = g.p();
    let n = g.graph().n();
    let jmin = crate::graph::min_label_valuation(p);

    let mut notes = Vec::new();
    match known_labels(g, exact_i128) {
        Some(known) => {
            let prob = Problem::new(n, known);
            let mut values = vec![0i128];
            for j in jmin..=cfg.max_exponent.max(jmin) {
                for &u in &cfg.units {
                    if u != 0 {
                        values.push(u as i128 * (p as i128).pow(j));
                    }
                }
            }
            let cands: Vec<Label> = values
                .iter()
                .flat_map(|&a| values.iter().map(move |&b| (a, b)))
                .collect();
            match prob.search(&cands, None, cfg.node_budget) {
                Search::Found(labels) => {
                    let mut out = g.clone();
                    for (&(i, j), &(a, b)) in prob.missing.iter().zip(&labels) {
                        let l = (
                            TruncatedPadic::from_int(p, g.precision(), BigInt::from(a)),
                            TruncatedPadic::from_int(p, g.precision(), BigInt::from(b)),
                        );
                        out = out.with_edge(i, j, l).expect("candidate labels are valid");
                    }
                    if complete_graph_lattice(&out).is_ok() {
                        return CompletionOutcome::Completed(out);
                    }
                    notes.push("exact candidate failed re-validation".to_string());
                }
                Search::Exhausted => {}
                Search::Budget => notes.push(format!("exact search exceeded {} nodes", cfg.node_budget)),
            }
        }
        None => notes.push("labels are not exact integers".into()),
    }

    let k = cfg.refutation_precision.max(min_refutation_precision(p));
    match refute(g, k, cfg.node_budget) {
        Ok(true) => CompletionOutcome::RefutedModPk(k),
        Ok(false) => {
            notes.push(format!("solutions exist mod {p}^{k}"));
            CompletionOutcome::Inconclusive(notes.join("; "))
        }
        Err(why) => {
            notes.push(why);
            CompletionOutcome::Inconclusive(notes.join("; "))
        }
    }
}

/// Ok(true) when no assignment of the missing labels mod p^k solves every
/// triple system. Each equation is a product of two labels of valuation at
/// least 1 (2 for p = 2), so only the unknown label's quotient by p (by 4)
/// modulo p^(k-2) (2^(k-4)) matters.
fn refute(g: &PGraph, k: u32, budget: u64) -> Result<bool, String> {
    let p = g.p();
    let pk = (p as i128)
        .checked_pow(k)
        .filter(|&m| m < 1 << 40)
        .ok_or_else(|| format!("modulus {p}^{k} too large"))?;
    let fixed = |x: &TruncatedPadic| -> Option<i128> {
        if x.is_exact() || x.precision() >= k {
            let r = x.representative() % BigInt::from(pk);
            r.to_i128()
        } else {
            None
        }
    };
    let known = known_labels(g, fixed).ok_or_else(|| format!("labels are known only mod {p}^{}", g.precision()))?;
    let prob = Problem::new(g.graph().n(), known);
    let (step, count) = if p == 2 {
        (4i128, 1i128 << (k - 4))
    } else {
        (p as i128, (p as i128).pow(k - 2))
    };
    let space = (count * count).checked_pow(prob.missing.len() as u32);
    if space.map_or(true, |s| s > budget as i128 * 4) {
        return Err(format!("residue sweep exceeds budget of {budget} nodes"));
    }
    let values: Vec<i128> = (0..count).map(|t| t * step).collect();
    let cands: Vec<Label> = values
        .iter()
        .flat_map(|&a| values.iter().map(move |&b| (a, b)))
        .collect();
    match prob.search(&cands, Some(pk), budget) {
        Search::Found(_) => Ok(false),
        Search::Exhausted => Ok(true),
        Search::Budget => Err(format!("residue sweep exceeded {budget} nodes")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_pgraph, Graph};
    use crate::lie::{triangle_jacobi, triangle_labels};

    pub(crate) fn gamma2() -> PGraph {
        parse_pgraph("pgraph v1\np 5\nprecision 4\nvertices x1 x2 x3\nedge x1 x2 5 25\nedge x3 x1 0 0\n").unwrap()
    }

    pub(crate) fn gamma3() -> PGraph {
        parse_pgraph(
            "pgraph v1\np 5\nprecision 4\nvertices x1 x2 x3 x4\nedge x1 x2 5 5\nedge x2 x3 5 5\nedge x3 x4 5 5\nedge x4 x1 5 0\n",
        )
        .unwrap()
    }

    #[test]
    fn gamma2_completes_with_zero_label() {
        let CompletionOutcome::Completed(c) = completion_search(&gamma2(), &CompletionConfig::default()) else {
            panic!("expected completion");
        };
        assert!(c.graph().is_complete());
        let e = c.graph().edge_between(1, 2).unwrap().0;
        assert!(c.labels()[e].0.is_exact_zero() && c.labels()[e].1.is_exact_zero());
        assert!(triangle_jacobi(&triangle_labels(&c, 0, 1, 2)).unwrap());
    }

    #[test]
    fn gamma3_refuted() {
        assert_eq!(
            completion_search(&gamma3(), &CompletionConfig::default()),
            CompletionOutcome::RefutedModPk(3)
        );
        let cfg = CompletionConfig {
            refutation_precision: 4,
            ..Default::default()
        };
        assert_eq!(completion_search(&gamma3(), &cfg), CompletionOutcome::RefutedModPk(4));
    }

    /// Plain enumeration of all labels p*t, t mod p^(k-1), for the two
    /// missing edges of the 4-cycle.
    #[test]
    fn gamma3_brute_force_agrees() {
        let g = gamma3();
        let m: i64 = 125;
        let vals: Vec<i64> = (0..25).map(|t| 5 * t).collect();
        let mut solutions = 0;
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    for &d in &vals {
                        let full = g
                            .with_edge(0, 2, (TruncatedPadic::from_int(5, 4, a), TruncatedPadic::from_int(5, 4, b)))
                            .unwrap()
                            .with_edge(1, 3, (TruncatedPadic::from_int(5, 4, c), TruncatedPadic::from_int(5, 4, d)))
                            .unwrap();
                        let ok = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)].iter().all(|&(x, y, z)| {
                            let t = triangle_labels(&full, x, y, z);
                            let v: Vec<i64> = t.as_array().iter().map(|l| l.to_i64().unwrap()).collect();
                            let (a1, a2, b2, b3, g1, g3) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                            [a1 * b2 - g1 * b3, g1 * a2 - b2 * g3, a1 * g3 - a2 * b3]
                                .iter()
                                .all(|r| r.rem_euclid(m) == 0)
                        });
                        solutions += ok as u32;
                    }
                }
            }
        }
        assert_eq!(solutions, 0);
    }

    #[test]
    fn complete_valid_graph_is_its_own_completion() {
        let g = PGraph::with_int_labels(Graph::complete(3), 5, 4, &[(5, 25), (0, 0), (0, 0)]).unwrap();
        assert_eq!(completion_search(&g, &CompletionConfig::default()), CompletionOutcome::Completed(g));
    }

    #[test]
    fn jacobi_failure_on_fixed_triangle_refutes() {
        let m = parse_pgraph("pgraph v1\nvertices x1 x2 x3\nedge x1 x2 0 -5\nedge x2 x3 0 -5\nedge x3 x1 0 -5\n")
            .unwrap();
        assert_eq!(completion_search(&m, &CompletionConfig::default()), CompletionOutcome::RefutedModPk(3));
    }

    #[test]
    fn budget_is_reported() {
        let g = PGraph::zero_labelled(Graph::edgeless(6), 5, 4);
        let cfg = CompletionConfig {
            node_budget: 100,
            ..Default::default()
        };
        // zero labels complete immediately, well within budget
        assert!(matches!(completion_search(&g, &cfg), CompletionOutcome::Completed(_)));
        let cfg = CompletionConfig {
            node_budget: 0,
            ..Default::default()
        };
        match completion_search(&gamma3(), &cfg) {
            CompletionOutcome::Inconclusive(why) => assert!(why.contains("0 nodes")),
            other => panic!("{other:?}"),
        }
    }
}
