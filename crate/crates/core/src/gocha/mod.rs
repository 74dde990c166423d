//! Generalized Golod-Shafarevich certificates: generator weights, relator
//! valuations and exact evaluation of 1 - H_X(T) + H_R(T).

use crate::arith::PrecisionError;
use crate::presentation::{Presentation, Relator, Token};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GgsError {
    #[error("exponent {0} is not an integer")]
    NonIntegerExponent(BigRational),
    #[error("T = {0} is outside (0, 1)")]
    OutOfRange(BigRational),
    #[error("weight assignment needs one finite positive weight per generator set")]
    BadWeights,
    #[error(transparent)]
    Precision(#[from] PrecisionError),
}

/// A weight or valuation: positive rational, or infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    Finite(BigRational),
    Infinite,
}

impl Weight {
    pub fn int(n: u64) -> Self {
        Weight::Finite(BigRational::from_integer(n.into()))
    }

    fn min(self, other: Weight) -> Weight {
        match (self, other) {
            (Weight::Infinite, w) | (w, Weight::Infinite) => w,
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a.min(b)),
        }
    }

    fn add(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a + b),
            _ => Weight::Infinite,
        }
    }

    fn scale(&self, k: &BigInt) -> Weight {
        match self {
            Weight::Finite(a) => Weight::Finite(a * BigRational::from_integer(k.clone())),
            Weight::Infinite => Weight::Infinite,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(r) => write!(f, "{r}"),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightAssignment(Vec<Weight>);

impl WeightAssignment {
    pub fn new(weights: Vec<Weight>) -> Result<Self, GgsError> {
        let positive = weights.iter().all(|w| match w {
            Weight::Finite(r) => r.is_positive(),
            Weight::Infinite => true,
        });
        if !positive || !weights.iter().any(|w| matches!(w, Weight::Finite(_))) {
            return Err(GgsError::BadWeights);
        }
        Ok(WeightAssignment(weights))
    }

    pub fn integers(ws: &[u64]) -> Result<Self, GgsError> {
        Self::new(ws.iter().map(|&w| Weight::int(w)).collect())
    }

    pub fn weights(&self) -> &[Weight] {
        &self.0
    }
}

/// D of a relator: minimum over its tokens, with D([x_i, x_j]) = w_i + w_j
/// and D(x_i^e) = p^{v_p(e)} w_i. An exponent that is exactly 0 is the
/// trivial factor.
pub fn relator_valuation(r: &Relator, w: &WeightAssignment, p: u64) -> Result<Weight, GgsError> {
    let ws = w.weights();
    let mut d = Weight::Infinite;
    for t in &r.tokens {
        let term = match t {
            Token::Commutator(i, j) => ws[*i].add(&ws[*j]),
            Token::Power(i, e) => match e.known_valuation()? {
                None => Weight::Infinite,
                Some(v) => ws[*i].scale(&BigInt::from(p).pow(v)),
            },
        };
        d = d.min(term);
    }
    Ok(d)
}

fn pow_term(t: &BigRational, w: &Weight) -> Result<BigRational, GgsError> {
    match w {
        Weight::Infinite => Ok(BigRational::zero()),
        Weight::Finite(e) => {
            if !e.is_integer() {
                return Err(GgsError::NonIntegerExponent(e.clone()));
            }
            let n = e.to_integer().to_i32().ok_or_else(|| GgsError::NonIntegerExponent(e.clone()))?;
            Ok(num_traits::pow::Pow::pow(t, n))
        }
    }
}

/// 1 - sum_x T^{w(x)} + sum_r T^{D(r)}, exactly.
pub fn ggs_value(x: &WeightAssignment, relators: &[Weight], t: &BigRational) -> Result<BigRational, GgsError> {
    if !t.is_positive() || t >= &BigRational::one() {
        return Err(GgsError::OutOfRange(t.clone()));
    }
    let mut v = BigRational::one();
    for w in x.weights() {
        v -= pow_term(t, w)?;
    }
    for d in relators {
        v += pow_term(t, d)?;
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GgsBounds {
    pub max_weight: u64,
    pub grid: u64,
    /// Weight vectors visited by the exhaustive sweep; its per-generator cap
    /// drops below `max_weight` when `max_weight^d` would exceed this.
    pub max_sweep: u64,
}

impl Default for GgsBounds {
    fn default() -> Self {
        GgsBounds {
            max_weight: 12,
            grid: 1000,
            max_sweep: 250_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// All weights 1: the classic inequality.
    Uniform,
    /// Weight 1 on one colour class of the commutator graph, 2 on the other.
    Bipartite,
    /// Weight 1 on two generators and `n` on the rest.
    TwoLight { light: [String; 2], n: u64 },
    Sweep,
}

fn rat_str<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GgsCertificate {
    pub weights: WeightAssignment,
    #[serde(serialize_with = "rat_str")]
    pub t0: BigRational,
    #[serde(serialize_with = "rat_str")]
    pub value: BigRational,
    pub valuations: Vec<Weight>,
    pub strategy: Strategy,
}

impl GgsCertificate {
    /// Recompute valuations and value from the presentation.
    pub fn validate(&self, pres: &Presentation) -> Result<bool, GgsError> {
        if self.weights.weights().len() != pres.d() {
            return Ok(false);
        }
        let vals = pres
            .relators()
            .iter()
            .map(|r| relator_valuation(r, &self.weights, pres.p()))
            .collect::<Result<Vec<_>, _>>()?;
        if vals != self.valuations {
            return Ok(false);
        }
        let v = ggs_value(&self.weights, &vals, &self.t0)?;
        Ok(v == self.value && v.is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum GgsOutcome {
    Certificate(GgsCertificate),
    NoneFound,
}

impl GgsOutcome {
    pub fn certificate(&self) -> Option<&GgsCertificate> {
        match self {
            GgsOutcome::Certificate(c) => Some(c),
            GgsOutcome::NoneFound => None,
        }
    }
}

/// Integer form of a relator valuation: `None` is infinite.
fn int_valuation(r: &Relator, w: &[u64], p: u64) -> Result<Option<u64>, GgsError> {
    let mut d: Option<u64> = None;
    for t in &r.tokens {
        let term = match t {
            Token::Commutator(i, j) => Some(w[*i] + w[*j]),
            Token::Power(i, e) => match e.known_valuation()? {
                None => None,
                Some(v) => p.checked_pow(v).and_then(|q| q.checked_mul(w[*i])),
            },
        };
        d = match (d, term) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
    Ok(d)
}

struct Evaluator {
    grid: u64,
    /// powers[g][k] = (g / grid)^k, as floats, for screening.
    powers: Vec<Vec<f64>>,
    relators: Vec<Relator>,
    p: u64,
}

impl Evaluator {
    fn new(pres: &Presentation, grid: u64, max_exp: usize) -> Self {
        let powers = (1..grid)
            .map(|g| {
                let t = g as f64 / grid as f64;
                let mut row = Vec::with_capacity(max_exp + 1);
                let mut x = 1.0;
                for _ in 0..=max_exp {
                    row.push(x);
                    x *= t;
                }
                row
            })
            .collect();
        Evaluator {
            grid,
            powers,
            relators: pres.relators().to_vec(),
            p: pres.p(),
        }
    }

    /// Best grid point for integer weights, verified exactly.
    fn try_weights(&self, w: &[u64], strategy: &Strategy) -> Result<Option<GgsCertificate>, GgsError> {
        let vals = self
            .relators
            .iter()
            .map(|r| int_valuation(r, w, self.p))
            .collect::<Result<Vec<_>, _>>()?;
        let max_exp = self.powers[0].len() - 1;
        let mut neg: Vec<u64> = w.to_vec();
        neg.retain(|&e| (e as usize) <= max_exp);
        let pos: Vec<u64> = vals.iter().flatten().copied().filter(|&e| e as usize <= max_exp).collect();
        let mut scored: Vec<(f64, usize)> = Vec::new();
        for (g, row) in self.powers.iter().enumerate() {
            let mut v = 1.0;
            for &e in &neg {
                v -= row[e as usize];
            }
            for &e in &pos {
                v += row[e as usize];
            }
            if v < 1e-9 {
                scored.push((v, g));
            }
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let weights = WeightAssignment::integers(w)?;
        let valuations: Vec<Weight> = vals.iter().map(|v| v.map_or(Weight::Infinite, Weight::int)).collect();
        for (_, g) in scored {
            let t0 = BigRational::new(BigInt::from(g as u64 + 1), BigInt::from(self.grid));
            let value = ggs_value(&weights, &valuations, &t0)?;
            if value.is_negative() {
                return Ok(Some(GgsCertificate {
                    weights,
                    t0,
                    value,
                    valuations,
                    strategy: strategy.clone(),
                }));
            }
        }
        Ok(None)
    }
}

/// Proper 2-colouring of the commutator graph, colour of vertex 0 first.
fn bipartition(d: usize, edges: &[(usize, usize)]) -> Option<Vec<u8>> {
    let mut colour = vec![u8::MAX; d];
    for s in 0..d {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(a, b) in edges {
                let u = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if colour[u] == u8::MAX {
                    colour[u] = 1 - colour[v];
                    stack.push(u);
                } else if colour[u] == colour[v] {
                    return None;
                }
            }
        }
    }
    Some(colour)
}

/// Pairs {i, j} occurring as a commutator token in some relator.
pub fn commutator_graph(pres: &Presentation) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = pres
        .relators()
        .iter()
        .flat_map(|r| r.tokens.iter())
        .filter_map(|t| match t {
            Token::Commutator(i, j) if i != j => Some(((*i).min(*j), (*i).max(*j))),
            _ => None,
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Search uniform, bipartite, two-light and exhaustive integer weightings in
/// that order; T runs over {1/Q, ..., (Q-1)/Q}.
pub fn ggs_search(pres: &Presentation, bounds: GgsBounds) -> Result<GgsOutcome, GgsError> {
    let d = pres.d();
    if d == 0 || bounds.grid < 2 || bounds.max_weight == 0 {
        return Ok(GgsOutcome::NoneFound);
    }
    let w_max = bounds.max_weight;
    let max_exp = (2 * w_max).max(2) as usize;
    let ev = Evaluator::new(pres, bounds.grid, max_exp);
    let found = |c: Option<GgsCertificate>| c.map(GgsOutcome::Certificate);

    if let Some(o) = found(ev.try_weights(&vec![1; d], &Strategy::Uniform)?) {
        return Ok(o);
    }
    if let Some(col) = bipartition(d, &commutator_graph(pres)) {
        let w: Vec<u64> = col.iter().map(|&c| c as u64 + 1).collect();
        if let Some(o) = found(ev.try_weights(&w, &Strategy::Bipartite)?) {
            return Ok(o);
        }
    }
    if d > 2 {
        for n in 2..=w_max {
            for i in 0..d {
                for j in i + 1..d {
                    let mut w = vec![n; d];
                    w[i] = 1;
                    w[j] = 1;
                    let s = Strategy::TwoLight {
                        light: [pres.generators()[i].clone(), pres.generators()[j].clone()],
                        n,
                    };
                    if let Some(o) = found(ev.try_weights(&w, &s)?) {
                        return Ok(o);
                    }
                }
            }
        }
    }
    let mut sweep_max = w_max;
    while sweep_max > 1 && sweep_max.checked_pow(d as u32).map_or(true, |n| n > bounds.max_sweep) {
        sweep_max -= 1;
    }
    let mut w = vec![1u64; d];
    loop {
        if let Some(o) = found(ev.try_weights(&w, &Strategy::Sweep)?) {
            return Ok(o);
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(GgsOutcome::NoneFound);
            }
            k -= 1;
            if w[k] < sweep_max {
                w[k] += 1;
                break;
            }
            w[k] = 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FreeSubgroupVerdict {
    /// Every pair of generators is related by a commutator relator.
    PowerfulByCompleteness { justification: String },
    /// Two generators with no commutator relation between them.
    FreeSubgroupByMissingEdge { pair: [String; 2], justification: String },
    FreeSubgroupByGgs { certificate: GgsCertificate, justification: String },
}

pub fn free_subgroup_verdict(pres: &Presentation) -> Result<Vec<FreeSubgroupVerdict>, GgsError> {
    free_subgroup_verdict_with(pres, GgsBounds::default())
}

pub fn free_subgroup_verdict_with(pres: &Presentation, bounds: GgsBounds) -> Result<Vec<FreeSubgroupVerdict>, GgsError> {
    let d = pres.d();
    let edges = commutator_graph(pres);
    let names = pres.generators();
    let mut out = Vec::new();
    let missing = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).find(|e| !edges.contains(e));
    match missing {
        None => out.push(FreeSubgroupVerdict::PowerfulByCompleteness {
            justification: format!("complete graph on {d} vertices: every commutator is a p-th power"),
        }),
        Some((i, j)) => out.push(FreeSubgroupVerdict::FreeSubgroupByMissingEdge {
            pair: [names[i].clone(), names[j].clone()],
            justification: format!("no edge {} - {}: the two generators span a free subgroup", names[i], names[j]),
        }),
    }
    if let GgsOutcome::Certificate(c) = ggs_search(pres, bounds)? {
        let justification = format!("1 - H_X(T) + H_R(T) = {} < 0 at T = {}", c.value, c.t0);
        out.push(FreeSubgroupVerdict::FreeSubgroupByGgs {
            certificate: c,
            justification,
        });
    }
    Ok(out)
}
