use super::lattice::PowerfulLieLattice;
use super::LieError;
use crate::arith::padic::vp_int;
use crate::arith::{PrecisionError, TruncatedPadic};
use crate::graph::PGraph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Precision and bracket-degree cap for truncated Campbell-Hausdorff products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BchConfig {
    pub precision: u32,
    /// None selects k + 3 (2k + 3 when p = 3).
    pub degree_cap: Option<usize>,
}

impl BchConfig {
    pub fn new(precision: u32) -> Self {
        BchConfig {
            precision,
            degree_cap: None,
        }
    }

    pub fn cap_for(&self, p: u64) -> usize {
        let k = self.precision as usize;
        self.degree_cap
            .unwrap_or(if p == 3 { 2 * k + 3 } else { k + 3 })
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Dynkin coefficient of every word of length m (bit i set = letter i is Y),
/// for the right-nested bracket of that word.
fn dynkin_coefficients(m: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<BigRational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    let facts: Vec<BigInt> = (0..=m).map(factorial).collect();
    let coeffs: Vec<BigRational> = (0u64..1 << m)
        .map(|w| {
            let letter = |i: usize| w >> i & 1 == 1;
            // g[pos][n]: splits of w[..pos] into n blocks X^r Y^s, weighted 1/(r! s!)
            let mut g = vec![vec![BigRational::zero(); m + 1]; m + 1];
            g[0][0] = BigRational::one();
            for pos in 0..m {
                for end in pos + 1..=m {
                    let seg: Vec<bool> = (pos..end).map(letter).collect();
                    if seg.windows(2).any(|p| p[0] && !p[1]) {
                        break; // Y followed by X; longer segments fail too
                    }
                    let s = seg.iter().filter(|&&y| y).count();
                    let r = seg.len() - s;
                    let wgt = BigRational::new(BigInt::one(), &facts[r] * &facts[s]);
                    for n in 0..m {
                        if g[pos][n].is_zero() {
                            continue;
                        }
                        let add = &g[pos][n] * &wgt;
                        g[end][n + 1] += add;
                    }
                }
            }
            let mut total = BigRational::zero();
            for n in 1..=m {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                total += &g[m][n] * BigRational::new(BigInt::from(sign), BigInt::from(n));
            }
            total / BigRational::from_integer(BigInt::from(m))
        })
        .collect();
    cache.lock().unwrap().insert(m, coeffs.clone());
    coeffs
}

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// Reduce a p-integral rational modulo p^k.
fn rational_mod(q: &BigRational, p: u64, k: u32) -> Result<BigInt, LieError> {
    let m = modulus(p, k);
    let den = q.denom().mod_floor(&m);
    let e = den.extended_gcd(&m);
    if !e.gcd.is_one() {
        return Err(LieError::Internal(format!("{q} is not p-integral")));
    }
    Ok((q.numer() * e.x).mod_floor(&m))
}

fn vp_rational(q: &BigRational, p: u64) -> i64 {
    vp_int(q.numer(), p) as i64 - vp_int(q.denom(), p) as i64
}

/// Degree-by-degree Campbell-Hausdorff sums for bracket degrees 1..=max_deg.
fn bch_by_degree(
    l: &PowerfulLieLattice,
    x: &[BigInt],
    y: &[BigInt],
    max_deg: usize,
) -> Result<Vec<Vec<BigRational>>, LieError> {
    let p = l.p();
    let n = l.rank();
    let mut out = Vec::with_capacity(max_deg);
    // brackets[w] for words of the current length
    let mut brackets: Vec<Vec<BigInt>> = vec![x.to_vec(), y.to_vec()];
    for m in 1..=max_deg {
        if m > 1 {
            let prev = brackets;
            brackets = Vec::with_capacity(prev.len() * 2);
            for w in 0..(1usize << m) {
                let first = if w & 1 == 1 { y } else { x };
                brackets.push(l.bracket(first, &prev[w >> 1]));
            }
        }
        let coeffs = dynkin_coefficients(m);
        let mut sum = vec![BigRational::zero(); n];
        for (w, br) in brackets.iter().enumerate() {
            let c = &coeffs[w];
            if c.is_zero() || br.iter().all(|e| e.is_zero()) {
                continue;
            }
            let vc = vp_rational(c, p);
            for (s, e) in sum.iter_mut().zip(br) {
                if e.is_zero() {
                    continue;
                }
                if vc + (vp_int(e, p) as i64) < 0 {
                    return Err(LieError::NonIntegralTerm { degree: m });
                }
                *s += c * BigRational::from_integer(e.clone());
            }
        }
        out.push(sum);
    }
    Ok(out)
}

/// Z with exp(X) exp(Y) = exp(Z) modulo p^k, coordinates in [0, p^k).
pub fn bch_multiply(
    l: &PowerfulLieLattice,
    x: &[BigInt],
    y: &[BigInt],
    cfg: BchConfig,
) -> Result<Vec<BigInt>, LieError> {
    let p = l.p();
    if p == 2 {
        return Err(LieError::PrimeTwo);
    }
    let k = cfg.precision;
    let d = cfg.cap_for(p);
    let parts = bch_by_degree(l, x, y, d + 1)?;
    let n = l.rank();
    let mut z = vec![BigRational::zero(); n];
    for part in &parts[..d] {
        for (a, b) in z.iter_mut().zip(part) {
            *a += b;
        }
    }
    let z_d: Vec<BigInt> = z.iter().map(|q| rational_mod(q, p, k)).collect::<Result<_, _>>()?;
    let last: Vec<BigInt> = parts[d]
        .iter()
        .map(|q| rational_mod(q, p, k))
        .collect::<Result<_, _>>()?;
    if last.iter().any(|e| !e.is_zero()) {
        return Err(LieError::TruncationUnstable(d, d + 1));
    }
    Ok(z_d)
}

fn neg_mod(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    v.iter().map(|e| (-e).mod_floor(m)).collect()
}

/// log of the group commutator exp(-X) exp(-Y) exp(X) exp(Y).
pub fn group_commutator(
    l: &PowerfulLieLattice,
    x: &[BigInt],
    y: &[BigInt],
    cfg: BchConfig,
) -> Result<Vec<BigInt>, LieError> {
    let m = modulus(l.p(), cfg.precision);
    let nx = neg_mod(x, &m);
    let ny = neg_mod(y, &m);
    let a = bch_multiply(l, &nx, &ny, cfg)?;
    let b = bch_multiply(l, &a, x, cfg)?;
    bch_multiply(l, &b, y, cfg)
}

/// Group-level coefficients of an edge: [exp X_i, exp X_j] = exp(X_i)^a exp(X_j)^b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRelation {
    pub a: TruncatedPadic,
    pub b: TruncatedPadic,
    /// Lie coefficients: [X_i, X_j] = alpha X_i + beta X_j.
    pub alpha: BigInt,
    pub beta: BigInt,
    /// (a, b) agrees with (alpha, beta) modulo p to this power.
    pub agreement: u32,
}

/// Solve for the group relation of the pair (X_i, X_j) digit by digit.
pub fn solve_edge_relation(
    l: &PowerfulLieLattice,
    i: usize,
    j: usize,
    precision: u32,
) -> Result<EdgeRelation, LieError> {
    let p = l.p();
    if p == 2 {
        return Err(LieError::PrimeTwo);
    }
    if !l.pair_closed(i, j) {
        return Err(LieError::NotClosed(i, j));
    }
    let cfg = BchConfig::new(precision);
    let n = l.rank();
    let m = modulus(p, precision);
    let unit = |s: usize, c: &BigInt| {
        let mut v = vec![BigInt::zero(); n];
        v[s] = c.mod_floor(&m);
        v
    };
    let z = group_commutator(l, &unit(i, &BigInt::one()), &unit(j, &BigInt::one()), cfg)?;
    if z.iter().enumerate().any(|(s, e)| s != i && s != j && !e.is_zero()) {
        return Err(LieError::Internal("commutator left the plane of X_i, X_j".into()));
    }
    let (mut a, mut b) = (z[i].clone(), z[j].clone());
    let mut solved = false;
    for _ in 0..(2 * precision as usize + 8) {
        let w = bch_multiply(l, &unit(i, &a), &unit(j, &b), cfg)?;
        let ri = (&z[i] - &w[i]).mod_floor(&m);
        let rj = (&z[j] - &w[j]).mod_floor(&m);
        if ri.is_zero() && rj.is_zero() {
            solved = true;
            break;
        }
        a = (a + ri).mod_floor(&m);
        b = (b + rj).mod_floor(&m);
    }
    if !solved {
        return Err(LieError::Internal("digit solve did not converge".into()));
    }

    let alpha = l.constants(i, j)[i].clone();
    let beta = l.constants(i, j)[j].clone();
    let wrap = |val: &BigInt, lie: &BigInt| {
        if lie.is_zero() && val.is_zero() {
            TruncatedPadic::exact_zero(p, precision)
        } else {
            TruncatedPadic::from_residue(p, precision, val.clone())
        }
    };
    let (ta, tb) = (wrap(&a, &alpha), wrap(&b, &beta));

    let pb = BigInt::from(p);
    if !(&a % &pb).is_zero() || !(&b % &pb).is_zero() {
        return Err(LieError::Internal("group coefficients are not in pZ_p".into()));
    }
    let vmin = [&alpha, &beta]
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| vp_int(x, p))
        .min();
    let agreement = match vmin {
        None => precision,
        Some(v) => (v + 1).min(precision),
    };
    let ma = modulus(p, agreement);
    if !(&a - &alpha).mod_floor(&ma).is_zero() || !(&b - &beta).mod_floor(&ma).is_zero() {
        return Err(LieError::Internal(format!(
            "group coefficients ({a}, {b}) disagree with ({alpha}, {beta}) mod {p}^{agreement}"
        )));
    }
    Ok(EdgeRelation {
        a: ta,
        b: tb,
        alpha,
        beta,
        agreement,
    })
}

/// Solve every edge of a p-graph inside its own 2-dimensional lattice
/// [X_u, X_v] = f1 X_u + f2 X_v.
pub fn lazard_verify(g: &PGraph, precision: u32) -> Result<Vec<((String, String), EdgeRelation)>, LieError> {
    let names = g.graph().vertices();
    let mut out = Vec::new();
    for (&(u, v), (f1, f2)) in g.graph().edges().iter().zip(g.labels()) {
        let ex = |f: &TruncatedPadic| {
            f.exact_value()
                .cloned()
                .ok_or_else(|| PrecisionError(format!("label {f} has no exact value")))
        };
        let l = PowerfulLieLattice::new(g.p(), precision, 2, &[((0, 1), vec![ex(f1)?, ex(f2)?])])?;
        out.push(((names[u].clone(), names[v].clone()), solve_edge_relation(&l, 0, 1, precision)?));
    }
    Ok(out)
}
