use super::triangle::{triangle_jacobi, triangle_labels};
use super::LieError;
use crate::arith::padic::vp_int;
use crate::arith::{PrecisionError, TruncatedPadic};
use crate::graph::min_label_valuation;
use crate::graph::PGraph;
use num_bigint::BigInt;
use num_traits::Zero;

/// A Z_p-Lie lattice with exact integer structure constants
/// [e_i, e_j] = sum_m c[i][j][m] e_m, every constant of valuation at least 1
/// (at least 2 for p = 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerfulLieLattice {
    p: u64,
    k: u32,
    n: usize,
    c: Vec<Vec<Vec<BigInt>>>,
}

impl PowerfulLieLattice {
    /// Brackets not listed are zero; [e_j, e_i] = -[e_i, e_j] is filled in.
    pub fn new(
        p: u64,
        k: u32,
        n: usize,
        brackets: &[((usize, usize), Vec<BigInt>)],
    ) -> Result<Self, LieError> {
        let mut c = vec![vec![vec![BigInt::zero(); n]; n]; n];
        let need = min_label_valuation(p);
        for ((i, j), v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || v.len() != n {
                return Err(LieError::InvalidLattice(format!("bad bracket ({i},{j})")));
            }
            if i == j {
                if v.iter().any(|x| !x.is_zero()) {
                    return Err(LieError::InvalidLattice(format!("[e{i},e{i}] must vanish")));
                }
                continue;
            }
            for x in v {
                if !x.is_zero() && vp_int(x, p) < need {
                    return Err(LieError::InvalidLattice(format!(
                        "constant {x} in [e{i},e{j}] has valuation below {need}"
                    )));
                }
            }
            c[i][j] = v.clone();
            c[j][i] = v.iter().map(|x| -x).collect();
        }
        Ok(PowerfulLieLattice { p, k, n, c })
    }

    pub fn from_i64(p: u64, k: u32, n: usize, brackets: &[((usize, usize), Vec<i64>)]) -> Result<Self, LieError> {
        let b: Vec<_> = brackets
            .iter()
            .map(|(ij, v)| (*ij, v.iter().map(|&x| BigInt::from(x)).collect()))
            .collect();
        Self::new(p, k, n, &b)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.k
    }
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn constants(&self, i: usize, j: usize) -> &[BigInt] {
        &self.c[i][j]
    }

    pub fn bracket(&self, u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                let s = ui * vj;
                for (o, cm) in out.iter_mut().zip(&self.c[i][j]) {
                    if !cm.is_zero() {
                        *o += &s * cm;
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n];
        v[i] = BigInt::from(1);
        v
    }

    /// First basis triple violating the Jacobi identity (exact arithmetic).
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                for l in j + 1..self.n {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(l));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    pub fn jacobi_holds(&self) -> bool {
        self.jacobi_failure().is_none()
    }

    /// The lattice in the basis (e_{idx[0]}, e_{idx[1]}, ...).
    pub fn permute(&self, idx: &[usize]) -> PowerfulLieLattice {
        assert_eq!(idx.len(), self.n);
        let n = self.n;
        let mut c = vec![vec![vec![BigInt::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for m in 0..n {
                    c[a][b][m] = self.c[idx[a]][idx[b]][idx[m]].clone();
                }
            }
        }
        PowerfulLieLattice {
            p: self.p,
            k: self.k,
            n,
            c,
        }
    }

    /// Whether span(e_i, e_j) is closed under the bracket.
    pub fn pair_closed(&self, i: usize, j: usize) -> bool {
        self.c[i][j]
            .iter()
            .enumerate()
            .all(|(m, x)| m == i || m == j || x.is_zero())
    }
}

/// [L', L'] = 0, where L' is spanned by the brackets of basis elements.
pub fn is_metabelian(l: &PowerfulLieLattice) -> bool {
    let n = l.rank();
    let gens: Vec<&[BigInt]> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| l.constants(i, j))
        .collect();
    gens.iter().enumerate().all(|(a, u)| {
        gens[a + 1..]
            .iter()
            .all(|v| l.bracket(u, v).iter().all(|x| x.is_zero()))
    })
}

/// Coefficients (c_u, c_v) with [X_u, X_v] = c_u X_u + c_v X_v read from the
/// p-graph; a reversed edge (v, u) labelled (f1, f2) gives (-f2, -f1), and a
/// missing edge gives exact zeros.
pub fn oriented_label(g: &PGraph, u: usize, v: usize) -> (TruncatedPadic, TruncatedPadic) {
    match g.graph().edge_between(u, v) {
        Some((i, false)) => g.labels()[i].clone(),
        Some((i, true)) => {
            let (f1, f2) = &g.labels()[i];
            (-f2, -f1)
        }
        None => {
            let z = TruncatedPadic::exact_zero(g.p(), g.precision());
            (z.clone(), z)
        }
    }
}

/// Lattice of a complete p-graph, after checking every vertex triple.
pub fn complete_graph_lattice(g: &PGraph) -> Result<PowerfulLieLattice, LieError> {
    let gr = g.graph();
    if !gr.is_complete() {
        return Err(LieError::NotComplete);
    }
    let n = gr.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !triangle_jacobi(&triangle_labels(g, a, b, c))? {
                    let names = gr.vertices();
                    return Err(LieError::TripleFailure(
                        names[a].clone(),
                        names[b].clone(),
                        names[c].clone(),
                    ));
                }
            }
        }
    }
    let mut brackets = Vec::new();
    for (&(u, v), (f1, f2)) in gr.edges().iter().zip(g.labels()) {
        let mut vec = vec![BigInt::zero(); n];
        for (slot, f) in [(u, f1), (v, f2)] {
            vec[slot] = f
                .exact_value()
                .cloned()
                .ok_or_else(|| PrecisionError(format!("label {f} has no exact value")))?;
        }
        brackets.push(((u, v), vec));
    }
    let l = PowerfulLieLattice::new(g.p(), g.precision(), n, &brackets)?;
    debug_assert!(l.jacobi_holds());
    Ok(l)
}
