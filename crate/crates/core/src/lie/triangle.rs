use super::lattice::{oriented_label, PowerfulLieLattice};
use super::LieError;
use crate::arith::{PrecisionError, TruncatedPadic};
use crate::graph::PGraph;
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt;

/// Coefficients of a triangle lattice in the frame
/// [x1,x2] = a1 x1 + a2 x2, [x2,x3] = b2 x2 + b3 x3, [x3,x1] = g1 x1 + g3 x3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleLabels {
    pub a1: TruncatedPadic,
    pub a2: TruncatedPadic,
    pub b2: TruncatedPadic,
    pub b3: TruncatedPadic,
    pub g1: TruncatedPadic,
    pub g3: TruncatedPadic,
}

impl TriangleLabels {
    pub fn from_ints(p: u64, k: u32, v: [i64; 6]) -> Self {
        let t = |x: i64| TruncatedPadic::from_int(p, k, x);
        TriangleLabels {
            a1: t(v[0]),
            a2: t(v[1]),
            b2: t(v[2]),
            b3: t(v[3]),
            g1: t(v[4]),
            g3: t(v[5]),
        }
    }

    pub fn as_array(&self) -> [&TruncatedPadic; 6] {
        [&self.a1, &self.a2, &self.b2, &self.b3, &self.g1, &self.g3]
    }

    fn from_array(v: [TruncatedPadic; 6]) -> Self {
        let [a1, a2, b2, b3, g1, g3] = v;
        TriangleLabels {
            a1,
            a2,
            b2,
            b3,
            g1,
            g3,
        }
    }

    /// New basis (x2, x3, x1).
    fn rotate(&self) -> Self {
        Self::from_array([
            self.b2.clone(),
            self.b3.clone(),
            self.g3.clone(),
            self.g1.clone(),
            self.a2.clone(),
            self.a1.clone(),
        ])
    }

    /// New basis (x2, x1, x3).
    fn swap12(&self) -> Self {
        Self::from_array([
            -&self.a2,
            -&self.a1,
            -&self.g1,
            -&self.g3,
            -&self.b2,
            -&self.b3,
        ])
    }

    /// Rank-3 lattice with these structure constants (exact labels required).
    pub fn lattice(&self) -> Result<PowerfulLieLattice, LieError> {
        let ex = |x: &TruncatedPadic| {
            x.exact_value().cloned().ok_or_else(|| {
                PrecisionError(format!("label {x} has no exact value"))
            })
        };
        let z = BigInt::from(0);
        let c01 = vec![ex(&self.a1)?, ex(&self.a2)?, z.clone()];
        let c12 = vec![z.clone(), ex(&self.b2)?, ex(&self.b3)?];
        let c20 = vec![ex(&self.g1)?, z, ex(&self.g3)?];
        let a = &self.a1;
        PowerfulLieLattice::new(a.p(), a.precision(), 3, &[((0, 1), c01), ((1, 2), c12), ((2, 0), c20)])
    }
}

/// The three Jacobi residuals a1 b2 - g1 b3, g1 a2 - b2 g3, a1 g3 - a2 b3.
pub fn jacobi_residuals(t: &TriangleLabels) -> [TruncatedPadic; 3] {
    [
        &(&t.a1 * &t.b2) - &(&t.g1 * &t.b3),
        &(&t.g1 * &t.a2) - &(&t.b2 * &t.g3),
        &(&t.a1 * &t.g3) - &(&t.a2 * &t.b3),
    ]
}

/// Whether the triangle labels define a Lie bracket.
pub fn triangle_jacobi(t: &TriangleLabels) -> Result<bool, PrecisionError> {
    let mut undecided = None;
    for r in jacobi_residuals(t) {
        match r.is_zero() {
            Ok(true) => {}
            Ok(false) => return Ok(false),
            Err(e) => undecided = Some(e),
        }
    }
    match undecided {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// Triangle labels of the vertex triple (a, b, c) of a p-graph, reoriented
/// into the frame of [`TriangleLabels`]. Missing edges read as exact zero.
pub fn triangle_labels(g: &PGraph, a: usize, b: usize, c: usize) -> TriangleLabels {
    let (a1, a2) = oriented_label(g, a, b);
    let (b2, b3) = oriented_label(g, b, c);
    let (g3, g1) = oriented_label(g, c, a);
    TriangleLabels {
        a1,
        a2,
        b2,
        b3,
        g1,
        g3,
    }
}

/// Families of triangle lattices, in the basis (x, y, z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyTag {
    /// [x,y] = eta y, [y,z] = mu y, [z,x] = lambda z + rho x
    L1 {
        eta: TruncatedPadic,
        rho: TruncatedPadic,
        mu: TruncatedPadic,
        lambda: TruncatedPadic,
    },
    /// [x,y] = 0, [y,z] = eta y + mu z, [z,x] = 0
    L2 { eta: TruncatedPadic, mu: TruncatedPadic },
    /// [x,y] = 0, [y,z] = eta z, [z,x] = mu z
    L3 { eta: TruncatedPadic, mu: TruncatedPadic },
    /// [x,y] = eta x + mu y, [y,z] = lambda y - eta z, [z,x] = -lambda x - mu z
    L4 {
        eta: TruncatedPadic,
        mu: TruncatedPadic,
        lambda: TruncatedPadic,
    },
    /// [x,y] = eta x + mu y, [y,z] = lambda y + eta z, [z,x] = lambda x + mu z
    Lstar {
        eta: TruncatedPadic,
        mu: TruncatedPadic,
        lambda: TruncatedPadic,
    },
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::L1 { .. } => "L1",
            FamilyTag::L2 { .. } => "L2",
            FamilyTag::L3 { .. } => "L3",
            FamilyTag::L4 { .. } => "L4",
            FamilyTag::Lstar { .. } => "Lstar",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, &TruncatedPadic)> {
        match self {
            FamilyTag::L1 {
                eta,
                rho,
                mu,
                lambda,
            } => vec![("eta", eta), ("rho", rho), ("mu", mu), ("lambda", lambda)],
            FamilyTag::L2 { eta, mu } | FamilyTag::L3 { eta, mu } => vec![("eta", eta), ("mu", mu)],
            FamilyTag::L4 { eta, mu, lambda } | FamilyTag::Lstar { eta, mu, lambda } => {
                vec![("eta", eta), ("mu", mu), ("lambda", lambda)]
            }
        }
    }

    /// Triangle coefficients of the family's defining brackets.
    pub fn labels(&self) -> TriangleLabels {
        let zero = |x: &TruncatedPadic| TruncatedPadic::exact_zero(x.p(), x.precision());
        let arr = match self {
            FamilyTag::L1 {
                eta,
                rho,
                mu,
                lambda,
            } => [zero(eta), eta.clone(), mu.clone(), zero(eta), rho.clone(), lambda.clone()],
            FamilyTag::L2 { eta, mu } => [zero(eta), zero(eta), eta.clone(), mu.clone(), zero(eta), zero(eta)],
            FamilyTag::L3 { eta, mu } => [zero(eta), zero(eta), zero(eta), eta.clone(), zero(eta), mu.clone()],
            FamilyTag::L4 { eta, mu, lambda } => {
                [eta.clone(), mu.clone(), lambda.clone(), -eta, -lambda, -mu]
            }
            FamilyTag::Lstar { eta, mu, lambda } => {
                [eta.clone(), mu.clone(), lambda.clone(), eta.clone(), lambda.clone(), mu.clone()]
            }
        };
        TriangleLabels::from_array(arr)
    }

    pub fn lattice(&self) -> Result<PowerfulLieLattice, LieError> {
        self.labels().lattice()
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params().iter().map(|(_, v)| v.to_string()).collect();
        write!(f, "{}({})", self.name(), ps.join(","))
    }
}

/// The basis used for the family: (x, y, z) = (x_{perm[0]}, x_{perm[1]}, x_{perm[2]})
/// in the input's (x1, x2, x3) numbering, starting from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameChange {
    pub perm: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub family: FamilyTag,
    pub frame: FrameChange,
}

/// Sort a triangle lattice into one of the families L1, L2, L3, L4, Lstar.
pub fn classify_triangle(t: &TriangleLabels) -> Result<Classification, LieError> {
    if !triangle_jacobi(t)? {
        return Err(LieError::NotALattice(
            jacobi_residuals(t).iter().map(|r| r.to_string()).collect(),
        ));
    }
    let mut zero = [false; 6];
    for (z, x) in zero.iter_mut().zip(t.as_array()) {
        *z = x.is_zero()?;
    }

    if zero.iter().any(|&z| z) {
        // Move a vanishing coefficient into the a1 slot.
        let r1 = t.rotate();
        let r2 = r1.rotate();
        let candidates = [
            (t.clone(), [1, 2, 3]),
            (r1.clone(), [2, 3, 1]),
            (r2.clone(), [3, 1, 2]),
            (t.swap12(), [2, 1, 3]),
            (r1.swap12(), [3, 2, 1]),
            (r2.swap12(), [1, 3, 2]),
        ];
        for (u, perm) in candidates {
            if !u.a1.is_zero()? {
                continue;
            }
            let family = if u.b3.is_zero()? {
                FamilyTag::L1 {
                    eta: u.a2,
                    rho: u.g1,
                    mu: u.b2,
                    lambda: u.g3,
                }
            } else if u.b2.is_zero()? {
                FamilyTag::L3 { eta: u.b3, mu: u.g3 }
            } else {
                FamilyTag::L2 { eta: u.b2, mu: u.b3 }
            };
            return Ok(Classification {
                family,
                frame: FrameChange { perm },
            });
        }
        return Err(LieError::Internal("no frame with a vanishing a1".into()));
    }

    let frame = FrameChange { perm: [1, 2, 3] };
    let all_zero = |xs: [TruncatedPadic; 3]| -> Result<bool, PrecisionError> {
        for x in xs {
            if !x.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if all_zero([&t.b2 - &t.g1, &t.b3 - &t.a1, &t.a2 - &t.g3])? {
        return Ok(Classification {
            family: FamilyTag::Lstar {
                eta: t.a1.clone(),
                mu: t.a2.clone(),
                lambda: t.b2.clone(),
            },
            frame,
        });
    }
    if all_zero([&t.b2 + &t.g1, &t.b3 + &t.a1, &t.a2 + &t.g3])? {
        return Ok(Classification {
            family: FamilyTag::L4 {
                eta: t.a1.clone(),
                mu: t.a2.clone(),
                lambda: t.b2.clone(),
            },
            frame,
        });
    }
    Err(LieError::Internal("sign ratio is neither 1 nor -1".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::is_metabelian;

    const P: u64 = 5;

    fn tl(v: [i64; 6]) -> TriangleLabels {
        TriangleLabels::from_ints(P, 4, v)
    }

    #[test]
    fn jacobi_examples() {
        // Mennicke arrangement: a2 = b3 = g1 = -p
        let m = tl([0, -5, 0, -5, -5, 0]);
        assert!(!triangle_jacobi(&m).unwrap());
        assert_eq!(jacobi_residuals(&m)[0].exact_value().unwrap(), &BigInt::from(-25));
        assert!(triangle_jacobi(&tl([0; 6])).unwrap());
        assert!(triangle_jacobi(&tl([5, 10, 15, 5, 15, 10])).unwrap());
    }

    #[test]
    fn undecidable_residual() {
        let mut t = tl([0; 6]);
        t.a1 = TruncatedPadic::from_residue(P, 2, 5);
        t.b2 = TruncatedPadic::from_residue(P, 2, 5);
        // a1 b2 = 25 = 0 mod 5^2, not provably zero
        assert!(triangle_jacobi(&t).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify_triangle(&tl([0, 0, 5, 10, 0, 0])).unwrap();
        assert_eq!(c.family.to_string(), "L2(5,10)");
        assert!(matches!(classify_triangle(&tl([0, -5, 0, -5, -5, 0])), Err(LieError::NotALattice(_))));
        let c = classify_triangle(&tl([5, 10, 15, 5, 15, 10])).unwrap();
        assert_eq!(c.family.to_string(), "Lstar(5,10,15)");
        let c = classify_triangle(&tl([5, 10, 15, -5, -15, -10])).unwrap();
        assert_eq!(c.family.to_string(), "L4(5,10,15)");
        let c = classify_triangle(&tl([0, 0, 0, 5, 0, 25])).unwrap();
        assert_eq!(c.family.to_string(), "L3(5,25)");
    }

    fn label_set() -> Vec<i64> {
        vec![0, 5, -5, 10, -10, 25]
    }

    fn permuted(l: &PowerfulLieLattice, perm: [usize; 3]) -> PowerfulLieLattice {
        l.permute(&[perm[0] - 1, perm[1] - 1, perm[2] - 1])
    }

    /// Over all label 6-tuples from {0, +-p, +-2p, p^2}: classification succeeds
    /// exactly when Jacobi holds, the family lattice is the input lattice in the
    /// reported frame, and only Lstar is non-metabelian.
    #[test]
    fn exhaustive_label_sweep() {
        let s = label_set();
        let mut counts = std::collections::BTreeMap::new();
        for i in 0..s.len().pow(6) {
            let mut v = [0i64; 6];
            let mut r = i;
            for x in v.iter_mut() {
                *x = s[r % s.len()];
                r /= s.len();
            }
            let t = tl(v);
            let jac = triangle_jacobi(&t).unwrap();
            match classify_triangle(&t) {
                Ok(c) => {
                    assert!(jac);
                    let fam = c.family.lattice().unwrap();
                    assert!(fam.jacobi_holds());
                    let orig = permuted(&t.lattice().unwrap(), c.frame.perm);
                    assert_eq!(fam, orig, "{v:?} -> {}", c.family);
                    let meta = is_metabelian(&fam);
                    assert_eq!(meta, !matches!(c.family, FamilyTag::Lstar { .. }), "{v:?}");
                    *counts.entry(c.family.name()).or_insert(0) += 1;
                }
                Err(LieError::NotALattice(_)) => assert!(!jac),
                Err(e) => panic!("{v:?}: {e}"),
            }
        }
        for f in ["L1", "L2", "L3", "L4", "Lstar"] {
            assert!(counts.get(f).copied().unwrap_or(0) > 0, "{f} never hit: {counts:?}");
        }
    }
}
