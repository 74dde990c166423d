use super::{inv_mod, mul_mod, reduce_i64};
use std::fmt;

/// Dense matrix over the prime field F_p, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Output of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FpMatrix,
    /// Pivot columns in increasing order.
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Build from signed integer rows; every row must have `cols` entries.
    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = reduce_i64(x, p);
            }
        }
        m
    }

    /// Build from rows of residues (values are reduced mod p).
    pub fn from_residue_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = x % p;
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = reduce_i64(v, self.p);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c) == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p, "modulus mismatch");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + mul_mod(a, other.get(k, j), p)) % p;
                }
            }
        }
        out
    }

    /// Stack the rows of `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Gauss-Jordan elimination to reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = mul_mod(m.data[idx], inv, p);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let sub = mul_mod(f, m.data[r * m.cols + j], p);
                    let idx = i * m.cols + j;
                    m.data[idx] = (m.data[idx] + p - sub) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            rank: pivots.len(),
            reduced: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space {v : M v = 0}.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1 % p;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - reduced.get(i, f)) % p;
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced form: a basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<u64>> {
        let rr = self.rref();
        (0..rr.rank).map(|i| rr.reduced.row(i).to_vec()).collect()
    }

    /// Solve x·M = b for a row vector x, if solvable.
    pub fn solve_left(&self, b: &[u64]) -> Option<Vec<u64>> {
        // x M = b  <=>  M^T x^T = b^T
        let t = self.transpose();
        let mut aug = Self::zeros(self.p, t.rows, t.cols + 1);
        for r in 0..t.rows {
            for c in 0..t.cols {
                aug.data[r * (t.cols + 1) + c] = t.get(r, c);
            }
            aug.data[r * (t.cols + 1) + t.cols] = b[r] % self.p;
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&t.cols) {
            return None;
        }
        let mut x = vec![0u64; t.cols];
        for (i, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = rr.reduced.get(i, t.cols);
        }
        Some(x)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_rank() {
        let rr = FpMatrix::identity(5, 3).rref();
        assert_eq!(rr.rank, 3);
        assert_eq!(rr.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn proportional_rows() {
        let m = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = FpMatrix::from_rows(7, 4, &[vec![1, 2, 3, 4], vec![2, 4, 6, 2]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            for r in 0..m.rows() {
                let s: u64 = (0..4).map(|c| m.get(r, c) * v[c]).sum::<u64>() % 7;
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn solve_left_roundtrip() {
        let m = FpMatrix::from_rows(5, 3, &[vec![1, 0, 2], vec![0, 1, 3]]);
        let x = m.solve_left(&[2, 3, 4 + 9 % 5]).unwrap();
        let b: Vec<u64> = (0..3)
            .map(|c| (x[0] * m.get(0, c) + x[1] * m.get(1, c)) % 5)
            .collect();
        assert_eq!(b, vec![2, 3, (4 + 9) % 5]);
        assert!(m.solve_left(&[0, 0, 1]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = (u64, Vec<Vec<i64>>)> {
        (prop::sample::select(vec![2u64, 3, 5, 7]), 1usize..6, 1usize..6).prop_flat_map(
            |(p, r, c)| {
                (
                    Just(p),
                    prop::collection::vec(prop::collection::vec(-6i64..6, c), r),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn rref_idempotent((p, rows) in small_matrix()) {
            let m = FpMatrix::from_rows(p, rows[0].len(), &rows);
            let once = m.rref();
            let twice = once.reduced.rref();
            prop_assert_eq!(&once.reduced, &twice.reduced);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn rank_of_transpose((p, rows) in small_matrix()) {
            let m = FpMatrix::from_rows(p, rows[0].len(), &rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_plus_nullity((p, rows) in small_matrix()) {
            let m = FpMatrix::from_rows(p, rows[0].len(), &rows);
            prop_assert_eq!(m.rank() + m.kernel().len(), m.cols());
        }
    }
}
