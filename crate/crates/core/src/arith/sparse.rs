use super::{inv_mod, mul_mod};

/// A sparse vector over F_p: strictly increasing column indices, nonzero values.
pub type SparseVec = Vec<(usize, u64)>;

/// Incremental row echelon form over F_p with the pivot of each row at its
/// largest column. Rows are stored normalised (pivot entry 1) but only
/// semi-reduced: a row may still touch other pivot columns below its pivot.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    p: u64,
    cols: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseVec>,
}

const NONE: u32 = u32::MAX;

impl SparseEchelon {
    pub fn new(p: u64, cols: usize) -> Self {
        SparseEchelon {
            p,
            cols,
            pivot_row: vec![NONE; cols],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c] != NONE
    }

    /// The stored row whose pivot is `c`.
    pub fn row_for_pivot(&self, c: usize) -> Option<&SparseVec> {
        match self.pivot_row[c] {
            NONE => None,
            i => Some(&self.rows[i as usize]),
        }
    }

    /// Reduce until the leading (largest) column is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let p = self.p;
        let mut scratch = Vec::new();
        while let Some(&(c, a)) = v.last() {
            let Some(row) = self.row_for_pivot(c) else {
                break;
            };
            // v <- v - a*row; the pivot entries cancel.
            let f = p - a;
            scratch.clear();
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < row.len() {
                let take = match (v.get(i), row.get(j)) {
                    (Some(&(ci, _)), Some(&(cj, _))) => ci.cmp(&cj),
                    (Some(_), None) => std::cmp::Ordering::Less,
                    _ => std::cmp::Ordering::Greater,
                };
                match take {
                    std::cmp::Ordering::Less => {
                        scratch.push(v[i]);
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        let (cj, x) = row[j];
                        scratch.push((cj, mul_mod(f, x, p)));
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        let s = (v[i].1 + mul_mod(f, row[j].1, p)) % p;
                        if s != 0 {
                            scratch.push((v[i].0, s));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            std::mem::swap(&mut v, &mut scratch);
        }
        v
    }

    /// Insert a row; returns true when it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        let mut v = self.reduce(v);
        let Some(&(c, a)) = v.last() else {
            return false;
        };
        if a != 1 {
            let inv = inv_mod(a, self.p);
            for e in v.iter_mut() {
                e.1 = mul_mod(e.1, inv, self.p);
            }
        }
        self.pivot_row[c] = self.rows.len() as u32;
        self.rows.push(v);
        true
    }

    /// Normal form of every column modulo the row span, expressed in the basis
    /// of non-pivot columns (numbered in increasing column order). Returned as
    /// (basis columns, offsets, entries) in compressed row layout: the normal
    /// form of column c is `entries[offsets[c]..offsets[c+1]]`.
    pub fn normal_forms(&self) -> (Vec<usize>, Vec<usize>, Vec<(u32, u64)>) {
        let p = self.p;
        let mut basis = Vec::new();
        let mut index = vec![u32::MAX; self.cols];
        for c in 0..self.cols {
            if !self.is_pivot(c) {
                index[c] = basis.len() as u32;
                basis.push(c);
            }
        }
        let mut offsets = Vec::with_capacity(self.cols + 1);
        let mut entries: Vec<(u32, u64)> = Vec::with_capacity(self.cols);
        offsets.push(0);
        let mut acc: Vec<u64> = Vec::new();
        let mut touched: Vec<u32> = Vec::new();
        for c in 0..self.cols {
            match self.row_for_pivot(c) {
                None => entries.push((index[c], 1 % p)),
                Some(row) => {
                    // column c = -(sum of lower terms of its row), all already normal.
                    if acc.is_empty() {
                        acc = vec![0; basis.len()];
                    }
                    for &(j, x) in &row[..row.len() - 1] {
                        let f = (p - x) % p;
                        for &(b, y) in &entries[offsets[j]..offsets[j + 1]] {
                            let slot = &mut acc[b as usize];
                            if *slot == 0 {
                                touched.push(b);
                            }
                            *slot = (*slot + mul_mod(f, y, p)) % p;
                        }
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    for &b in &touched {
                        let v = acc[b as usize];
                        if v != 0 {
                            entries.push((b, v));
                        }
                        acc[b as usize] = 0;
                    }
                    touched.clear();
                }
            }
            offsets.push(entries.len());
        }
        (basis, offsets, entries)
    }
}
