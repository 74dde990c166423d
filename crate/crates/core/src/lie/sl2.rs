use super::LieError;
use crate::arith::{inv_mod, reduce_i64, FpMatrix};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient matrix of the 9x9 system for the correction terms c_ij
/// (unknowns ordered c11, c12, c13, c21, ..., c33), as displayed.
pub fn sl2_matrix() -> [[i64; 9]; 9] {
    [
        [1, 0, 0, 0, 1, -1, 0, 0, 0],
        [1, 0, -1, 0, 1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, -1, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, -1, 0, 1],
        [0, 0, 0, -1, 1, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0, 0, -1, 1],
        [0, -1, 0, 0, 0, 0, 0, -1, 0],
        [1, -1, 0, 0, 0, 0, 0, 0, 1],
    ]
}

/// Right-hand side as coefficients of (d1, d2, d3) per row.
fn rhs_coefficients() -> [[i64; 3]; 9] {
    [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 0],
        [0, 0, 0],
        [0, 0, 1],
        [1, 0, 0],
        [0, 0, 1],
        [0, 0, 0],
        [0, 1, 0],
    ]
}

/// Twice the closed-form solution, as coefficients of (d1, d2, d3):
/// (d2, -(d2-d3), d1-d2, -(d1-d3), d1, -(d1-d2), d1-d3, d2-d3, d3) / 2.
fn doubled_solution_coefficients() -> [[i64; 3]; 9] {
    [
        [0, 1, 0],
        [0, -1, 1],
        [1, -1, 0],
        [-1, 0, 1],
        [1, 0, 0],
        [-1, 1, 0],
        [1, 0, -1],
        [0, 1, -1],
        [0, 0, 1],
    ]
}

#[derive(Debug, Clone)]
pub struct Sl2System {
    pub matrix: FpMatrix,
    pub rhs: Vec<u64>,
    pub solution: Vec<u64>,
    /// matrix * solution == rhs over F_p.
    pub satisfied: bool,
}

/// The system over F_p for given d1, d2, d3, with the closed-form solution.
pub fn sl2_system(p: u64, delta: [i64; 3]) -> Result<Sl2System, LieError> {
    if p == 2 {
        return Err(LieError::PrimeTwo);
    }
    let rows: Vec<Vec<i64>> = sl2_matrix().iter().map(|r| r.to_vec()).collect();
    let matrix = FpMatrix::from_rows(p, 9, &rows);
    let lin = |c: &[i64; 3]| reduce_i64(c.iter().zip(&delta).map(|(a, d)| a * d).sum(), p);
    let rhs: Vec<u64> = rhs_coefficients().iter().map(lin).collect();
    let half = inv_mod(2, p);
    let solution: Vec<u64> = doubled_solution_coefficients()
        .iter()
        .map(|c| lin(c) * half % p)
        .collect();
    let satisfied = (0..9).all(|r| {
        (0..9).map(|c| matrix.get(r, c) * solution[c]).sum::<u64>() % p == rhs[r]
    });
    Ok(Sl2System {
        matrix,
        rhs,
        solution,
        satisfied,
    })
}

/// The closed form satisfies the system identically in (d1, d2, d3) over F_p:
/// the system is linear, so it suffices to check each coefficient vector.
pub fn sl2_symbolic_check(p: u64) -> Result<bool, LieError> {
    if p == 2 {
        return Err(LieError::PrimeTwo);
    }
    let m = sl2_matrix();
    let rhs = rhs_coefficients();
    let sol = doubled_solution_coefficients();
    let half = inv_mod(2, p) as i64;
    Ok((0..3).all(|t| {
        (0..9).all(|r| {
            let lhs: i64 = (0..9).map(|c| m[r][c] * sol[c][t] * half).sum();
            reduce_i64(lhs - rhs[r][t], p) == 0
        })
    }))
}

/// Rank of the displayed matrix over Q (fraction-exact elimination).
pub fn sl2_rank_over_q() -> usize {
    let mut a: Vec<Vec<BigRational>> = sl2_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..9 {
        let Some(piv) = (rank..9).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigRational::one() / &a[rank][c];
        for j in 0..9 {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for i in 0..9 {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..9 {
                    let s = &f * &a[rank][j];
                    a[i][j] -= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn sl2_rank_over_fp(p: u64) -> usize {
    let rows: Vec<Vec<i64>> = sl2_matrix().iter().map(|r| r.to_vec()).collect();
    FpMatrix::from_rows(p, 9, &rows).rank()
}
