//! Dense linear algebra over [`Scalar`]: Gauss-Jordan elimination (exact
//! field arithmetic, or partial pivoting for floats) and determinants.

use std::collections::HashMap;

use crate::error::Result;
use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    /// One column of unknowns per right-hand side.
    Unique(Vec<Vec<Scalar>>),
    Inconsistent,
    Underdetermined,
}

fn is_float_system(a: &Matrix) -> bool {
    a.iter().flatten().any(Scalar::is_float)
}

/// Solves `a * x = b_c` for every right-hand side column `b_c`.
/// `a` is `m x n` with `m >= n` allowed (overdetermined but consistent
/// systems are solved exactly).
pub fn solve_columns(a: &Matrix, rhs: &[Vec<Scalar>]) -> Result<Solution> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let r = rhs.len();
    let float = is_float_system(a);
    let mut aug: Matrix = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|c| c[i].clone()));
            row
        })
        .collect();
    let scale = if float {
        a.iter()
            .flatten()
            .filter_map(Scalar::as_f64)
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    } else {
        0.0
    };
    let negligible = |s: &Scalar| match s {
        Scalar::Float(x) => x.abs() <= 1e-12 * scale.max(1e-300),
        other => other.is_zero(),
    };

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let pick = if float {
            (row..m)
                .max_by(|&i, &j| {
                    let x = aug[i][col].as_f64().unwrap_or(0.0).abs();
                    let y = aug[j][col].as_f64().unwrap_or(0.0).abs();
                    x.total_cmp(&y)
                })
                .filter(|&i| !negligible(&aug[i][col]))
        } else {
            (row..m).find(|&i| !aug[i][col].is_zero())
        };
        let Some(p) = pick else { continue };
        aug.swap(row, p);
        let inv = aug[row][col].recip()?;
        for k in col..n + r {
            aug[row][k] = aug[row][k].mul(&inv)?;
        }
        for i in 0..m {
            if i == row || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for k in col..n + r {
                let t = f.mul(&aug[row][k])?;
                aug[i][k] = aug[i][k].sub(&t)?;
            }
        }
        pivots.push(col);
        row += 1;
    }
    for i in row..m {
        if (n..n + r).any(|k| !negligible(&aug[i][k])) {
            return Ok(Solution::Inconsistent);
        }
    }
    if pivots.len() < n {
        return Ok(Solution::Underdetermined);
    }
    Ok(Solution::Unique(
        (0..r)
            .map(|c| (0..n).map(|i| aug[i][n + c].clone()).collect())
            .collect(),
    ))
}

pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    solve_columns(a, &[b.to_vec()])
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &Matrix) -> Result<Option<Matrix>> {
    let n = a.len();
    let zero = a
        .first()
        .and_then(|r| r.first())
        .map(Scalar::zero_like)
        .unwrap_or_else(Scalar::zero);
    let ident: Vec<Vec<Scalar>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|i| if i == c { zero.one_like() } else { zero.clone() })
                .collect()
        })
        .collect();
    match solve_columns(a, &ident)? {
        Solution::Unique(cols) => Ok(Some(
            (0..n)
                .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
                .collect(),
        )),
        _ => Ok(None),
    }
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// remaining columns. Division-free, so it stays polynomial for polynomial
/// entries. Intended for `n <= 12`.
pub fn determinant(a: &Matrix) -> Result<Scalar> {
    let n = a.len();
    let mut memo: HashMap<u32, Scalar> = HashMap::new();
    fn rec(a: &Matrix, row: usize, cols: u32, memo: &mut HashMap<u32, Scalar>) -> Result<Scalar> {
        let n = a.len();
        if row == n {
            return Ok(Scalar::one());
        }
        if let Some(v) = memo.get(&cols) {
            return Ok(v.clone());
        }
        let mut acc = Scalar::zero();
        let mut sign = false;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !a[row][c].is_zero() {
                let minor = rec(a, row + 1, cols & !(1 << c), memo)?;
                let t = a[row][c].mul(&minor)?;
                acc = if sign { acc.sub(&t)? } else { acc.add(&t)? };
            }
            sign = !sign;
        }
        memo.insert(cols, acc.clone());
        Ok(acc)
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    rec(a, 0, (1u32 << n) - 1, &mut memo)
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = a[i][0].zero_like();
            for t in 0..k {
                acc = acc.add(&a[i][t].mul(&b[t][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}
