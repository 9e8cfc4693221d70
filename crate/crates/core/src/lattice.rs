//! Exact integer linear algebra on small dense matrices.
//!
//! Everything here works on `i128` internally; inputs are `i64` index data
//! from desk-scale graphs, so intermediate growth stays far from overflow.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Invariant factors (the nonzero diagonal of the Smith normal form) of an
/// integer matrix given as rows. Each factor divides the next.
#[allow(clippy::needless_range_loop)]
pub fn smith_invariants(rows: &[Vec<i64>]) -> Vec<i64> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();

    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let mut pivot = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j] != 0
                    && pivot.is_none_or(|(pi, pj): (usize, usize)| {
                        a[i][j].abs() < a[pi][pj].abs()
                    })
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..ncols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold any entry not divisible by the pivot into row t
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..ncols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag
}

/// Rank over Q.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    smith_invariants(rows).len()
}

/// Whether the rows generate all of `Z^dim`.
pub fn generates_lattice(rows: &[Vec<i64>], dim: usize) -> bool {
    let inv = smith_invariants(rows);
    inv.len() == dim && inv.iter().all(|&x| x == 1)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Inverse of a square integer matrix with determinant ±1, computed by
/// unimodular row reduction. `None` when the matrix is not unimodular.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut inv: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();

    for col in 0..n {
        // Euclid on column `col` among rows col..n until one nonzero remains
        loop {
            let nonzero: Vec<usize> = (col..n).filter(|&i| a[i][col] != 0).collect();
            if nonzero.is_empty() {
                return None;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| a[i][col].abs()).unwrap();
            a.swap(col, piv);
            inv.swap(col, piv);
            let mut done = true;
            for i in col + 1..n {
                let q = a[i][col].div_euclid(a[col][col]);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[col][j];
                        inv[i][j] -= q * inv[col][j];
                    }
                }
                if a[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[col][col].abs() != 1 {
            return None;
        }
        if a[col][col] < 0 {
            for j in 0..n {
                a[col][j] = -a[col][j];
                inv[col][j] = -inv[col][j];
            }
        }
    }
    // back substitution on the unit upper-triangular system
    for col in (0..n).rev() {
        for i in 0..col {
            let q = a[i][col];
            if q != 0 {
                for j in 0..n {
                    a[i][j] -= q * a[col][j];
                    inv[i][j] -= q * inv[col][j];
                }
            }
        }
    }
    Some(
        inv.into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect(),
    )
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
