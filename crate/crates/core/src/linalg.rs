//! Small exact linear algebra: dense Gaussian elimination over a [`Field`]
//! and saturated integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    Underdetermined { rank: usize, unknowns: usize },
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<K: Field>(m: &mut [Vec<K>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = m[i][j].minus(&f.times(&m[r][j]));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Field>(m: &[Vec<K>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Unique solution of `a x = b`.
pub fn solve_unique<K: Field>(a: &[Vec<K>], b: &[K]) -> Result<Vec<K>, SolveError> {
    let unknowns = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<K>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&unknowns) {
        return Err(SolveError::Inconsistent);
    }
    if piv.len() < unknowns {
        return Err(SolveError::Underdetermined { rank: piv.len(), unknowns });
    }
    Ok((0..unknowns).map(|i| aug[i][unknowns].clone()).collect())
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<K: Field>(m: &[Vec<K>], cols: usize) -> Vec<Vec<K>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = a[r][f].negate();
            }
            v
        })
        .collect()
}

/// Z-basis of `{x in Z^cols : m x = 0}` via unimodular column reduction,
/// so the returned lattice is saturated.
pub fn integer_kernel(m: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let (_, u, lead) = column_reduce(m, cols);
    (lead..cols)
        .map(|c| (0..cols).map(|i| u[i][c].to_i64().expect("kernel entry overflow")).collect())
        .collect()
}

/// Z-basis of the column lattice `m Z^cols`.
pub fn integer_column_basis(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = m.first().map_or(0, |r| r.len());
    let (a, _, lead) = column_reduce(m, cols);
    (0..lead)
        .map(|c| a.iter().map(|row| row[c].to_i64().expect("image entry overflow")).collect())
        .collect()
}

/// Determinant of a square integer matrix (exact, fraction-free).
pub fn integer_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
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
    (prev * sign).to_i64().expect("determinant overflow")
}

type Reduced = (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize);

fn column_reduce(m: &[Vec<i64>], cols: usize) -> Reduced {
    let rows = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    // u tracks the column operations: a_original * u = a.
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, f: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[src] * f;
            row[dst] -= t;
        }
        for row in u.iter_mut() {
            let t = &row[src] * f;
            row[dst] -= t;
        }
    };
    let swap = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut lead = 0;
    for r in 0..rows {
        if lead == cols {
            break;
        }
        // Euclid across columns lead.. until a single nonzero remains in row r.
        loop {
            let nz: Vec<usize> = (lead..cols).filter(|&c| !a[r][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| a[r][c].abs()).unwrap();
            swap(&mut a, &mut u, lead, p);
            let mut done = true;
            for c in lead + 1..cols {
                if !a[r][c].is_zero() {
                    let q = a[r][c].div_floor(&a[r][lead]);
                    col_op(&mut a, &mut u, c, lead, &q);
                    if !a[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    (a, u, lead)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Gq;

    #[test]
    fn solve_two_by_two() {
        let a = vec![
            vec![Gq::from_int(2), Gq::from_int(1)],
            vec![Gq::from_int(0), Gq::from_int(2)],
        ];
        let b = vec![Gq::from_int(1), Gq::from_int(1)];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![Gq::from_ratio(1, 4), Gq::from_ratio(1, 2)]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 2y = 0 has kernel spanned by (1,1), not (2,2).
        let k = integer_kernel(&[vec![2, -2]], 2);
        assert_eq!(k.len(), 1);
        assert!(k[0] == vec![1, 1] || k[0] == vec![-1, -1]);
    }

    #[test]
    fn determinant() {
        assert_eq!(integer_det(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(integer_det(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), -3);
    }
}
