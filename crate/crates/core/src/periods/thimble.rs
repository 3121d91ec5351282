//! Thimble labels at the Fermat point and the monodromy-adapted integer basis.

use serde::Serialize;

use super::gamma::{ray_phase, ExpSign};
use crate::linalg::integer_kernel;

/// `Minus` thimbles carry `int e^{F}`, `Plus` thimbles carry `int e^{-F}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn exp_sign(self) -> ExpSign {
        match self {
            Side::Minus => ExpSign::Plus,
            Side::Plus => ExpSign::Minus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}

/// Product of one-variable relative cycles `ray_{j+1} - ray_j`, one per
/// variable, with `0 <= j_nu <= m_nu - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThimbleIndex {
    pub label: Vec<u32>,
    pub side: Side,
}

impl ThimbleIndex {
    pub fn new(label: Vec<u32>, side: Side) -> Self {
        Self { label, side }
    }

    pub fn label_string(&self) -> String {
        self.label.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("-")
    }
}

/// All labels in lexicographic order (first variable most significant).
pub fn product_labels(exps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &m in exps {
        let mut next = Vec::new();
        for l in &out {
            for j in 0..m.saturating_sub(1) {
                let mut v = l.clone();
                v.push(j);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Phase of the one-variable cycle integral: `(e_{j+1}^{k+1} - e_j^{k+1})`.
pub fn cycle_phase(m: u32, j: u32, k: u32, side: Side) -> num_complex::Complex64 {
    let s = side.exp_sign();
    ray_phase(m, k, j as i64 + 1, s) - ray_phase(m, k, j as i64, s)
}

/// Action of `z -> e^{2 pi i/m} z` on the cycles `c_0..c_{m-2}`, as an
/// integer matrix acting on coordinate columns.
pub fn rotation_matrix(m: u32) -> Vec<Vec<i64>> {
    let r = (m - 1) as usize;
    let mut g = vec![vec![0i64; r]; r];
    for j in 0..r {
        if j + 1 < r {
            g[j + 1][j] = 1;
        } else {
            for row in g.iter_mut() {
                row[j] = -1;
            }
        }
    }
    g
}

fn kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0i64; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Monodromy of the weighted rotation on the product thimble lattice.
pub fn monodromy_matrix(exps: &[u32]) -> Vec<Vec<i64>> {
    exps.iter().fold(vec![vec![1i64]], |acc, &m| kron(&acc, &rotation_matrix(m)))
}

/// Integer change of thimble basis: rows are new basis vectors written in
/// the product-thimble coordinates. The first `mu_prime` rows span the
/// invariant lattice `ker(M - 1)`; the remaining rows span `im(M - 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct AdaptedBasis {
    pub rows: Vec<Vec<i64>>,
    pub mu_prime: usize,
    /// Index of the sublattice `ker(M-1) + im(M-1)` in the full lattice;
    /// computed only for small lattices.
    pub index: Option<u64>,
}

impl AdaptedBasis {
    pub fn invariant(&self) -> &[Vec<i64>] {
        &self.rows[..self.mu_prime]
    }

    pub fn non_invariant(&self) -> &[Vec<i64>] {
        &self.rows[self.mu_prime..]
    }
}

const INDEX_LIMIT: usize = 64;

pub fn adapted_basis(exps: &[u32]) -> AdaptedBasis {
    let m = monodromy_matrix(exps);
    let mu = m.len();
    let mut a = m.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let inv = integer_kernel(&a, mu);
    let image = crate::linalg::integer_column_basis(&a);
    let mut rows = inv.clone();
    rows.extend(image);
    let index = (mu <= INDEX_LIMIT).then(|| crate::linalg::integer_det(&rows).unsigned_abs());
    AdaptedBasis { rows, mu_prime: inv.len(), index }
}
