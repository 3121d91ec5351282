use std::collections::BTreeMap;

use serde::Serialize;

use crate::exec::Execution;
use crate::jacobi::{Jacobi, JacobiError};
use crate::ring::{Field, Gq, Poly};

/// Sparse square matrix stored by columns: `cols[a]` maps row `b` to the
/// entry `M[b][a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<K: Field> {
    n: usize,
    cols: Vec<BTreeMap<usize, K>>,
}

impl<K: Field> SparseMatrix<K> {
    pub fn zero(n: usize) -> Self {
        Self { n, cols: vec![BTreeMap::new(); n] }
    }

    pub fn from_columns(cols: Vec<BTreeMap<usize, K>>) -> Self {
        Self { n: cols.len(), cols }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> K {
        self.cols[col].get(&row).cloned().unwrap_or_else(K::zero)
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, K> {
        &self.cols[col]
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &K)> {
        self.cols.iter().enumerate().flat_map(|(a, c)| c.iter().map(move |(b, v)| (*b, a, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cols = o
            .cols
            .iter()
            .map(|oc| {
                let mut out: BTreeMap<usize, K> = BTreeMap::new();
                for (k, v) in oc {
                    for (i, w) in &self.cols[*k] {
                        let t = w.times(v);
                        let e = out.entry(*i).or_insert_with(K::zero);
                        *e = e.plus(&t);
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        Self { n: self.n, cols }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let cols = self
            .cols
            .iter()
            .zip(&o.cols)
            .map(|(a, b)| {
                let mut out = a.clone();
                for (i, v) in b {
                    let e = out.entry(*i).or_insert_with(K::zero);
                    *e = e.minus(v);
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        Self { n: self.n, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<K>> {
        (0..self.n).map(|b| (0..self.n).map(|a| self.get(b, a)).collect()).collect()
    }

    /// Block on the given row/column indices.
    pub fn restrict(&self, idx: &[usize]) -> Vec<Vec<K>> {
        idx.iter().map(|&b| idx.iter().map(|&a| self.get(b, a)).collect()).collect()
    }
}

impl Serialize for SparseMatrix<Gq> {
    /// `{"dim": n, "entries": [[row, col, value], ...]}`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            dim: usize,
            entries: Vec<(usize, usize, &'a Gq)>,
        }
        Out { dim: self.n, entries: self.entries().collect() }.serialize(s)
    }
}

/// Multiplication operators `C_i = psi_i *` on Jac(F) in the basis.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionMatrices {
    pub c: Vec<SparseMatrix<Gq>>,
    pub prime_indices: Vec<usize>,
    pub restricted_c: Vec<Vec<Vec<Gq>>>,
}

impl ConnectionMatrices {
    pub fn commutator(&self, i: usize, j: usize) -> SparseMatrix<Gq> {
        self.c[i].mul(&self.c[j]).sub(&self.c[j].mul(&self.c[i]))
    }

    /// Entries violating `l_b = l_a + shift` for matrix `i`.
    pub fn charge_violations(&self, i: usize, charges: &[u64], shift: u64) -> usize {
        self.c[i].entries().filter(|(b, a, _)| charges[*b] != charges[*a] + shift).count()
    }
}

pub fn c_matrices(j: &Jacobi) -> Result<ConnectionMatrices, JacobiError> {
    c_matrices_with(j, Execution::default())
}

pub fn c_matrices_with(j: &Jacobi, exec: Execution) -> Result<ConnectionMatrices, JacobiError> {
    let basis = &j.basis;
    let build = |psi: &crate::ring::Monomial| -> Result<SparseMatrix<Gq>, JacobiError> {
        let cols = basis
            .monomials
            .iter()
            .map(|phi| {
                let coords = j.coordinates(&Poly::monomial(psi.mul(phi)))?;
                Ok(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            })
            .collect::<Result<Vec<_>, JacobiError>>()?;
        Ok(SparseMatrix::from_columns(cols))
    };
    let c: Vec<SparseMatrix<Gq>> =
        exec.map(&j.potential.marginals, build).into_iter().collect::<Result<_, _>>()?;
    let restricted_c = c.iter().map(|m| m.restrict(&basis.prime_indices)).collect();
    Ok(ConnectionMatrices { c, prime_indices: basis.prime_indices.clone(), restricted_c })
}
