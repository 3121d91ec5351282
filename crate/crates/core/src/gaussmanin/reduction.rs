//! Pole-order and twisted de Rham reductions.
//!
//! LG side: on `int e^F g dz`, a term `h d_iF` integrates by parts to
//! `-d_i h`, so every `g` reduces to a combination of basis monomials.
//!
//! CY side: `(sum h_i d_iF) Omega / F^k` equals
//! `(sum d_i h_i) Omega / ((k-1) F^{k-1})` modulo exact forms.

use thiserror::Error;

use crate::jacobi::{JacobiError, JacobiRing};
use crate::ring::{Field, Polynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("pole order must be at least 1, got {0}")]
    PoleOrder(u64),
    #[error("input is not homogeneous of degree n(k-1)")]
    Degree,
    #[error("reduction left an exact remainder at pole order 1")]
    Stuck,
}

/// Coordinates of `int e^F g dz` over the basis periods `int e^F phi_b dz`.
pub fn lg_reduce<K: Field>(ring: &JacobiRing<K>, g: &Polynomial<K>) -> Result<Vec<K>, ReductionError> {
    let mut acc = vec![K::zero(); ring.basis().len()];
    let mut cur = g.clone();
    while !cur.is_zero() {
        let div = ring.divide(&cur)?;
        for (b, m) in ring.basis().iter().enumerate() {
            let c = div.normal_form.coeff(m);
            if !c.is_zero() {
                acc[b] = acc[b].plus(&c);
            }
        }
        let mut next = Polynomial::zero(ring.nvars());
        for (i, h) in div.cofactors.iter().enumerate() {
            next = &next - &h.derivative(i);
        }
        cur = next;
    }
    Ok(acc)
}

/// Output of one Griffiths-Dwork reduction of `phi Omega / F^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GdReduction<K: Field> {
    /// Normal-form part that stays at the input pole order (nonzero iff the
    /// input is not in the Jacobian ideal).
    pub irreducible: Option<Polynomial<K>>,
    /// `(phi'_j, k'_j)` with `k'_j < k`, each `phi'_j` in normal form.
    pub reduced: Vec<(Polynomial<K>, u64)>,
    /// Cofactors of the first step: `phi - NF(phi) = sum h_i d_iF`.
    pub first_cofactors: Vec<Polynomial<K>>,
}

pub fn griffiths_dwork_reduce<K: Field>(
    ring: &JacobiRing<K>,
    phi: &Polynomial<K>,
    k: u64,
) -> Result<GdReduction<K>, ReductionError> {
    if k < 1 {
        return Err(ReductionError::PoleOrder(k));
    }
    let d = ring.d();
    if !phi.is_zero() && phi.homogeneous_degree(ring.big_q()) != Some(d * (k - 1)) {
        return Err(ReductionError::Degree);
    }
    let mut out = GdReduction { irreducible: None, reduced: vec![], first_cofactors: vec![] };
    let mut cur = phi.clone();
    let mut order = k;
    while !cur.is_zero() {
        let div = ring.divide(&cur)?;
        if order == k {
            out.first_cofactors = div.cofactors.clone();
            if !div.normal_form.is_zero() {
                out.irreducible = Some(div.normal_form.clone());
            }
        } else if !div.normal_form.is_zero() {
            out.reduced.push((div.normal_form.clone(), order));
        }
        let mut next = Polynomial::zero(ring.nvars());
        for (i, h) in div.cofactors.iter().enumerate() {
            next = &next + &h.derivative(i);
        }
        if next.is_zero() {
            break;
        }
        if order == 1 {
            return Err(ReductionError::Stuck);
        }
        cur = next.scale(&K::from_i64(order as i64 - 1).inv().unwrap());
        order -= 1;
    }
    Ok(out)
}

/// Coordinates of the class of `phi Omega / F^k` over the basis classes
/// `phi_b Omega / F^{k_b}`, where `k_b = deg(phi_b)/d + 1`.
pub fn cy_class<K: Field>(ring: &JacobiRing<K>, phi: &Polynomial<K>, k: u64) -> Result<Vec<K>, ReductionError> {
    let r = griffiths_dwork_reduce(ring, phi, k)?;
    let mut acc = vec![K::zero(); ring.basis().len()];
    let pieces = r.irreducible.iter().map(|p| p.clone()).chain(r.reduced.into_iter().map(|(p, _)| p));
    for p in pieces {
        for (b, m) in ring.basis().iter().enumerate() {
            let c = p.coeff(m);
            if !c.is_zero() {
                acc[b] = acc[b].plus(&c);
            }
        }
    }
    Ok(acc)
}
