//! Connection data on the marginal family: multiplication operators on
//! Jac(F), pole-order reduction, and Picard-Fuchs operators.

mod connection;
mod picard_fuchs;
mod reduction;

pub use connection::{c_matrices, c_matrices_with, ConnectionMatrices, SparseMatrix};
pub use picard_fuchs::{picard_fuchs, picard_fuchs_cy, PicardFuchsError, PicardFuchsODE};
pub use reduction::{cy_class, griffiths_dwork_reduce, lg_reduce, GdReduction, ReductionError};

use crate::jacobi::{Jacobi, JacobiError, LGPotential};
use crate::ring::{Gq, Poly};

/// Griffiths-Dwork reduction at the exact `u` stored in `p`.
pub fn griffiths_dwork_reduce_at(phi: &Poly, k: u64, p: &LGPotential) -> Result<GdReduction<Gq>, ReductionError> {
    let j = Jacobi::new(p).map_err(ReductionError::from)?;
    griffiths_dwork_reduce(&j.ring, phi, k)
}

pub fn connection(p: &LGPotential) -> Result<ConnectionMatrices, JacobiError> {
    c_matrices(&Jacobi::new(p)?)
}
