//! Landau-Ginzburg B-model algebra and thimble period numerics, with checks of
//! the correspondence with the Calabi-Yau side on Fermat-type families.
//!
//! Layers, bottom to top: [`ring`] (exact scalars and polynomials),
//! [`jacobi`] (Jacobi rings), [`residue`] (residue pairing),
//! [`gaussmanin`] (connection and Picard-Fuchs operators), [`periods`]
//! (numeric period integrals) and [`ttstar`] (metric data and verification).

pub mod exec;
pub mod gaussmanin;
pub mod jacobi;
pub mod linalg;
pub mod numeric;
pub mod periods;
pub mod residue;
pub mod ttstar;
pub mod ring;

pub use exec::Execution;
