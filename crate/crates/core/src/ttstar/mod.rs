//! Intersection data, vacuum norms, the Weil-Petersson metric from both
//! sides, and the residual checks tying LG periods to the cubic curve.

pub mod constants;
pub mod metric;
pub mod verify;

use serde::Serialize;
use thiserror::Error;

pub use constants::Conventions;
pub use metric::{wp_metric_cy, wp_metric_lg, WpSample};
pub use verify::{fit_intersection_lg, verify_pairing_chain, verify_ruan, FitReport, PairingReport, RuanReport};

use crate::jacobi::JacobiError;
use crate::numeric::C64;
use crate::periods::PeriodError;
use crate::residue::ResidueError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TtError {
    #[error(transparent)]
    Periods(#[from] PeriodError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error("only the cubic curve family (n = 3) is supported here")]
    Unsupported,
    #[error("no integer basis change within rounding tolerance (max deviation {0})")]
    NoIntegerBasis(f64),
    #[error("vacuum norm is not real positive: {0}")]
    NotPositive(C64),
    #[error("least-squares fit is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("grid point {0} is singular or outside the period engines' range")]
    SingularGrid(C64),
    #[error("empty grid")]
    EmptyGrid,
}

impl From<crate::periods::EllipticError> for TtError {
    fn from(e: crate::periods::EllipticError) -> Self {
        TtError::Periods(e.into())
    }
}

/// `I_cy` on a symplectic basis of the curve and its inverse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionData {
    pub i_cy: Vec<Vec<i64>>,
    pub i_cy_inv: Vec<Vec<i64>>,
    /// `pi^2 / 2^{n-4} * i_cy_inv`, i.e. `2 pi^2 i_cy_inv` for the curve.
    pub i_lg_prime_inv: Vec<Vec<C64>>,
}

pub fn intersection_cy_n3() -> IntersectionData {
    intersection_with_orientation(1)
}

/// `orientation = -1` flips the sign of the symplectic form.
pub fn intersection_with_orientation(orientation: i64) -> IntersectionData {
    let i_cy = vec![vec![0, orientation], vec![-orientation, 0]];
    let i_cy_inv = vec![vec![0, -orientation], vec![orientation, 0]];
    let s = constants::intersection_scale(3);
    let i_lg_prime_inv = i_cy_inv
        .iter()
        .map(|r| r.iter().map(|&x| C64::new(s * x as f64, 0.0)).collect())
        .collect();
    IntersectionData { i_cy, i_cy_inv, i_lg_prime_inv }
}

/// `sum_kl x_k m_kl y_l`.
pub fn bilinear(x: &[C64], m: &[Vec<C64>], y: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (k, xk) in x.iter().enumerate() {
        for (l, yl) in y.iter().enumerate() {
            acc += xk * m[k][l] * yl;
        }
    }
    acc
}

/// `h(w_0, w_0) = sum B-_k I'_kl conj(eps B+_l)`.
pub fn vacuum_norm(minus: &[C64], plus: &[C64], i_prime: &[Vec<C64>], eps: C64) -> Result<f64, TtError> {
    let conj: Vec<C64> = plus.iter().map(|b| (eps * b).conj()).collect();
    let h = bilinear(minus, i_prime, &conj);
    if h.re <= 0.0 || h.im.abs() > 1e-8 * h.re.abs() {
        return Err(TtError::NotPositive(h));
    }
    Ok(h.re)
}

/// Per-point summary.
#[derive(Debug, Clone, Serialize)]
pub struct TTFrame {
    pub u: C64,
    pub h00: f64,
    pub eta_prime: Vec<Vec<C64>>,
    #[serde(rename = "G_wp")]
    pub g_wp: Vec<Vec<f64>>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Residuals {
    pub ruan: Option<f64>,
    pub pairing_chain: Option<f64>,
    pub intersection_fit: Option<f64>,
    pub wp_equality: Option<f64>,
}
