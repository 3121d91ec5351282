//! Numerical periods: Gamma products at the Fermat point, power series in
//! `u`, Picard-Fuchs continuation, direct quadrature, and elliptic-curve
//! periods for the cubic family.

pub mod elliptic;
pub mod gamma;
pub mod hodge;
pub mod ode;
pub mod quadrature;
pub mod series;
pub mod table;
pub mod thimble;

use serde::Serialize;
use thiserror::Error;

pub use elliptic::{cy_periods_n3, cy_periods_with_derivative, CyPeriods, EllipticError};
pub use gamma::{gamma_ray_integral, ExpSign};
pub use hodge::hodge_star_constant;
pub use ode::{ode_continue, OdeError, OdeOptions};
pub use quadrature::{quadrature_oracle, QuadratureError};
pub use series::{FermatSeries, SeriesError};
pub use thimble::{adapted_basis, product_labels, AdaptedBasis, Side, ThimbleIndex};

use crate::jacobi::{JacobiBasis, LGPotential};
use crate::numeric::C64;
use crate::Execution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("potential is not of Fermat type")]
    NotFermat,
    #[error("series periods need at most one deformation monomial (s = {0})")]
    TooManyParameters(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Ode,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Ode => "ode",
            Method::Quadrature => "quadrature",
        }
    }
}

/// `minus[k][a] = int_{gamma_k^-} e^F phi_a dz` and
/// `plus[k][a] = int_{gamma_k^+} e^{-F} phi_a dz` over the product thimbles
/// in [`product_labels`] order.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodMatrix {
    pub u: C64,
    pub labels: Vec<Vec<u32>>,
    pub minus: Vec<Vec<C64>>,
    pub plus: Vec<Vec<C64>>,
    pub method: Method,
    pub tol: f64,
}

impl PeriodMatrix {
    pub fn side(&self, side: Side) -> &[Vec<C64>] {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    /// Rows re-expressed in an integer thimble basis.
    pub fn in_basis(&self, rows: &[Vec<i64>], side: Side) -> Vec<Vec<C64>> {
        let m = self.side(side);
        rows.iter()
            .map(|r| {
                (0..m[0].len())
                    .map(|a| r.iter().zip(m).map(|(&c, row)| row[a] * c as f64).sum())
                    .collect()
            })
            .collect()
    }

    /// Column `a` of the chosen side.
    pub fn column(&self, side: Side, a: usize) -> Vec<C64> {
        self.side(side).iter().map(|r| r[a]).collect()
    }
}

fn engine(p: &LGPotential) -> Result<FermatSeries, PeriodError> {
    let exps = p.fermat_exponents().ok_or(PeriodError::NotFermat)?;
    let alpha = match p.s() {
        0 => vec![0; exps.len()],
        1 => p.marginals[0].0.clone(),
        s => return Err(PeriodError::TooManyParameters(s)),
    };
    Ok(FermatSeries::new(exps, alpha)?)
}

/// Closed-form periods at `u = 0`.
pub fn fermat_periods(p: &LGPotential, b: &JacobiBasis) -> Result<PeriodMatrix, PeriodError> {
    let exps = p.fermat_exponents().ok_or(PeriodError::NotFermat)?;
    let s = FermatSeries::new(exps.clone(), vec![0; exps.len()])?;
    let labels = product_labels(&exps);
    let fill = |side| {
        labels
            .iter()
            .map(|l| b.monomials.iter().map(|m| s.base_integral(l, &m.0, side)).collect())
            .collect()
    };
    Ok(PeriodMatrix {
        u: C64::new(0.0, 0.0),
        minus: fill(Side::Minus),
        plus: fill(Side::Plus),
        labels,
        method: Method::Series,
        tol: 0.0,
    })
}

/// Series periods at a floating-point `u`.
pub fn series_periods(p: &LGPotential, b: &JacobiBasis, u: C64, tol: f64) -> Result<PeriodMatrix, PeriodError> {
    let betas: Vec<Vec<u32>> = b.monomials.iter().map(|m| m.0.clone()).collect();
    series_columns(p, &betas, u, tol)
}

/// Series periods of `z^beta` for the given exponent vectors only.
pub fn series_columns(p: &LGPotential, betas: &[Vec<u32>], u: C64, tol: f64) -> Result<PeriodMatrix, PeriodError> {
    let s = engine(p)?;
    let labels = product_labels(s.exps());
    let mut minus = Vec::with_capacity(labels.len());
    let mut plus = Vec::with_capacity(labels.len());
    for l in &labels {
        let mut rm = Vec::with_capacity(betas.len());
        let mut rp = Vec::with_capacity(betas.len());
        for beta in betas {
            rm.push(s.eval(l, Side::Minus, beta, u, tol)?.value);
            rp.push(s.eval(l, Side::Plus, beta, u, tol)?.value);
        }
        minus.push(rm);
        plus.push(rp);
    }
    Ok(PeriodMatrix { u, labels, minus, plus, method: Method::Series, tol })
}

/// Series periods on many points.
pub fn series_grid(
    p: &LGPotential,
    b: &JacobiBasis,
    grid: &[C64],
    tol: f64,
    exec: Execution,
) -> Result<Vec<PeriodMatrix>, PeriodError> {
    exec.map(grid, |&u| series_periods(p, b, u, tol)).into_iter().collect()
}

/// `(y, y', ..., y^{(r-1)})` of the period `int_{gamma} e^{+-F} z^beta` at
/// `u`, from the series.
pub fn series_jet(
    p: &LGPotential,
    label: &[u32],
    side: Side,
    beta: &[u32],
    order: usize,
    u: C64,
    tol: f64,
) -> Result<Vec<C64>, PeriodError> {
    let s = engine(p)?;
    (0..order)
        .map(|r| Ok(s.eval_derivative(label, side, beta, r as u32, u, tol)?.value))
        .collect()
}

/// Regular grid of `count` points on the circle `|u - center| = radius`
/// (one point at the center when `count == 1`).
pub fn circle_grid(center: C64, radius: f64, count: usize) -> Vec<C64> {
    if count <= 1 {
        return vec![center];
    }
    (0..count)
        .map(|k| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / count as f64))
        .collect()
}
