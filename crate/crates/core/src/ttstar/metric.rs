//! Weil-Petersson metric `G = -d dbar log h` by finite differences.

use serde::Serialize;

use super::verify::CubicSetup;
use super::{intersection_with_orientation, vacuum_norm, Conventions, TtError};
use crate::numeric::C64;
use crate::periods::{cy_periods_n3, Side};
use crate::Execution;

#[derive(Debug, Clone, Serialize)]
pub struct WpSample {
    pub u: C64,
    pub norm: f64,
    /// Estimates at the two steps and the extrapolated value.
    pub g_coarse: f64,
    pub g_fine: f64,
    pub g: f64,
    /// `|g_fine - g_coarse| / |g|`.
    pub drift: f64,
}

/// `-(1/4) Laplacian` of `log h`, nine-point stencil.
fn stencil(h: &dyn Fn(C64) -> Result<f64, TtError>, u: C64, step: f64) -> Result<f64, TtError> {
    let mut edge = 0.0;
    let mut corner = 0.0;
    for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        edge += h(u + C64::new(dx * step, dy * step))?.ln();
    }
    for (dx, dy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        corner += h(u + C64::new(dx * step, dy * step))?.ln();
    }
    let lap = (4.0 * edge + corner - 20.0 * h(u)?.ln()) / (6.0 * step * step);
    Ok(-lap / 4.0)
}

fn sample(h: &dyn Fn(C64) -> Result<f64, TtError>, u: C64, steps: (f64, f64)) -> Result<WpSample, TtError> {
    let g1 = stencil(h, u, steps.0)?;
    let g2 = stencil(h, u, steps.1)?;
    let r = (steps.0 / steps.1).powi(2);
    let g = (r * g2 - g1) / (r - 1.0);
    Ok(WpSample { u, norm: h(u)?, g_coarse: g1, g_fine: g2, g, drift: (g2 - g1).abs() / g.abs() })
}

/// LG side: `h00` from series periods on the aligned thimbles.
pub fn lg_vacuum_norm(setup: &CubicSetup, rows: &[Vec<i64>], conv: &Conventions, u: C64) -> Result<f64, TtError> {
    let lg = crate::periods::series_columns(&setup.potential, &[vec![0, 0, 0]], u, setup.tol)?;
    let pick = |side| -> Vec<C64> {
        let col = lg.column(side, 0);
        rows.iter().map(|r| r.iter().zip(&col).map(|(&x, v)| v * x as f64).sum()).collect()
    };
    let ip = intersection_with_orientation(conv.orientation).i_lg_prime_inv;
    vacuum_norm(&pick(Side::Minus), &pick(Side::Plus), &ip, setup.eps)
}

/// CY side: `i int Omega ^ conj(Omega) = 2 Im(Pi_1 conj(Pi_0))`.
pub fn cy_hodge_norm(setup: &CubicSetup, u: C64) -> Result<f64, TtError> {
    let p = cy_periods_n3(&setup.potential, u)?;
    Ok(2.0 * (p.pi[1] * p.pi[0].conj()).im)
}

pub fn wp_metric_lg(
    setup: &CubicSetup,
    rows: &[Vec<i64>],
    conv: &Conventions,
    grid: &[C64],
    steps: (f64, f64),
    exec: Execution,
) -> Result<Vec<WpSample>, TtError> {
    let h = |u: C64| lg_vacuum_norm(setup, rows, conv, u);
    exec.map(grid, |&u| sample(&h, u, steps)).into_iter().collect()
}

pub fn wp_metric_cy(setup: &CubicSetup, grid: &[C64], steps: (f64, f64), exec: Execution) -> Result<Vec<WpSample>, TtError> {
    let h = |u: C64| cy_hodge_norm(setup, u);
    exec.map(grid, |&u| sample(&h, u, steps)).into_iter().collect()
}

/// `count x count` square grid of half-width `half` around `center`, row by
/// row; the interior points are those not on the boundary.
pub fn square_grid(center: C64, half: f64, count: usize) -> Vec<(C64, bool)> {
    let mut out = Vec::with_capacity(count * count);
    for iy in 0..count {
        for ix in 0..count {
            let t = |i: usize| if count == 1 { 0.0 } else { -half + 2.0 * half * i as f64 / (count - 1) as f64 };
            let interior = ix > 0 && iy > 0 && ix + 1 < count && iy + 1 < count;
            out.push((center + C64::new(t(ix), t(iy)), interior));
        }
    }
    out
}
