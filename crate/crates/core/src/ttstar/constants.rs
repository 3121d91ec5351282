//! Normalization constants linking the two sides.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numeric::C64;

/// Factor in `I' = pi^2 / 2^{n-4} I_cy^{-1}`.
pub fn intersection_scale(n: u32) -> f64 {
    PI * PI / 2f64.powi(n as i32 - 4)
}

/// Factor `(2 pi)^2 / 2^{n-2}` relating the two pairings.
pub fn pairing_scale(n: u32) -> f64 {
    4.0 * PI * PI / 2f64.powi(n as i32 - 2)
}

/// `2 pi i (-1)^{k-1} (k-1)!` for a class of pole order `k`.
pub fn lemma_constant(k: u64) -> C64 {
    let f: f64 = (1..k).map(|x| x as f64).product();
    let s = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
    C64::new(0.0, 2.0 * PI * s * f)
}

/// Conventions that the checks are run under. The defaults are the ones the
/// numerics confirm; the others exist for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conventions {
    /// Multiplier of the cup-product formula `kappa c~_ab res(phi_a phi_b)`.
    pub kappa: C64,
    /// Extra factor applied to every period-correspondence constant.
    pub lemma_scale: f64,
    /// Sign of the symplectic form on the curve.
    pub orientation: i64,
}

impl Conventions {
    /// `kappa = -2 pi i deg f`.
    pub fn standard(deg_f: u32) -> Self {
        Self { kappa: C64::new(0.0, -2.0 * PI * deg_f as f64), lemma_scale: 1.0, orientation: 1 }
    }

    /// The cup-product formula with no extra factor.
    pub fn literal() -> Self {
        Self { kappa: C64::new(1.0, 0.0), lemma_scale: 1.0, orientation: 1 }
    }
}
