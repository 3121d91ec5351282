//! One-variable building blocks: integrals of `e^{+-z^n} z^k` along decay rays.

use std::f64::consts::PI;

use crate::numeric::{cis, gamma, C64};

/// Sign of the exponent: `Minus` integrates `e^{-z^n}` (decay rays at angles
/// `2 pi j / n`), `Plus` integrates `e^{+z^n}` (rays at `(2j+1) pi / n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpSign {
    Minus,
    Plus,
}

pub fn ray_angle(n: u32, j: i64, sign: ExpSign) -> f64 {
    match sign {
        ExpSign::Minus => 2.0 * PI * j as f64 / n as f64,
        ExpSign::Plus => (2 * j + 1) as f64 * PI / n as f64,
    }
}

/// `int_0^{infinity e^{i theta_j}} e^{-+z^n} z^k dz = e^{i theta_j (k+1)} Gamma((k+1)/n) / n`.
pub fn gamma_ray_integral(n: u32, k: u32, j: i64, sign: ExpSign) -> C64 {
    let theta = ray_angle(n, j, sign);
    cis(theta * (k + 1) as f64) * (gamma((k + 1) as f64 / n as f64) / n as f64)
}

/// Phase-only part of the ray integral: `e^{i theta_j (k+1)}`.
pub fn ray_phase(n: u32, k: u32, j: i64, sign: ExpSign) -> C64 {
    cis(ray_angle(n, j, sign) * (k + 1) as f64)
}
