//! Power series in `u` for `int e^{+-(f + u psi)} z^beta dz` over product
//! thimbles of a Fermat-type `f = sum z_i^{m_i}`.
//!
//! Term `m` is `(+-u)^m / m!` times a product of one-variable cycle
//! integrals of `z^{beta + m alpha}`, where `psi = z^alpha`.

use std::f64::consts::PI;

use thiserror::Error;

use super::thimble::{cycle_phase, Side};
use crate::numeric::{ln_gamma, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("|u| = {abs_u} is outside the certified radius {radius}")]
    OutsideRadius { abs_u: f64, radius: f64 },
    #[error("deformation monomial has weight {0} > 1; the series diverges")]
    Divergent(f64),
    #[error("series did not reach tolerance within {0} terms")]
    NoConvergence(usize),
    #[error("label or exponent arity mismatch")]
    Arity,
}

/// Series engine for a single deformation monomial.
#[derive(Debug, Clone)]
pub struct FermatSeries {
    exps: Vec<u32>,
    alpha: Vec<u32>,
    /// `a_nu = alpha_nu / m_nu`.
    a: Vec<f64>,
    weight: f64,
    /// `prod (m_nu/alpha_nu)^{a_nu}`; infinite when `psi = 1`.
    radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub terms: usize,
    /// Certified bound on the truncated tail.
    pub tail_bound: f64,
}

pub const MAX_TERMS: usize = 20_000;

impl FermatSeries {
    pub fn new(exps: Vec<u32>, alpha: Vec<u32>) -> Result<Self, SeriesError> {
        if exps.len() != alpha.len() {
            return Err(SeriesError::Arity);
        }
        let a: Vec<f64> = alpha.iter().zip(&exps).map(|(&al, &m)| al as f64 / m as f64).collect();
        let weight: f64 = a.iter().sum();
        if weight > 1.0 + 1e-12 || a.iter().any(|&x| x > 1.0) {
            return Err(SeriesError::Divergent(weight));
        }
        let log_inv_r: f64 = a.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
        let radius = if (weight - 1.0).abs() < 1e-12 { (-log_inv_r).exp() } else { f64::INFINITY };
        Ok(Self { exps, alpha, a, weight, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// `log` of the majorant `prod 2 Gamma((k_nu+1)/m_nu)/m_nu` of the
    /// product-cycle integral of `z^k`.
    fn log_majorant(&self, k: &[u32]) -> f64 {
        k.iter()
            .zip(&self.exps)
            .map(|(&k, &m)| (2.0f64).ln() + ln_gamma((k + 1) as f64 / m as f64) - (m as f64).ln())
            .sum()
    }

    fn phase(&self, label: &[u32], k: &[u32], side: Side) -> C64 {
        label
            .iter()
            .zip(k)
            .zip(&self.exps)
            .map(|((&j, &k), &m)| cycle_phase(m, j, k, side) * 0.5)
            .product()
    }

    /// Product-cycle integral of `z^k` at `u = 0`.
    pub fn base_integral(&self, label: &[u32], k: &[u32], side: Side) -> C64 {
        self.phase(label, k, side) * self.log_majorant(k).exp()
    }

    /// Upper bound on all term ratios from index `m` on.
    fn ratio_bound(&self, beta: &[u32], m: usize) -> f64 {
        let s_max = beta
            .iter()
            .zip(&self.alpha)
            .filter(|(_, &al)| al > 0)
            .map(|(&b, &al)| (b + 1) as f64 / al as f64)
            .fold(0.0, f64::max);
        let inv_r: f64 = self.a.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(x)).product();
        let mf = m as f64;
        let growth = ((mf + s_max) / (mf + 1.0)).max(1.0) * (mf + s_max).powf(self.weight - 1.0);
        inv_r * growth
    }

    /// `sum_m (sgn u)^m/m! int z^{beta + m alpha} e^{+-f}` with the sign set
    /// by `side`. `tol` bounds the tail relative to
    /// `max(|value|, 1e-6 * majorant sum)`.
    pub fn eval(&self, label: &[u32], side: Side, beta: &[u32], u: C64, tol: f64) -> Result<SeriesValue, SeriesError> {
        if label.len() != self.exps.len() || beta.len() != self.exps.len() {
            return Err(SeriesError::Arity);
        }
        let au = u.norm();
        if au >= self.radius {
            return Err(SeriesError::OutsideRadius { abs_u: au, radius: self.radius });
        }
        let signed_u = match side {
            Side::Minus => u,
            Side::Plus => -u,
        };
        let arg = signed_u.arg();
        let log_au = if au > 0.0 { au.ln() } else { f64::NEG_INFINITY };
        let mut sum = C64::new(0.0, 0.0);
        let mut majorant_sum = 0.0;
        let mut k: Vec<u32> = beta.to_vec();
        for m in 0..MAX_TERMS {
            let log_t = if m == 0 { 0.0 } else { m as f64 * log_au - ln_gamma(m as f64 + 1.0) } + self.log_majorant(&k);
            let t = log_t.exp();
            majorant_sum += t;
            if t > 0.0 {
                sum += self.phase(label, &k, side) * C64::from_polar(t, arg * m as f64);
            }
            if au == 0.0 {
                return Ok(SeriesValue { value: sum, terms: 1, tail_bound: 0.0 });
            }
            // Majorant of the next term and a geometric bound on the rest.
            let mut k_next = k.clone();
            for (x, &al) in k_next.iter_mut().zip(&self.alpha) {
                *x += al;
            }
            let log_next = (m + 1) as f64 * log_au - ln_gamma(m as f64 + 2.0) + self.log_majorant(&k_next);
            let rho = au * self.ratio_bound(beta, m + 1);
            if rho < 1.0 {
                let tail = log_next.exp() / (1.0 - rho);
                let scale = sum.norm().max(1e-6 * majorant_sum);
                if tail <= tol * scale {
                    return Ok(SeriesValue { value: sum, terms: m + 1, tail_bound: tail });
                }
            }
            k = k_next;
        }
        Err(SeriesError::NoConvergence(MAX_TERMS))
    }

    /// `d^r/du^r` of the period: shifts `beta` by `r alpha` and flips sign on
    /// the plus side.
    pub fn eval_derivative(
        &self,
        label: &[u32],
        side: Side,
        beta: &[u32],
        r: u32,
        u: C64,
        tol: f64,
    ) -> Result<SeriesValue, SeriesError> {
        let shifted: Vec<u32> = beta.iter().zip(&self.alpha).map(|(&b, &a)| b + r * a).collect();
        let mut v = self.eval(label, side, &shifted, u, tol)?;
        if side == Side::Plus && r % 2 == 1 {
            v.value = -v.value;
        }
        Ok(v)
    }
}

/// `exp(i pi / n)`; rotating a minus thimble by its inverse gives the plus
/// thimble with the same label.
pub fn plus_rotation(n: u32) -> C64 {
    C64::from_polar(1.0, PI / n as f64)
}
