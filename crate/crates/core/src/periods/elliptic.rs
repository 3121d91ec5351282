//! Periods of the holomorphic form on the plane cubic
//! `x^3 + y^3 + z^3 + u xyz = 0`, computed without the LG side: a
//! Weierstrass model plus the arithmetic-geometric mean.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::jacobi::LGPotential;
use crate::numeric::{poly_roots, C64};
use crate::ring::{Field, Gq, Monomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("the curve is singular at u = {0}")]
    Degenerate(C64),
    #[error("potential is not of Hesse type")]
    NotHesse,
    #[error("lattice tracking lost continuity near u = {0}")]
    Tracking(C64),
}

/// `(Pi_0, Pi_1)` with `Im(Pi_1 / Pi_0) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CyPeriods {
    pub u: C64,
    pub pi: [C64; 2],
}

impl CyPeriods {
    pub fn tau(&self) -> C64 {
        self.pi[1] / self.pi[0]
    }
}

/// Coefficients `[a, b, c, e]` of the cubic `p(Z) = a Z^3 + b Z^2 + c Z + e`
/// in the Weierstrass chart `W^2 = p(Z)` of the Hesse curve.
pub fn weierstrass_cubic(u: C64) -> [C64; 4] {
    [-(1.0 + u * u * u / 27.0), -(u * u) / 12.0, -u / 18.0, C64::new(-1.0 / 108.0, 0.0)]
}

/// Exact `j`-invariant: `-u^3 (u^3 - 216)^3 / (u^3 + 27)^3`.
pub fn hesse_j_invariant(u: &Gq) -> Option<Gq> {
    let u3 = u.pow(3);
    let den = (&u3 + &Gq::from_int(27)).pow(3);
    if den.is_zero() {
        return None;
    }
    let num = -&(&u3 * &(&u3 - &Gq::from_int(216)).pow(3));
    Some(&num * &den.inv()?)
}

/// `j` of a cubic `a Z^3 + b Z^2 + c Z + e` via its invariants.
pub fn cubic_j_invariant(k: &[Gq; 4]) -> Option<Gq> {
    let [a, b, c, e] = k;
    let t = |x: i64| Gq::from_int(x);
    let disc = &(&(&(&(&t(18) * a) * b) * c) * e) - &(&(&t(4) * &b.pow(3)) * e);
    let disc = &(&disc + &(&b.pow(2) * &c.pow(2))) - &(&(&t(4) * a) * &c.pow(3));
    let disc = &disc - &(&(&t(27) * &a.pow(2)) * &e.pow(2));
    let den = &a.pow(2) * &disc;
    if den.is_zero() {
        return None;
    }
    let inv = &b.pow(2) - &(&(&t(3) * a) * c);
    Some(&(&t(256) * &inv.pow(3)) * &den.inv()?)
}

/// Exact Weierstrass coefficients at a Gaussian-rational `u`.
pub fn weierstrass_cubic_exact(u: &Gq) -> [Gq; 4] {
    let q = |n, d| Gq::from_ratio(n, d);
    [
        -&(&Gq::one() + &(&u.pow(3) * &q(1, 27))),
        -&(&u.pow(2) * &q(1, 12)),
        -&(u * &q(1, 18)),
        q(-1, 108),
    ]
}

/// `j(tau)` from Eisenstein series; `tau` should be reduced first.
pub fn j_of_tau(tau: C64) -> C64 {
    let q = (C64::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = C64::new(1.0, 0.0);
    let mut e6 = C64::new(1.0, 0.0);
    let mut qn = C64::new(1.0, 0.0);
    for n in 1..200u32 {
        qn *= q;
        if qn.norm() < 1e-30 {
            break;
        }
        let (mut s3, mut s5) = (0.0, 0.0);
        for dd in 1..=n {
            if n % dd == 0 {
                s3 += (dd as f64).powi(3);
                s5 += (dd as f64).powi(5);
            }
        }
        e4 += qn * (240.0 * s3);
        e6 -= qn * (504.0 * s5);
    }
    let e43 = e4 * e4 * e4;
    e43 * 1728.0 / (e43 - e6 * e6)
}

fn agm(mut a: C64, mut b: C64) -> C64 {
    for _ in 0..100 {
        let a1 = (a + b) * 0.5;
        let mut b1 = (a * b).sqrt();
        if (a1 - b1).norm() > (a1 + b1).norm() {
            b1 = -b1;
        }
        a = a1;
        b = b1;
        if (a - b).norm() <= 1e-16 * a.norm() {
            break;
        }
    }
    a
}

fn optimal(x: C64, y: C64) -> C64 {
    if (x - y).norm() <= (x + y).norm() {
        y
    } else {
        -y
    }
}

/// Reduces `tau = w2/w1` to the standard fundamental domain, keeping the
/// orientation of the basis.
pub fn reduce_basis(mut w1: C64, mut w2: C64) -> (C64, C64) {
    if (w2 / w1).im < 0.0 {
        w2 = -w2;
    }
    for _ in 0..1000 {
        let tau = w2 / w1;
        let k = tau.re.round();
        w2 -= w1 * k;
        let tau = w2 / w1;
        if tau.norm_sqr() < 1.0 - 1e-14 {
            let (a, b) = (w2, -w1);
            w1 = a;
            w2 = b;
        } else {
            break;
        }
    }
    (w1, w2)
}

/// A basis of the period lattice of the holomorphic form at `u`, reduced.
pub fn period_lattice(u: C64) -> Result<(C64, C64), EllipticError> {
    let k = weierstrass_cubic(u);
    if k[0].norm() < 1e-12 {
        return Err(EllipticError::Degenerate(u));
    }
    let r = poly_roots(&[k[3], k[2], k[1], k[0]]);
    let (e1, e2, e3) = (r[0], r[1], r[2]);
    let scale = r.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if (e1 - e2).norm() < 1e-9 * scale || (e1 - e3).norm() < 1e-9 * scale || (e2 - e3).norm() < 1e-9 * scale {
        return Err(EllipticError::Degenerate(u));
    }
    let a = (e1 - e3).sqrt();
    let b = optimal(a, (e1 - e2).sqrt());
    let c = (e2 - e3).sqrt();
    let ib = optimal(c, C64::new(0.0, 1.0) * b);
    let s = 2.0 / k[0].sqrt() / 6.0;
    let w1 = C64::new(PI, 0.0) / agm(a, b) * s;
    let w2 = C64::new(PI, 0.0) / agm(c, ib) * s;
    if (w2 / w1).im.abs() < 1e-10 {
        return Err(EllipticError::Degenerate(u));
    }
    Ok(reduce_basis(w1, w2))
}

/// Writes `p` in the real basis `(w1, w2)`.
fn lattice_coords(p: C64, w1: C64, w2: C64) -> (f64, f64) {
    let det = w1.re * w2.im - w2.re * w1.im;
    let x = (p.re * w2.im - w2.re * p.im) / det;
    let y = (w1.re * p.im - p.re * w1.im) / det;
    (x, y)
}

fn snap(prev: [C64; 2], w1: C64, w2: C64) -> Option<[C64; 2]> {
    let mut out = [C64::new(0.0, 0.0); 2];
    for (o, p) in out.iter_mut().zip(prev) {
        let (x, y) = lattice_coords(p, w1, w2);
        let (rx, ry) = (x.round(), y.round());
        if (x - rx).abs() > 0.2 || (y - ry).abs() > 0.2 {
            return None;
        }
        *o = w1 * rx + w2 * ry;
    }
    Some(out)
}

fn singular_distance(u: C64) -> f64 {
    (0..3)
        .map(|k| (u - C64::from_polar(3.0, PI / 3.0 + 2.0 * PI * k as f64 / 3.0)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Continues a lattice basis from `start` (with periods `pi`) along the
/// straight segment to `end`.
pub fn track(start: C64, pi: [C64; 2], end: C64) -> Result<[C64; 2], EllipticError> {
    let mut cur = start;
    let mut p = pi;
    while cur != end {
        let remaining = (end - cur).norm();
        if remaining < 1e-13 {
            break;
        }
        let mut h = (0.1 * singular_distance(cur)).min(0.05).min(remaining);
        loop {
            if h < 1e-10 {
                return Err(EllipticError::Tracking(cur));
            }
            let next = if h >= remaining * (1.0 - 1e-9) { end } else { cur + (end - cur) / (end - cur).norm() * h };
            let (w1, w2) = period_lattice(next)?;
            if let Some(q) = snap(p, w1, w2) {
                p = q;
                cur = next;
                break;
            }
            h *= 0.5;
        }
    }
    Ok(p)
}

/// Base periods at `u = 0`.
pub fn base_periods() -> [C64; 2] {
    let (w1, w2) = period_lattice(C64::new(0.0, 0.0)).expect("Fermat cubic is smooth");
    [w1, w2]
}

fn check_hesse(p: &LGPotential) -> Result<(), EllipticError> {
    let ok = p.fermat_exponents().as_deref() == Some(&[3, 3, 3][..])
        && p.marginals.len() == 1
        && p.marginals[0] == Monomial(vec![1, 1, 1]);
    if ok {
        Ok(())
    } else {
        Err(EllipticError::NotHesse)
    }
}

/// Periods of the holomorphic form, continued from `u = 0` along the
/// straight segment.
pub fn cy_periods_n3(p: &LGPotential, u: C64) -> Result<CyPeriods, EllipticError> {
    check_hesse(p)?;
    period_lattice(u)?;
    let pi = track(C64::new(0.0, 0.0), base_periods(), u)?;
    Ok(CyPeriods { u, pi })
}

/// `(Pi, dPi/du)` with the derivative from a Cauchy integral on a small
/// circle around `u`.
pub fn cy_periods_with_derivative(p: &LGPotential, u: C64) -> Result<(CyPeriods, [C64; 2]), EllipticError> {
    let base = cy_periods_n3(p, u)?;
    let r = 0.05 * singular_distance(u).min(1.0);
    let k = 32;
    let mut d = [C64::new(0.0, 0.0); 2];
    for i in 0..k {
        let e = C64::from_polar(1.0, 2.0 * PI * i as f64 / k as f64);
        let v = track(u, base.pi, u + e * r)?;
        for (dj, vj) in d.iter_mut().zip(v) {
            *dj += vj / (e * r * k as f64);
        }
    }
    Ok((base, d))
}
