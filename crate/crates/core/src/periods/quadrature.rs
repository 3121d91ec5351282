//! Direct numerical integration over truncated decay rays. Used as an
//! independent check of the Gamma-product and series values.

use thiserror::Error;

use super::gamma::ray_angle;
use super::thimble::{Side, ThimbleIndex};
use crate::jacobi::LGPotential;
use crate::numeric::{cis, C64};
use crate::ring::Poly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("direct quadrature is limited to n <= 2 for coupled potentials (n = {0})")]
    DimensionTooLarge(usize),
    #[error("potential is not of Fermat type at u = 0")]
    NotFermat,
    #[error("thimble label has the wrong length or range")]
    BadLabel,
    #[error("direct quadrature takes one deformation parameter (s = {0})")]
    TooManyParameters(usize),
    #[error("adaptive quadrature failed to converge")]
    NoConvergence,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745193976685508,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss-Kronrod on `[a, b]` with absolute tolerance `tol`.
pub fn integrate(f: &mut dyn FnMut(f64) -> C64, a: f64, b: f64, tol: f64) -> Result<C64, QuadratureError> {
    let panels = 8;
    let mut stack: Vec<(f64, f64, f64)> = (0..panels)
        .map(|i| {
            let w = (b - a) / panels as f64;
            (a + w * i as f64, a + w * (i + 1) as f64, tol / panels as f64)
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    let mut evals = 0usize;
    while let Some((x0, x1, t)) = stack.pop() {
        let (v, err) = gk15(f, x0, x1);
        evals += 15;
        if err <= t || (x1 - x0) < 1e-10 * (b - a).abs() {
            total += v;
        } else {
            if evals > 2_000_000 {
                return Err(QuadratureError::NoConvergence);
            }
            let m = 0.5 * (x0 + x1);
            stack.push((x0, m, 0.5 * t));
            stack.push((m, x1, 0.5 * t));
        }
    }
    Ok(total)
}

/// Complex-coefficient polynomial for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct NumPoly {
    terms: Vec<(Vec<u32>, C64)>,
}

impl NumPoly {
    pub fn from_poly(p: &Poly) -> Self {
        Self { terms: p.terms().map(|(m, c)| (m.0.clone(), c.to_complex())).collect() }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(z).fold(*c, |acc, (&k, &x)| acc * x.powu(k)))
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }
}

/// Truncation radius for the ray `t e^{i theta}` of `e^{-t^m}` decay.
fn cutoff(m: u32, deg: u32, abs_u: f64) -> f64 {
    (60.0 + 3.0 * deg as f64 + 10.0 * abs_u).powf(1.0 / m as f64)
}

/// `int_{gamma} e^{+-F} phi dz` for `F = f + u psi`, evaluated by nested
/// quadrature on truncated rays. Product thimbles with a separable integrand
/// (`u = 0`) are handled in any dimension.
pub fn quadrature_oracle(
    p: &LGPotential,
    phi: &Poly,
    thimble: &ThimbleIndex,
    u: C64,
    tol: f64,
) -> Result<C64, QuadratureError> {
    let exps = p.fermat_exponents().ok_or(QuadratureError::NotFermat)?;
    let n = exps.len();
    if thimble.label.len() != n || thimble.label.iter().zip(&exps).any(|(&j, &m)| j + 1 >= m) {
        return Err(QuadratureError::BadLabel);
    }
    let sgn = match thimble.side {
        Side::Minus => 1.0,
        Side::Plus => -1.0,
    };
    let coupled = u != C64::new(0.0, 0.0) && p.s() > 0;
    if !coupled {
        return separable(&exps, phi, thimble, sgn, tol);
    }
    if n > 2 {
        return Err(QuadratureError::DimensionTooLarge(n));
    }
    if p.s() > 1 {
        return Err(QuadratureError::TooManyParameters(p.s()));
    }
    let psi: Vec<NumPoly> = p.marginals.iter().map(|m| NumPoly::from_poly(&Poly::monomial(m.clone()))).collect();
    let f_num = NumPoly::from_poly(&p.f);
    let phi_num = NumPoly::from_poly(phi);
    let integrand = |z: &[C64]| -> C64 {
        let mut v = f_num.eval(z);
        for q in &psi {
            v += u * q.eval(z);
        }
        (v * sgn).exp() * phi_num.eval(z)
    };
    let sign = thimble.side.exp_sign();
    let deg = phi_num.degree();
    // Each one-variable cycle is `ray_{j+1} - ray_j`.
    let rays = |nu: usize| -> [(f64, f64); 2] {
        let j = thimble.label[nu] as i64;
        [(ray_angle(exps[nu], j + 1, sign), 1.0), (ray_angle(exps[nu], j, sign), -1.0)]
    };
    let t_max: Vec<f64> = exps.iter().map(|&m| cutoff(m, deg, u.norm())).collect();
    let mut total = C64::new(0.0, 0.0);
    if n == 1 {
        for (th, w) in rays(0) {
            let e = cis(th);
            let v = integrate(&mut |t| integrand(&[e * t]) * e, 0.0, t_max[0], tol)?;
            total += v * w;
        }
        return Ok(total);
    }
    for (th1, w1) in rays(0) {
        for (th2, w2) in rays(1) {
            let (e1, e2) = (cis(th1), cis(th2));
            let mut failed = false;
            let mut outer = |t1: f64| -> C64 {
                let r = integrate(&mut |t2| integrand(&[e1 * t1, e2 * t2]) * e2, 0.0, t_max[1], tol * 1e-2);
                match r {
                    Ok(v) => v * e1,
                    Err(_) => {
                        failed = true;
                        C64::new(0.0, 0.0)
                    }
                }
            };
            let v = integrate(&mut outer, 0.0, t_max[0], tol)?;
            if failed {
                return Err(QuadratureError::NoConvergence);
            }
            total += v * (w1 * w2);
        }
    }
    Ok(total)
}

fn separable(exps: &[u32], phi: &Poly, thimble: &ThimbleIndex, sgn: f64, tol: f64) -> Result<C64, QuadratureError> {
    let sign = thimble.side.exp_sign();
    let mut total = C64::new(0.0, 0.0);
    for (mono, c) in phi.terms() {
        let mut prod = c.to_complex();
        for (nu, (&m, &k)) in exps.iter().zip(&mono.0).enumerate() {
            let j = thimble.label[nu] as i64;
            let t_max = cutoff(m, k, 0.0);
            let mut one = C64::new(0.0, 0.0);
            for (jj, w) in [(j + 1, 1.0), (j, -1.0)] {
                let e = cis(ray_angle(m, jj, sign));
                let v = integrate(
                    &mut |t| {
                        let z = e * t;
                        (z.powu(m) * sgn).exp() * z.powu(k) * e
                    },
                    0.0,
                    t_max,
                    tol,
                )?;
                one += v * w;
            }
            prod *= one;
        }
        total += prod;
    }
    Ok(total)
}
