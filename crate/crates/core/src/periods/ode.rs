//! Analytic continuation of Picard-Fuchs solutions by local Taylor series.

use thiserror::Error;

use crate::gaussmanin::PicardFuchsODE;
use crate::numeric::{inverse_complex, matmul, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("path passes within {distance} of the singular point {point} (margin {margin})")]
    TooClose { point: C64, distance: f64, margin: f64 },
    #[error("step size underflow near u = {0}")]
    StepUnderflow(C64),
    #[error("expected {expected} initial values, got {got}")]
    InitialArity { expected: usize, got: usize },
    #[error("path needs at least two points")]
    ShortPath,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub tol: f64,
    pub margin: f64,
    /// Fraction of the convergence radius used per step.
    pub step_fraction: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: 1e-12, margin: 1e-2, step_fraction: 0.5 }
    }
}

const MAX_ORDER_TERMS: usize = 400;
const MIN_STEP: f64 = 1e-12;

/// Coefficients `a_k(c + t)` as dense polynomials in `t`.
fn shifted(ode: &PicardFuchsODE, c: C64) -> Vec<Vec<C64>> {
    ode.coefficients
        .iter()
        .map(|p| {
            let a: Vec<C64> = p.coeffs().iter().map(|x| x.to_complex()).collect();
            // Taylor shift by repeated synthetic division.
            let mut work = a.clone();
            let mut out = Vec::with_capacity(a.len());
            for _ in 0..a.len() {
                let mut acc = C64::new(0.0, 0.0);
                let mut q = vec![C64::new(0.0, 0.0); work.len().saturating_sub(1)];
                for k in (0..work.len()).rev() {
                    acc = acc * c + work[k];
                    if k > 0 {
                        q[k - 1] = acc;
                    }
                }
                out.push(acc);
                work = q;
            }
            out
        })
        .collect()
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// One Taylor step of length `h` from `c` with state `(y, y', ..)`.
/// Returns the new state and an estimate of the truncation error.
fn taylor_step(a: &[Vec<C64>], state: &[C64], h: C64, tol: f64) -> (Vec<C64>, f64) {
    let r = a.len() - 1;
    let lead = a[r][0];
    let mut y: Vec<C64> = state.iter().enumerate().map(|(i, s)| s / falling(i, i).max(1.0)).collect();
    // y[N] is the N-th Taylor coefficient.
    let hn = h.norm();
    let scale = state.iter().map(|s| s.norm()).fold(0.0, f64::max).max(1e-300);
    let mut quiet = 0;
    let mut last_err = f64::INFINITY;
    for m in 0..MAX_ORDER_TERMS {
        let mut acc = C64::new(0.0, 0.0);
        for (k, ak) in a.iter().enumerate() {
            for (j, &c) in ak.iter().enumerate() {
                if (k == r && j == 0) || j > m {
                    continue;
                }
                let idx = m - j + k;
                if idx < y.len() {
                    acc += c * falling(idx, k) * y[idx];
                }
            }
        }
        let next = -acc / (lead * falling(m + r, r));
        y.push(next);
        let n = y.len() - 1;
        let mag = next.norm() * hn.powi(n as i32) * (n as f64).powi(r as i32);
        if mag <= tol * scale * 1e-2 {
            quiet += 1;
            if quiet >= 3 {
                last_err = mag;
                break;
            }
        } else {
            quiet = 0;
            last_err = mag;
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); r];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for n in (i..y.len()).rev() {
            acc = acc * h + y[n] * falling(n, i);
        }
        // acc currently holds sum y_n n!/(n-i)! h^{n-i} via Horner on h.
        *o = acc;
    }
    (out, last_err / scale)
}

fn check_margin(ode: &PicardFuchsODE, path: &[C64], margin: f64) -> Result<Vec<C64>, OdeError> {
    let sing = ode.singular_points();
    for w in path.windows(2) {
        for &s in &sing {
            let d = segment_distance(w[0], w[1], s);
            if d < margin {
                return Err(OdeError::TooClose { point: s, distance: d, margin });
            }
        }
    }
    Ok(sing)
}

pub fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

/// Continues `(y, y', ..., y^{(r-1)})` along a polyline. Returns the state
/// at every vertex, the first being `initial`.
pub fn ode_continue(
    ode: &PicardFuchsODE,
    initial: &[C64],
    path: &[C64],
    opts: &OdeOptions,
) -> Result<Vec<Vec<C64>>, OdeError> {
    if initial.len() != ode.order {
        return Err(OdeError::InitialArity { expected: ode.order, got: initial.len() });
    }
    if path.len() < 2 {
        return Err(OdeError::ShortPath);
    }
    let sing = check_margin(ode, path, opts.margin)?;
    let mut state = initial.to_vec();
    let mut out = vec![state.clone()];
    for w in path.windows(2) {
        let (mut c, end) = (w[0], w[1]);
        while (end - c).norm() > 0.0 {
            let rho = sing.iter().map(|s| (s - c).norm()).fold(f64::INFINITY, f64::min);
            let mut hmax = (opts.step_fraction * rho).min((end - c).norm());
            loop {
                if hmax < MIN_STEP {
                    return Err(OdeError::StepUnderflow(c));
                }
                let dir = (end - c) / (end - c).norm();
                let h = dir * hmax;
                let a = shifted(ode, c);
                let (next, err) = taylor_step(&a, &state, h, opts.tol);
                if err <= opts.tol && next.iter().all(|x| x.is_finite()) {
                    state = next;
                    c = if (end - c).norm() <= hmax { end } else { c + h };
                    break;
                }
                hmax *= 0.5;
            }
        }
        out.push(state.clone());
    }
    Ok(out)
}

/// Fundamental matrix transported around a closed loop starting at
/// `path[0]`: column `j` is the continuation of the `j`-th unit vector.
pub fn loop_transport(ode: &PicardFuchsODE, path: &[C64], opts: &OdeOptions) -> Result<Vec<Vec<C64>>, OdeError> {
    let r = ode.order;
    let mut m = vec![vec![C64::new(0.0, 0.0); r]; r];
    for j in 0..r {
        let mut e = vec![C64::new(0.0, 0.0); r];
        e[j] = C64::new(1.0, 0.0);
        let states = ode_continue(ode, &e, path, opts)?;
        let last = states.last().unwrap();
        for i in 0..r {
            m[i][j] = last[i];
        }
    }
    Ok(m)
}

/// Monodromy of a period basis around a loop: `P^{-1} T P`, where the
/// columns of `p` are the states of the chosen solutions at the base point.
pub fn monodromy_in_basis(transport: &[Vec<C64>], p: &[Vec<C64>]) -> Option<Vec<Vec<C64>>> {
    let pinv = inverse_complex(p)?;
    Some(matmul(&pinv, &matmul(transport, p)))
}

/// Closed polygon with `k` vertices on the circle `|u - center| = radius`,
/// starting and ending at `center + radius`.
pub fn circle_loop(center: C64, radius: f64, k: usize) -> Vec<C64> {
    (0..=k)
        .map(|i| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * i as f64 / k as f64))
        .collect()
}
