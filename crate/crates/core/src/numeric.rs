//! Floating-point helpers shared by the numeric modules.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Roots of `sum c[k] x^k` (lowest degree first).
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let mut coef: Vec<C64> = coeffs.to_vec();
    while coef.last().is_some_and(|x| x.norm() == 0.0) {
        coef.pop();
    }
    let deg = coef.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = coef[deg];
    let monic: Vec<C64> = coef.iter().map(|x| x / lead).collect();
    let eval = |x: C64| monic.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * x + a);
    let deriv = |x: C64| {
        monic.iter().enumerate().skip(1).rev().fold(C64::new(0.0, 0.0), |acc, (k, a)| acc * x + a * k as f64)
    };
    let radius = 1.0 + monic[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut z: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*zi);
            if d.norm() == 0.0 {
                break;
            }
            *zi -= eval(*zi) / d;
        }
    }
    z
}

/// Solves a square complex system by Gaussian elimination with partial
/// pivoting. Returns `None` if singular to working precision.
pub fn solve_complex(a: &[Vec<C64>], b: &[C64]) -> Option<Vec<C64>> {
    let n = a.len();
    let mut m: Vec<Vec<C64>> = a.iter().zip(b).map(|(r, &bi)| {
        let mut r = r.clone();
        r.push(bi);
        r
    }).collect();
    let scale = a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[p][col].norm() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, p);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for k in col..=n {
                let t = m[col][k];
                m[r][k] -= f * t;
            }
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Some(x)
}

pub fn inverse_complex(a: &[Vec<C64>]) -> Option<Vec<Vec<C64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let e: Vec<C64> = (0..n).map(|i| if i == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect();
        cols.push(solve_complex(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

pub fn matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn det_complex(a: &[Vec<C64>]) -> C64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let Some(p) = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())) else {
            return C64::new(0.0, 0.0);
        };
        if m[p][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for k in col..n {
                let t = m[col][k];
                m[r][k] -= f * t;
            }
        }
    }
    det
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let r = poly_roots(&[c(6.0, 0.0), c(-7.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        for t in [1.0, 2.0, -3.0] {
            assert!(r.iter().any(|z| (z - c(t, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(4.0 / 3.0) - 0.892_979_511_569_249_2).abs() < 1e-14);
        assert!((gamma(1.0 / 3.0) - 2.678_938_534_707_747_6).abs() < 1e-13);
    }

    #[test]
    fn solve_small() {
        let a = vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, 1.0), c(-1.0, 0.0)]];
        let x = vec![c(0.5, -1.0), c(2.0, 3.0)];
        let b: Vec<C64> = a.iter().map(|r| r[0] * x[0] + r[1] * x[1]).collect();
        let y = solve_complex(&a, &b).unwrap();
        assert!((y[0] - x[0]).norm() < 1e-14 && (y[1] - x[1]).norm() < 1e-14);
    }
}
