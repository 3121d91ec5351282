//! Residual checks: period correspondence, pairing chain, and the fitted
//! LG intersection matrix.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::constants::{intersection_scale, lemma_constant, pairing_scale, Conventions};
use super::{bilinear, intersection_with_orientation, TtError};
use crate::jacobi::{compute_basis, JacobiBasis, LGPotential};
use crate::numeric::{c, C64};
use crate::periods::{
    adapted_basis, cy_periods_with_derivative, hodge_star_constant, series_columns, AdaptedBasis, PeriodMatrix, Side,
};
use crate::residue::{pole_order, ResidueFunctional};
use crate::ring::{Gq, Monomial, Poly};
use crate::Execution;

/// Shared data for the cubic curve family.
#[derive(Debug, Clone)]
pub struct CubicSetup {
    pub potential: LGPotential,
    pub basis: JacobiBasis,
    pub adapted: AdaptedBasis,
    /// Jac' indices, vacuum first.
    pub prime: Vec<usize>,
    pub pole_orders: Vec<u64>,
    pub charges: Vec<u64>,
    pub eps: C64,
    pub tol: f64,
}

impl CubicSetup {
    pub fn new(p: &LGPotential, tol: f64) -> Result<Self, TtError> {
        let exps = p.fermat_exponents().ok_or(TtError::Unsupported)?;
        if exps != [3, 3, 3] || p.s() != 1 || p.marginals[0] != Monomial(vec![1, 1, 1]) {
            return Err(TtError::Unsupported);
        }
        let base = p.with_u(vec![Gq::from_int(0)])?;
        let basis = compute_basis(&base)?;
        let prime = basis.prime_indices.clone();
        let pole_orders = prime
            .iter()
            .map(|&a| pole_order(&Poly::monomial(basis.monomials[a].clone()), 3))
            .collect::<Result<Vec<_>, _>>()?;
        let charges = prime.iter().map(|&a| basis.charges[a]).collect();
        Ok(Self {
            potential: base,
            adapted: adapted_basis(&exps),
            basis,
            prime,
            pole_orders,
            charges,
            eps: hodge_star_constant(3),
            tol,
        })
    }

    fn betas(&self) -> Vec<Vec<u32>> {
        self.prime.iter().map(|&a| self.basis.monomials[a].0.clone()).collect()
    }

    /// Series periods of the Jac' columns.
    pub fn lg_periods(&self, u: C64) -> Result<PeriodMatrix, TtError> {
        Ok(series_columns(&self.potential, &self.betas(), u, self.tol)?)
    }

    /// CY periods of `R(phi_a)` for the Jac' columns: `R(psi^k)` has periods
    /// `(-1)^k / k! d^k Pi / du^k`, and only `k <= 1` is needed here.
    pub fn cy_periods(&self, u: C64) -> Result<Vec<[C64; 2]>, TtError> {
        let (pi, d) = cy_periods_with_derivative(&self.potential, u)?;
        self.pole_orders
            .iter()
            .map(|&k| match k {
                1 => Ok(pi.pi),
                2 => Ok([-d[0], -d[1]]),
                _ => Err(TtError::Unsupported),
            })
            .collect()
    }

    /// `eta^{-l}` with `eta = e^{i pi / 3}`: the plus-side thimble of a label
    /// is the minus-side one rotated by `eta^{-1}`.
    pub fn plus_phase(&self, idx: usize) -> C64 {
        C64::from_polar(1.0, -std::f64::consts::PI * self.charges[idx] as f64 / 3.0)
    }
}

fn apply_rows(rows: &[Vec<i64>], col: &[C64]) -> Vec<C64> {
    rows.iter().map(|r| r.iter().zip(col).map(|(&x, v)| v * x as f64).sum()).collect()
}

fn rel_norm(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

#[derive(Debug, Clone, Serialize)]
pub struct RuanReport {
    pub reference_u: C64,
    /// `B_inv = C_a N Pi_a` on the invariant thimbles.
    pub n: Vec<Vec<i64>>,
    pub det: i64,
    pub rounding: f64,
    /// `(a, max relative residual over the grid)`.
    pub per_class: Vec<(usize, f64)>,
    pub max_residual: f64,
    /// Integer rows (over product thimbles) whose periods equal
    /// `C_a Pi_a` exactly: `N^{-1}` applied to the invariant rows.
    pub aligned_rows: Vec<Vec<i64>>,
    /// Largest Jac' period on the non-invariant thimbles, relative.
    pub noninvariant_max: f64,
}

pub fn verify_ruan(setup: &CubicSetup, grid: &[C64], conv: &Conventions, exec: Execution) -> Result<RuanReport, TtError> {
    let u0 = *grid.first().ok_or(TtError::EmptyGrid)?;
    let inv = setup.adapted.invariant().to_vec();
    let non = setup.adapted.non_invariant().to_vec();
    let consts: Vec<C64> = setup.pole_orders.iter().map(|&k| lemma_constant(k) * conv.lemma_scale).collect();

    let data = exec.map(grid, |&u| -> Result<(PeriodMatrix, Vec<[C64; 2]>), TtError> {
        Ok((setup.lg_periods(u)?, setup.cy_periods(u)?))
    });
    let data: Vec<_> = data.into_iter().collect::<Result<_, _>>()?;

    // Real least squares for N at the reference point, one row at a time.
    let (lg0, cy0) = &data[0];
    let r = inv.len();
    let mut n_real = vec![vec![0.0; r]; r];
    for k in 0..r {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (ci, _) in setup.prime.iter().enumerate() {
            let b = apply_rows(&inv, &lg0.column(Side::Minus, ci))[k];
            let z: Vec<C64> = cy0[ci].iter().map(|p| consts[ci] * p).collect();
            rows.push(z.iter().map(|x| x.re).collect::<Vec<_>>());
            rhs.push(b.re);
            rows.push(z.iter().map(|x| x.im).collect::<Vec<_>>());
            rhs.push(b.im);
        }
        let a = DMatrix::from_fn(rows.len(), r, |i, j| rows[i][j]);
        let b = DVector::from_vec(rhs);
        let sol = a.svd(true, true).solve(&b, 1e-14).map_err(|_| TtError::IllConditioned(f64::INFINITY))?;
        for l in 0..r {
            n_real[k][l] = sol[l];
        }
    }
    let n: Vec<Vec<i64>> = n_real.iter().map(|row| row.iter().map(|x| x.round() as i64).collect()).collect();
    let rounding = n_real
        .iter()
        .flatten()
        .map(|x| (x - x.round()).abs())
        .fold(0.0, f64::max);
    if rounding > 0.1 {
        return Err(TtError::NoIntegerBasis(rounding));
    }
    let det = crate::linalg::integer_det(&n);
    if det.abs() != 1 {
        return Err(TtError::NoIntegerBasis(rounding));
    }
    let n_inv = inverse_unimodular(&n, det);
    let aligned_rows: Vec<Vec<i64>> = n_inv
        .iter()
        .map(|row| (0..inv[0].len()).map(|t| row.iter().zip(&inv).map(|(&c, v)| c * v[t]).sum()).collect())
        .collect();

    let mut per_class = vec![0.0f64; setup.prime.len()];
    let mut noninvariant_max = 0.0f64;
    for (lg, cy) in &data {
        for ci in 0..setup.prime.len() {
            let col = lg.column(Side::Minus, ci);
            let b = apply_rows(&inv, &col);
            let model: Vec<C64> = (0..r)
                .map(|k| (0..r).map(|l| cy[ci][l] * (n[k][l] as f64)).sum::<C64>() * consts[ci])
                .collect();
            per_class[ci] = per_class[ci].max(rel_norm(&b, &model));
            let scale = crate::numeric::norm(&b);
            let nb = apply_rows(&non, &col);
            noninvariant_max = noninvariant_max.max(crate::numeric::norm(&nb) / scale);
        }
    }
    let max_residual = per_class.iter().cloned().fold(0.0, f64::max);
    Ok(RuanReport {
        reference_u: u0,
        n,
        det,
        rounding,
        per_class: setup.prime.iter().cloned().zip(per_class).collect(),
        max_residual,
        aligned_rows,
        noninvariant_max,
    })
}

fn inverse_unimodular(n: &[Vec<i64>], det: i64) -> Vec<Vec<i64>> {
    assert_eq!(n.len(), 2, "basis change is 2x2 for the curve");
    vec![vec![n[1][1] * det, -n[0][1] * det], vec![-n[1][0] * det, n[0][0] * det]]
}

/// `sum_kl B-_{ka} I'_kl eps B+_{lb}` on the aligned thimbles, for Jac'
/// positions `(i, j)`.
pub fn lg_pairing(setup: &CubicSetup, lg: &PeriodMatrix, rows: &[Vec<i64>], i_prime: &[Vec<C64>], i: usize, j: usize) -> C64 {
    let bm = apply_rows(rows, &lg.column(Side::Minus, i));
    let bp: Vec<C64> = apply_rows(rows, &lg.column(Side::Plus, j)).into_iter().map(|x| x * setup.eps).collect();
    bilinear(&bm, i_prime, &bp)
}

/// Exact route: `(2 pi)^2/2^{n-2} C_a C_b eta^{-l_b} eps <Pi_a, Pi_b>`, with
/// `<Pi_a, Pi_b> = sum Pi_a I_cy^{-1} Pi_b = -orientation * kappa c~_ab res`.
pub fn exact_pairing(setup: &CubicSetup, res: &ResidueFunctional, conv: &Conventions, i: usize, j: usize) -> Result<C64, TtError> {
    let (a, b) = (setup.prime[i], setup.prime[j]);
    let phi = Poly::monomial(setup.basis.monomials[a].clone());
    let psi = Poly::monomial(setup.basis.monomials[b].clone());
    let cup = res.cy_pairing(&phi, &psi)?.to_complex() * conv.kappa;
    let ca = lemma_constant(setup.pole_orders[i]) * conv.lemma_scale;
    let cb = lemma_constant(setup.pole_orders[j]) * conv.lemma_scale;
    Ok(ca * cb * setup.plus_phase(j) * setup.eps * (-(conv.orientation as f64)) * cup * pairing_scale(3))
}

fn residue_at(setup: &CubicSetup, u: C64) -> Result<ResidueFunctional, TtError> {
    let ue = Gq::from_complex_exact(u).ok_or(TtError::SingularGrid(u))?;
    Ok(ResidueFunctional::new(&setup.potential.with_u(vec![ue])?)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEntry {
    pub a: usize,
    pub b: usize,
    pub charge_sum: u64,
    pub allowed: bool,
    /// Largest relative residual (allowed) or absolute size (forbidden).
    pub residual: f64,
    pub sample_numeric: C64,
    pub sample_exact: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub pairs: Vec<PairEntry>,
    pub max_allowed_residual: f64,
    pub max_forbidden: f64,
    /// Cup product from the curve's own periods against `kappa c~ res`.
    pub cy_cup_residual: f64,
}

pub fn verify_pairing_chain(
    setup: &CubicSetup,
    grid: &[C64],
    conv: &Conventions,
    ruan: &RuanReport,
    exec: Execution,
) -> Result<PairingReport, TtError> {
    let idata = intersection_with_orientation(conv.orientation);
    let m = setup.prime.len();
    let per_point = exec.map(grid, |&u| -> Result<Vec<(C64, C64, f64)>, TtError> {
        let lg = setup.lg_periods(u)?;
        let res = residue_at(setup, u)?;
        let cy = setup.cy_periods(u)?;
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let num = lg_pairing(setup, &lg, &ruan.aligned_rows, &idata.i_lg_prime_inv, i, j);
                let ex = exact_pairing(setup, &res, conv, i, j)?;
                // Cup product on the curve: sum Pi_a I_cy Pi_b.
                let icy: Vec<Vec<C64>> =
                    idata.i_cy.iter().map(|r| r.iter().map(|&x| c(x as f64, 0.0)).collect()).collect();
                let cup = bilinear(&cy[i], &icy, &cy[j]);
                let phi = Poly::monomial(setup.basis.monomials[setup.prime[i]].clone());
                let psi = Poly::monomial(setup.basis.monomials[setup.prime[j]].clone());
                let cup_exact = res.cy_pairing(&phi, &psi)?.to_complex() * conv.kappa * conv.orientation as f64;
                let scale = cup_exact.norm().max(cup.norm());
                let cup_res = if scale > 0.0 { (cup - cup_exact).norm() / scale } else { 0.0 };
                out.push((num, ex, cup_res));
            }
        }
        Ok(out)
    });
    let per_point: Vec<_> = per_point.into_iter().collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    let mut max_allowed = 0.0f64;
    let mut max_forbidden = 0.0f64;
    let mut cup_res = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let charge_sum = setup.charges[i] + setup.charges[j];
            let allowed = charge_sum == 9;
            let mut residual = 0.0f64;
            for pt in &per_point {
                let (num, ex, cr) = pt[i * m + j];
                if allowed {
                    residual = residual.max((num - ex).norm() / ex.norm());
                    cup_res = cup_res.max(cr);
                } else {
                    residual = residual.max(num.norm()).max(ex.norm());
                }
            }
            if allowed {
                max_allowed = max_allowed.max(residual);
            } else {
                max_forbidden = max_forbidden.max(residual);
            }
            let (sn, se, _) = per_point[0][i * m + j];
            pairs.push(PairEntry { a: setup.prime[i], b: setup.prime[j], charge_sum, allowed, residual, sample_numeric: sn, sample_exact: se });
        }
    }
    Ok(PairingReport { pairs, max_allowed_residual: max_allowed, max_forbidden, cy_cup_residual: cup_res })
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// Fitted `I'` on the aligned thimbles.
    pub fitted: Vec<Vec<C64>>,
    /// `pi^2 / 2^{n-4} I_cy^{-1}`.
    pub expected: Vec<Vec<C64>>,
    /// Largest entry deviation relative to `pi^2 / 2^{n-4}`.
    pub max_entry_error: f64,
    /// Relative least-squares residual.
    pub residual: f64,
    /// Largest entry change when refitting on every other grid point.
    pub half_grid_change: f64,
    pub singular_values: Vec<f64>,
    pub equations: usize,
}

fn fit_once(rows: &[Vec<C64>], rhs: &[C64]) -> Result<(Vec<C64>, f64, Vec<f64>), TtError> {
    let a = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let cond = sv.iter().cloned().fold(0.0, f64::max) / sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !cond.is_finite() || cond > 1e10 {
        return Err(TtError::IllConditioned(cond));
    }
    let x = svd.solve(&b, 0.0).map_err(|_| TtError::IllConditioned(cond))?;
    let r = &a * &x - &b;
    let resid = r.norm() / b.norm().max(1e-300);
    Ok((x.iter().cloned().collect(), resid, sv))
}

/// Fits a constant `I'` from `sum B-_{ka} X_kl eps B+_{lb} = exact(a, b)`
/// over the pairs `(0,0)`, `(s,0)`, `(0,s)` at every grid point. The pair
/// `(s, s)` is left out: its product is beyond the residue-map range.
pub fn fit_intersection_lg(
    setup: &CubicSetup,
    grid: &[C64],
    conv: &Conventions,
    ruan: &RuanReport,
    exec: Execution,
) -> Result<FitReport, TtError> {
    let m = setup.prime.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| i == 0 || j == 0).collect();
    let rows_per_point = exec.map(grid, |&u| -> Result<Vec<(Vec<C64>, C64)>, TtError> {
        let lg = setup.lg_periods(u)?;
        let res = residue_at(setup, u)?;
        let mut out = Vec::new();
        for &(i, j) in &pairs {
            let bm = apply_rows(&ruan.aligned_rows, &lg.column(Side::Minus, i));
            let bp = apply_rows(&ruan.aligned_rows, &lg.column(Side::Plus, j));
            let row: Vec<C64> = bm.iter().flat_map(|x| bp.iter().map(move |y| x * y * setup.eps)).collect();
            out.push((row, exact_pairing(setup, &res, conv, i, j)?));
        }
        Ok(out)
    });
    let rows_per_point: Vec<_> = rows_per_point.into_iter().collect::<Result<_, _>>()?;
    let collect = |step: usize| -> (Vec<Vec<C64>>, Vec<C64>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for pt in rows_per_point.iter().step_by(step) {
            for (r, v) in pt {
                a.push(r.clone());
                b.push(*v);
            }
        }
        (a, b)
    };
    let (a, b) = collect(1);
    let (x, residual, singular_values) = fit_once(&a, &b)?;
    let (a2, b2) = collect(2);
    let half_grid_change = match fit_once(&a2, &b2) {
        Ok((x2, _, _)) => x.iter().zip(&x2).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max) / intersection_scale(3),
        Err(_) => f64::INFINITY,
    };
    let r = ruan.aligned_rows.len();
    let fitted: Vec<Vec<C64>> = (0..r).map(|k| x[k * r..(k + 1) * r].to_vec()).collect();
    let expected = intersection_with_orientation(conv.orientation).i_lg_prime_inv;
    let max_entry_error = fitted
        .iter()
        .flatten()
        .zip(expected.iter().flatten())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
        / intersection_scale(3);
    Ok(FitReport { fitted, expected, max_entry_error, residual, half_grid_change, singular_values, equations: b.len() })
}
