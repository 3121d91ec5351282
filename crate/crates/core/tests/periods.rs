use std::f64::consts::PI;

use lgcy_core::gaussmanin::picard_fuchs;
use lgcy_core::jacobi::{compute_basis, LGPotential};
use lgcy_core::numeric::{det_complex, C64};
use lgcy_core::periods::ode::{circle_loop, loop_transport, monodromy_in_basis};
use lgcy_core::periods::quadrature::integrate;
use lgcy_core::periods::thimble::monodromy_matrix;
use lgcy_core::periods::*;
use lgcy_core::ring::parse::parse_with_default_vars;
use lgcy_core::ring::{Field, Gq, Monomial, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hesse() -> LGPotential {
    LGPotential::hesse(Gq::zero())
}

fn close(a: C64, b: C64, rel: f64) -> bool {
    (a - b).norm() <= rel * b.norm().max(1e-300)
}

#[test]
fn gamma_values() {
    let v = gamma_ray_integral(3, 0, 0, ExpSign::Minus);
    assert!((v.re - 0.8929795115692492).abs() < 1e-14 && v.im.abs() < 1e-15);
    let v = gamma_ray_integral(3, 2, 0, ExpSign::Minus);
    assert!((v - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    for j in 1..6 {
        for k in 0..5 {
            let r = gamma_ray_integral(3, k, j, ExpSign::Minus) / gamma_ray_integral(3, k, 0, ExpSign::Minus);
            let w = C64::from_polar(1.0, 2.0 * PI * (j * (k as i64 + 1)) as f64 / 3.0);
            assert!((r.norm() - 1.0).abs() < 1e-14);
            assert!((r - w).norm() < 1e-13);
        }
    }
}

#[test]
fn gamma_matches_adaptive_quadrature() {
    for (n, k, j, sign) in [(3, 0, 0, ExpSign::Minus), (3, 1, 2, ExpSign::Plus), (5, 3, 1, ExpSign::Minus), (4, 2, 3, ExpSign::Plus)] {
        let e = C64::from_polar(1.0, gamma::ray_angle(n, j, sign));
        let s = if sign == ExpSign::Minus { -1.0 } else { 1.0 };
        let q = integrate(&mut |t| ((e * t).powu(n) * s).exp() * (e * t).powu(k) * e, 0.0, 12.0, 1e-15).unwrap();
        let g = gamma_ray_integral(n, k, j, sign);
        assert!(close(q, g, 1e-12), "{n} {k} {j}: {q} vs {g}");
    }
}

#[test]
fn fermat_point_entries() {
    let p = LGPotential::fermat(3, 3);
    let b = compute_basis(&p).unwrap();
    let pm = fermat_periods(&p, &b).unwrap();
    let g13 = lgcy_core::numeric::gamma(1.0 / 3.0);
    let g23 = lgcy_core::numeric::gamma(2.0 / 3.0);
    let a1 = b.index_of(&Monomial(vec![1, 1, 1])).unwrap();
    for row in pm.minus.iter().chain(&pm.plus) {
        // |c_j| = |e^{i theta'} - e^{i theta}| = sqrt 3 for every 1-D cycle.
        let r0 = row[0].norm() / (g13.powi(3) / 27.0);
        let r1 = row[a1].norm() / (g23.powi(3) / 27.0);
        assert!((r0 - 3f64.powf(1.5)).abs() < 1e-12 && (r1 - 3f64.powf(1.5)).abs() < 1e-12);
    }
    // Non-diagonal potential at u = 0 is rejected.
    let f = parse_with_default_vars("z1^3+z2^3+z3^3+z1*z2*z3", 3).unwrap();
    assert!(fermat_periods(&LGPotential::undeformed(f).unwrap(), &b).is_err());
}

#[test]
fn noninvariant_vanishing_and_charge_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for exps in [vec![3u32, 3, 3], vec![4, 4], vec![3, 3], vec![5, 5, 5], vec![4, 4, 4, 4]] {
        let n = exps.len();
        let p = LGPotential::fermat(n, exps[0]);
        let ad = adapted_basis(&exps);
        let g = monodromy_matrix(&exps);
        let labels = product_labels(&exps);
        let s = FermatSeries::new(exps.clone(), vec![0; n]).unwrap();
        let d = exps[0] as u64;
        // Random monomials; charges decide the expected behaviour.
        for _ in 0..20 {
            let beta: Vec<u32> = (0..n).map(|i| rng.gen_range(0..exps[i] - 1)).collect();
            let l: u64 = beta.iter().map(|&b| b as u64 + 1).sum();
            for side in [Side::Minus, Side::Plus] {
                let col: Vec<C64> = labels.iter().map(|lab| s.base_integral(lab, &beta, side)).collect();
                let scale = lgcy_core::numeric::norm(&col);
                let w = C64::from_polar(1.0, 2.0 * PI * l as f64 / d as f64);
                for k in 0..labels.len() {
                    let rotated: C64 = (0..labels.len()).map(|i| col[i] * g[i][k] as f64).sum();
                    assert!((rotated - w * col[k]).norm() < 1e-12 * scale);
                }
                if l % d == 0 {
                    for row in ad.non_invariant() {
                        let v: C64 = row.iter().zip(&col).map(|(&c, x)| x * c as f64).sum();
                        assert!(v.norm() < 1e-10 * scale, "{exps:?} {beta:?}: {v}");
                    }
                }
            }
        }
        let _ = p;
    }
}

#[test]
fn adapted_basis_shapes() {
    let ad = adapted_basis(&[3, 3, 3]);
    assert_eq!(ad.rows.len(), 8);
    assert_eq!(ad.mu_prime, 2);
    assert!(ad.index.unwrap() > 0);
    // Invariant count equals the number of Jac' monomials.
    let ad = adapted_basis(&[4, 4, 4, 4]);
    assert_eq!(ad.rows.len(), 81);
    let b = compute_basis(&LGPotential::fermat(4, 4)).unwrap();
    assert_eq!(ad.mu_prime, b.mu_prime);
}

#[test]
fn series_at_zero_is_closed_form() {
    let p = hesse();
    let b = compute_basis(&p).unwrap();
    let f = fermat_periods(&LGPotential::fermat(3, 3), &b).unwrap();
    let s = series_periods(&p, &b, C64::new(0.0, 0.0), 1e-14).unwrap();
    assert_eq!(f.minus, s.minus);
    assert_eq!(f.plus, s.plus);
}

#[test]
fn series_radius() {
    let p = hesse();
    let b = compute_basis(&p).unwrap();
    let e = series_periods(&p, &b, C64::new(3.1, 0.0), 1e-12).unwrap_err();
    assert!(matches!(e, PeriodError::Series(SeriesError::OutsideRadius { .. })));
    assert!(series_periods(&p, &b, C64::new(2.7, 0.5), 1e-12).is_ok());
}

fn invariant_jets(p: &LGPotential, u: C64) -> Vec<Vec<C64>> {
    let ad = adapted_basis(&[3, 3, 3]);
    let labels = product_labels(&[3, 3, 3]);
    ad.invariant()
        .iter()
        .map(|row| {
            let mut acc = vec![C64::new(0.0, 0.0); 2];
            for (c, l) in row.iter().zip(&labels) {
                if *c != 0 {
                    let j = series_jet(p, l, Side::Minus, &[0, 0, 0], 2, u, 1e-15).unwrap();
                    acc[0] += j[0] * *c as f64;
                    acc[1] += j[1] * *c as f64;
                }
            }
            acc
        })
        .collect()
}

#[test]
fn picard_fuchs_annihilates_series_periods() {
    let p = hesse();
    let ode = picard_fuchs(&p, 0).unwrap();
    assert_eq!(ode.order, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let labels = product_labels(&[3, 3, 3]);
    for _ in 0..20 {
        let u = C64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0 * PI));
        for l in &labels {
            for side in [Side::Minus, Side::Plus] {
                // The plus thimble is a rotated minus thimble, so both sides
                // solve the same equation.
                let jj = series_jet(&p, l, side, &[0, 0, 0], 3, u, 1e-15).unwrap();
                let a = ode.coefficients_at(u);
                let terms: f64 = a.iter().zip(&jj).map(|(x, y)| (x * y).norm()).sum();
                let r = ode.apply(u, &jj).norm();
                assert!(r < 1e-8 * terms, "u={u} {l:?} {side:?}: {r} / {terms}");
            }
        }
    }
}

#[test]
fn ode_matches_series() {
    let p = hesse();
    let ode = picard_fuchs(&p, 0).unwrap();
    let opts = OdeOptions { tol: 1e-13, ..Default::default() };
    let start = invariant_jets(&p, C64::new(0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut targets = vec![C64::new(1.0, 0.0)];
    for _ in 0..11 {
        targets.push(C64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.0..2.0 * PI)));
    }
    for u in targets {
        let expected = invariant_jets(&p, u);
        for (s0, e) in start.iter().zip(&expected) {
            let got = ode_continue(&ode, s0, &[C64::new(0.0, 0.0), u], &opts).unwrap();
            let got = got.last().unwrap();
            assert!(close(got[0], e[0], 1e-8), "u={u}: {} vs {}", got[0], e[0]);
            assert!(close(got[1], e[1], 1e-8));
        }
    }
}

#[test]
fn ode_path_independence_and_trivial_loop() {
    let p = hesse();
    let ode = picard_fuchs(&p, 0).unwrap();
    let opts = OdeOptions { tol: 1e-13, ..Default::default() };
    let s0 = &invariant_jets(&p, C64::new(0.0, 0.0))[0];
    let a = ode_continue(&ode, s0, &[C64::new(0.0, 0.0), C64::new(0.7, 0.8), C64::new(1.5, 0.0)], &opts).unwrap();
    let b = ode_continue(&ode, s0, &[C64::new(0.0, 0.0), C64::new(0.7, -0.8), C64::new(1.5, 0.0)], &opts).unwrap();
    assert!(close(a[2][0], b[2][0], 1e-8));
    let lp = circle_loop(C64::new(0.5, 0.5), 0.3, 12);
    let t = loop_transport(&ode, &lp, &opts).unwrap();
    for (i, row) in t.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((x - C64::new(want, 0.0)).norm() < 1e-9);
        }
    }
}

#[test]
fn conifold_monodromy_is_unimodular() {
    let p = hesse();
    let ode = picard_fuchs(&p, 0).unwrap();
    let opts = OdeOptions { tol: 1e-13, ..Default::default() };
    for k in 0..3 {
        let s = C64::from_polar(3.0, PI / 3.0 + 2.0 * PI * k as f64 / 3.0);
        let base = s * (2.0 / 3.0);
        // Bring the period jets to the loop base point first.
        let jets: Vec<Vec<C64>> = invariant_jets(&p, C64::new(0.0, 0.0))
            .iter()
            .map(|j| ode_continue(&ode, j, &[C64::new(0.0, 0.0), base], &opts).unwrap().pop().unwrap())
            .collect();
        let pmat: Vec<Vec<C64>> = (0..2).map(|i| (0..2).map(|j| jets[j][i]).collect()).collect();
        let lp: Vec<C64> = circle_loop(C64::new(0.0, 0.0), 1.0, 16).iter().map(|z| s + (base - s) * z).collect();
        let t = loop_transport(&ode, &lp, &opts).unwrap();
        let m = monodromy_in_basis(&t, &pmat).unwrap();
        let det = det_complex(&m);
        assert!((det.norm() - 1.0).abs() < 1e-6, "det {det}");
        for x in m.iter().flatten() {
            assert!((x.re - x.re.round()).abs() < 1e-6 && x.im.abs() < 1e-6, "{m:?}");
        }
        let tr = m[0][0] + m[1][1];
        assert!((tr - C64::new(2.0, 0.0)).norm() < 1e-6, "conifold monodromy is unipotent: {tr}");
    }
}

#[test]
fn ode_rejects_close_paths() {
    let ode = picard_fuchs(&hesse(), 0).unwrap();
    let s0 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let e = ode_continue(&ode, &s0, &[C64::new(0.0, 0.0), C64::new(-3.0, 0.0)], &OdeOptions::default()).unwrap_err();
    assert!(matches!(e, OdeError::TooClose { .. }));
}

#[test]
fn quadrature_one_variable() {
    let p = LGPotential::undeformed(parse_with_default_vars("z1^3", 1).unwrap()).unwrap();
    let s = FermatSeries::new(vec![3], vec![0]).unwrap();
    for side in [Side::Minus, Side::Plus] {
        for j in 0..2 {
            let t = ThimbleIndex::new(vec![j], side);
            let q = quadrature_oracle(&p, &Poly::one(1), &t, C64::new(0.0, 0.0), 1e-13).unwrap();
            assert!(close(q, s.base_integral(&[j], &[0], side), 1e-10));
        }
    }
}

#[test]
fn quadrature_product_two_variables() {
    let p = LGPotential::undeformed(parse_with_default_vars("z1^3+z2^3", 2).unwrap()).unwrap();
    let s = FermatSeries::new(vec![3, 3], vec![0, 0]).unwrap();
    let phi = parse_with_default_vars("z1*z2", 2).unwrap();
    for l in product_labels(&[3, 3]) {
        let t = ThimbleIndex::new(l.clone(), Side::Minus);
        let q = quadrature_oracle(&p, &phi, &t, C64::new(0.0, 0.0), 1e-13).unwrap();
        assert!(close(q, s.base_integral(&l, &[1, 1], Side::Minus), 1e-10));
    }
}

#[test]
fn quadrature_coupled_matches_series() {
    let f = parse_with_default_vars("z1^3+z2^3", 2).unwrap();
    let p = LGPotential::with_relevant(f, vec![Monomial(vec![1, 1])], vec![Gq::zero()]).unwrap();
    let s = FermatSeries::new(vec![3, 3], vec![1, 1]).unwrap();
    for u in [C64::new(0.2, 0.0), C64::new(-0.1, 0.15)] {
        for l in product_labels(&[3, 3]) {
            for side in [Side::Minus, Side::Plus] {
                let t = ThimbleIndex::new(l.clone(), side);
                let q = quadrature_oracle(&p, &Poly::one(2), &t, u, 1e-12).unwrap();
                let v = s.eval(&l, side, &[0, 0], u, 1e-14).unwrap().value;
                assert!(close(q, v, 1e-8), "{u} {l:?} {side:?}: {q} vs {v}");
            }
        }
    }
}

#[test]
fn quadrature_rejects_coupled_three_variables() {
    let t = ThimbleIndex::new(vec![0, 0, 0], Side::Minus);
    let e = quadrature_oracle(&hesse(), &Poly::one(3), &t, C64::new(0.1, 0.0), 1e-10).unwrap_err();
    assert!(matches!(e, QuadratureError::DimensionTooLarge(3)));
    let q = quadrature_oracle(&hesse(), &Poly::one(3), &t, C64::new(0.0, 0.0), 1e-12).unwrap();
    let s = FermatSeries::new(vec![3, 3, 3], vec![0; 3]).unwrap();
    assert!(close(q, s.base_integral(&[0, 0, 0], &[0, 0, 0], Side::Minus), 1e-10));
}

#[test]
fn cy_periods_basics() {
    let p = hesse();
    let z = cy_periods_n3(&p, C64::new(0.0, 0.0)).unwrap();
    let tau = z.tau();
    assert!((tau.norm() - 1.0).abs() < 1e-12);
    assert!((tau.im - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(cy_periods_n3(&p, C64::new(-3.0, 0.0)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let u = C64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0 * PI));
        assert!(cy_periods_n3(&p, u).unwrap().tau().im > 0.0);
    }
}

#[test]
fn cy_periods_solve_picard_fuchs() {
    let p = hesse();
    let ode = picard_fuchs(&p, 0).unwrap();
    for u in [C64::new(0.1, 0.0), C64::new(0.3, 0.0), C64::new(0.5, 0.2)] {
        // Finite differences of the tracked periods.
        let h = 1e-3;
        let f = |x: C64| cy_periods_n3(&p, x).unwrap().pi;
        let (a, b, c) = (f(u - h), f(u), f(u + h));
        for k in 0..2 {
            let d1 = (c[k] - a[k]) / (2.0 * h);
            let d2 = (c[k] - b[k] * 2.0 + a[k]) / (h * h);
            let r = ode.apply(u, &[b[k], d1, d2]);
            let coeffs = ode.coefficients_at(u);
            let scale = coeffs[2].norm() * d2.norm() + coeffs[1].norm() * d1.norm() + coeffs[0].norm() * b[k].norm();
            assert!(r.norm() < 1e-6 * scale, "{u}: {r}");
        }
    }
}

#[test]
fn hodge_star_constants() {
    assert!((hodge_star_constant(1) - C64::new(0.0, -1.0)).norm() < 1e-15);
    assert!((hodge_star_constant(2) - C64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn csv_schema() {
    let p = hesse();
    let b = compute_basis(&p).unwrap();
    let grid = circle_grid(C64::new(0.0, 0.0), 1.0, 12);
    let tables: Vec<PeriodMatrix> = grid.iter().map(|&u| series_periods(&p, &b, u, 1e-12).unwrap()).collect();
    let text = table::to_csv(&tables).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "u_re,u_im,side,thimble,basis_index,value_re,value_im,method,tol");
    assert_eq!(lines.count(), 12 * 2 * 8 * 8);
}
