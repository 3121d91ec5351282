//! Picard-Fuchs operators for one-parameter marginal families by the
//! cyclic-vector method over Q(i)(u).

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use super::reduction::{cy_class, lg_reduce, ReductionError};
use crate::jacobi::{basis_monomials, JacobiError, JacobiRing, LGPotential};
use crate::linalg::{solve_unique, SolveError};
use crate::ring::{Field, Gq, Polynomial, RatFunc, UPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PicardFuchsError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("basis index {0} out of range")]
    BadIndex(usize),
    #[error("no linear dependence found up to order {0}")]
    NoDependence(usize),
    #[error("the CY-side derivation needs a homogeneous potential")]
    NotHomogeneous,
}

/// `sum_k a_k(u) (d/du)^k y = 0` with polynomial coefficients, `a_r` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardFuchsODE {
    pub direction: usize,
    pub target: usize,
    pub order: usize,
    pub coefficients: Vec<UPoly>,
}

impl PicardFuchsODE {
    pub fn leading(&self) -> &UPoly {
        &self.coefficients[self.order]
    }

    /// Finite singular points: roots of the leading coefficient.
    pub fn singular_points(&self) -> Vec<Complex64> {
        self.leading().roots()
    }

    pub fn coefficients_at(&self, u: Complex64) -> Vec<Complex64> {
        self.coefficients.iter().map(|p| p.eval_c(u)).collect()
    }

    /// `L y` given `derivs = [y, y', ..., y^(r)]`.
    pub fn apply(&self, u: Complex64, derivs: &[Complex64]) -> Complex64 {
        self.coefficients_at(u).iter().zip(derivs).map(|(a, y)| a * y).sum()
    }

    /// True if every coefficient is quasi-homogeneous under `u -> zeta u` for
    /// a primitive `m`-th root of unity, i.e. `a_k(zeta u) = lambda zeta^k a_k(u)`
    /// for one common `lambda`: the exponents `j` of `u^j` in `a_k` satisfy
    /// `j - k = const (mod m)`.
    pub fn is_covariant(&self, m: usize) -> bool {
        let mut class: Option<i64> = None;
        for (k, a) in self.coefficients.iter().enumerate() {
            for (j, c) in a.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let r = (j as i64 - k as i64).rem_euclid(m as i64);
                match class {
                    None => class = Some(r),
                    Some(x) if x != r => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Same operator up to an overall nonzero scalar.
    pub fn proportional_to(&self, o: &PicardFuchsODE) -> bool {
        if self.order != o.order {
            return false;
        }
        let lead_a = self.leading().lead();
        let lead_b = o.leading().lead();
        self.coefficients
            .iter()
            .zip(&o.coefficients)
            .all(|(a, b)| a.scale(&lead_b) == b.scale(&lead_a))
    }
}

impl Serialize for PicardFuchsODE {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Point {
            re: f64,
            im: f64,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            order: usize,
            direction: usize,
            target: usize,
            coefficients: &'a [UPoly],
            coefficients_text: Vec<String>,
            leading: String,
            singular_points: Vec<Point>,
            singular_at_infinity: bool,
        }
        Out {
            order: self.order,
            direction: self.direction,
            target: self.target,
            coefficients: &self.coefficients,
            coefficients_text: self.coefficients.iter().map(|p| p.to_string()).collect(),
            leading: self.leading().to_string(),
            singular_points: self.singular_points().into_iter().map(|z| Point { re: z.re, im: z.im }).collect(),
            singular_at_infinity: true,
        }
        .serialize(s)
    }
}

fn generic_ring(p: &LGPotential) -> Result<JacobiRing<RatFunc>, PicardFuchsError> {
    let w = &p.weights;
    let basis = basis_monomials(&p.f, w)?;
    Ok(JacobiRing::with_basis(&p.deformed_generic()?, &w.big_q, w.d, basis)?)
}

/// LG-side operator for the period `int e^F phi_a dz`.
pub fn picard_fuchs(p: &LGPotential, a: usize) -> Result<PicardFuchsODE, PicardFuchsError> {
    let ring = generic_ring(p)?;
    let psi = p.marginals[0].clone();
    let step = |b: usize, ring: &JacobiRing<RatFunc>| -> Result<Vec<RatFunc>, PicardFuchsError> {
        let g = Polynomial::monomial(psi.mul(&ring.basis()[b]));
        Ok(lg_reduce(ring, &g)?)
    };
    let bound = count_prime(p, &ring);
    cyclic_vector(&ring, a, bound, step)
}

/// CY-side operator for the class of `phi_a Omega / F^{k_a}`, derived by
/// Griffiths-Dwork reduction.
pub fn picard_fuchs_cy(p: &LGPotential, a: usize) -> Result<PicardFuchsODE, PicardFuchsError> {
    if !p.is_homogeneous() {
        return Err(PicardFuchsError::NotHomogeneous);
    }
    let ring = generic_ring(p)?;
    let psi = p.marginals[0].clone();
    let d = p.weights.d;
    let step = |b: usize, ring: &JacobiRing<RatFunc>| -> Result<Vec<RatFunc>, PicardFuchsError> {
        let phi = &ring.basis()[b];
        let k = phi.weighted_degree(ring.big_q()) / d + 1;
        // d/du (phi Omega / F^k) = -k psi phi Omega / F^{k+1}
        let g = Polynomial::term(psi.mul(phi), RatFunc::from_i64(-(k as i64)));
        Ok(cy_class(ring, &g, k + 1)?)
    };
    let bound = count_prime(p, &ring);
    cyclic_vector(&ring, a, bound, step)
}

fn count_prime(p: &LGPotential, ring: &JacobiRing<RatFunc>) -> usize {
    let w = &p.weights;
    ring.basis().iter().filter(|m| w.charge(m) % w.d == 0).count()
}

fn cyclic_vector(
    ring: &JacobiRing<RatFunc>,
    a: usize,
    bound: usize,
    step: impl Fn(usize, &JacobiRing<RatFunc>) -> Result<Vec<RatFunc>, PicardFuchsError>,
) -> Result<PicardFuchsODE, PicardFuchsError> {
    let mu = ring.basis().len();
    if a >= mu {
        return Err(PicardFuchsError::BadIndex(a));
    }
    let mut columns: HashMap<usize, Vec<RatFunc>> = HashMap::new();
    let mut v = vec![RatFunc::zero(); mu];
    v[a] = RatFunc::one();
    let mut vs: Vec<Vec<RatFunc>> = vec![v];
    for r in 1..=bound.max(1) + 1 {
        let prev = vs.last().unwrap();
        let mut next: Vec<RatFunc> = prev.iter().map(RatFunc::derivative).collect();
        for (b, coef) in prev.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            if !columns.contains_key(&b) {
                columns.insert(b, step(b, ring)?);
            }
            for (c, x) in columns[&b].iter().enumerate() {
                if !x.is_zero() {
                    next[c] = next[c].plus(&coef.times(x));
                }
            }
        }
        // Solve next = sum_k lambda_k vs[k] on the rows where anything is nonzero.
        let rows: Vec<usize> = (0..mu).filter(|&c| !next[c].is_zero() || vs.iter().any(|w| !w[c].is_zero())).collect();
        let mat: Vec<Vec<RatFunc>> = rows.iter().map(|&c| vs.iter().map(|w| w[c].clone()).collect()).collect();
        let rhs: Vec<RatFunc> = rows.iter().map(|&c| next[c].clone()).collect();
        match solve_unique(&mat, &rhs) {
            Ok(lambda) => return Ok(assemble(a, r, &lambda)),
            Err(SolveError::Inconsistent) => vs.push(next),
            Err(SolveError::Underdetermined { .. }) => unreachable!("derivative vectors were independent"),
        }
    }
    Err(PicardFuchsError::NoDependence(bound + 1))
}

fn assemble(target: usize, order: usize, lambda: &[RatFunc]) -> PicardFuchsODE {
    // y^(r) - sum lambda_k y^(k) = 0, cleared of denominators.
    let mut rat: Vec<RatFunc> = lambda.iter().map(RatFunc::negate).collect();
    rat.push(RatFunc::one());
    let mut den = UPoly::constant(Gq::one());
    for x in &rat {
        let g = UPoly::gcd(&den, x.den());
        den = den.mul(&x.den().div_rem(&g).0);
    }
    let mut polys: Vec<UPoly> = rat
        .iter()
        .map(|x| x.num().mul(&den.div_rem(x.den()).0))
        .collect();
    let content = polys.iter().fold(UPoly::zero(), |g, p| if g.is_zero() { p.monic() } else { UPoly::gcd(&g, p) });
    polys = polys.iter().map(|p| p.div_rem(&content).0).collect();
    let l = polys[order].lead().inv().unwrap();
    let coefficients = polys.iter().map(|p| p.scale(&l)).collect();
    PicardFuchsODE { direction: 0, target, order, coefficients }
}
