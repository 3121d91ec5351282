//! Jacobi ring of a quasi-homogeneous potential and its marginal deformation:
//! normal forms, the ordered monomial basis, U(1) charges, the sub-basis
//! `Jac'` and socle data.
//!
//! The basis is fixed once from the undeformed `f` (standard monomials with
//! the largest graded-lex monomial as pivot) and reused at every `u`; at a
//! value of `u` where those monomials stop spanning the quotient the
//! deformation is degenerate and every operation reports it.

mod ring;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::ring::{
    infer_weights, poly_det, Field, Gq, Monomial, Poly, Polynomial, RatFunc, UPoly, WeightError, WeightSystem,
};

pub use ring::{socle_degree, Division, Generator, JacobiRing};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("quotient is not finite: non-isolated singularity detected in weighted degree {degree}")]
    NonIsolated { degree: u64 },
    #[error("basis monomials become dependent modulo the Jacobian ideal in weighted degree {degree} (degenerate deformation)")]
    BasisDependent { degree: u64 },
    #[error("potential is not quasi-homogeneous for the given weights")]
    NotQuasiHomogeneous,
    #[error("deformation monomial {monomial} has weight {weight}, expected 1")]
    NotMarginal { monomial: String, weight: String },
    #[error("expected {expected} deformation parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("variable count mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("Milnor number {basis} disagrees with the weight formula {formula}")]
    MilnorMismatch { basis: usize, formula: String },
    #[error("Hessian class is not a nonzero multiple of the socle")]
    BadHessian,
    #[error("operation requires a one-parameter family (s = 1), got s = {0}")]
    NotOneParameter(usize),
}

/// `F = f + sum u_i psi_i` with marginal `psi_i` and exact `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LGPotential {
    pub f: Poly,
    pub weights: WeightSystem,
    pub marginals: Vec<Monomial>,
    pub u: Vec<Gq>,
}

impl LGPotential {
    pub fn new(f: Poly, marginals: Vec<Monomial>, u: Vec<Gq>) -> Result<Self, JacobiError> {
        let weights = infer_weights(&f)?;
        for m in &marginals {
            if m.nvars() != f.nvars() {
                return Err(JacobiError::Arity { expected: f.nvars(), got: m.nvars() });
            }
            if weights.weighted_degree(m) != weights.d {
                return Err(JacobiError::NotMarginal { monomial: m.to_string(), weight: weights.weight(m).to_string() });
            }
        }
        if u.len() != marginals.len() {
            return Err(JacobiError::ParameterCount { expected: marginals.len(), got: u.len() });
        }
        Ok(Self { f, weights, marginals, u })
    }

    /// Like [`LGPotential::new`] but accepts deformations of weight below 1.
    /// Such families are not quasi-homogeneous; only the period engines
    /// accept them.
    pub fn with_relevant(f: Poly, deformations: Vec<Monomial>, u: Vec<Gq>) -> Result<Self, JacobiError> {
        let weights = infer_weights(&f)?;
        for m in &deformations {
            if m.nvars() != f.nvars() {
                return Err(JacobiError::Arity { expected: f.nvars(), got: m.nvars() });
            }
            let w = weights.weighted_degree(m);
            if w == 0 || w > weights.d {
                return Err(JacobiError::NotMarginal { monomial: m.to_string(), weight: weights.weight(m).to_string() });
            }
        }
        if u.len() != deformations.len() {
            return Err(JacobiError::ParameterCount { expected: deformations.len(), got: u.len() });
        }
        Ok(Self { f, weights, marginals: deformations, u })
    }

    /// Undeformed potential.
    pub fn undeformed(f: Poly) -> Result<Self, JacobiError> {
        Self::new(f, vec![], vec![])
    }

    /// `sum z_i^m` in `n` variables.
    pub fn fermat(n: usize, m: u32) -> Self {
        let f = Poly::from_terms(
            n,
            (0..n).map(|i| {
                let mut e = vec![0; n];
                e[i] = m;
                (Monomial(e), Gq::one())
            }),
        );
        Self::undeformed(f).expect("Fermat polynomial is quasi-homogeneous")
    }

    /// Hesse family `z1^3 + z2^3 + z3^3 + u z1 z2 z3`.
    pub fn hesse(u: Gq) -> Self {
        let f = Self::fermat(3, 3).f;
        Self::new(f, vec![Monomial(vec![1, 1, 1])], vec![u]).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn s(&self) -> usize {
        self.marginals.len()
    }

    pub fn with_u(&self, u: Vec<Gq>) -> Result<Self, JacobiError> {
        Self::new(self.f.clone(), self.marginals.clone(), u)
    }

    /// `F(z, u)` at the stored exact `u`.
    pub fn deformed(&self) -> Poly {
        let mut out = self.f.clone();
        for (m, u) in self.marginals.iter().zip(&self.u) {
            out.add_term(m.clone(), u.clone());
        }
        out
    }

    /// `F` over Q(i)(u) with `u` an indeterminate (one-parameter families).
    pub fn deformed_generic(&self) -> Result<Polynomial<RatFunc>, JacobiError> {
        if self.s() != 1 {
            return Err(JacobiError::NotOneParameter(self.s()));
        }
        let mut out = self.f.map_coeffs(RatFunc::from_gaussian);
        out.add_term(self.marginals[0].clone(), RatFunc::from_poly(UPoly::x()));
        Ok(out)
    }

    /// Exponents `m_i` if `f = sum z_i^{m_i}` with unit coefficients.
    pub fn fermat_exponents(&self) -> Option<Vec<u32>> {
        let n = self.nvars();
        if self.f.len() != n {
            return None;
        }
        let mut ex = vec![0u32; n];
        for (m, c) in self.f.terms() {
            if *c != Gq::one() {
                return None;
            }
            let nz: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
            if nz.len() != 1 || ex[nz[0]] != 0 {
                return None;
            }
            ex[nz[0]] = m.0[nz[0]];
        }
        Some(ex)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weights.is_homogeneous()
    }
}

/// Ordered basis of Jac(F) with charge data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiBasis {
    pub monomials: Vec<Monomial>,
    /// Weighted degrees `sum beta_i Q_i`.
    pub degrees: Vec<u64>,
    pub charges: Vec<u64>,
    pub mu: usize,
    pub prime_indices: Vec<usize>,
    pub mu_prime: usize,
    pub socle_index: usize,
    pub hessian_class: Vec<Gq>,
}

impl JacobiBasis {
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|x| x == m)
    }

    pub fn socle(&self) -> &Monomial {
        &self.monomials[self.socle_index]
    }

    /// Socle coefficient `c_H` of the Hessian class.
    pub fn hessian_socle_coeff(&self) -> &Gq {
        &self.hessian_class[self.socle_index]
    }
}

/// Potential together with its Jacobi ring and basis at the stored `u`.
#[derive(Debug, Clone)]
pub struct Jacobi {
    pub potential: LGPotential,
    pub ring: JacobiRing<Gq>,
    pub basis: JacobiBasis,
}

/// Basis monomials of the undeformed `f`: weight ascending, and within one
/// weight in descending graded-lex order (`z1` before `z2`).
pub fn basis_monomials(f: &Poly, w: &WeightSystem) -> Result<Vec<Monomial>, JacobiError> {
    let mut std = JacobiRing::standard_monomials(f, &w.big_q, w.d)?;
    std.sort_by(|a, b| w.weighted_degree(a).cmp(&w.weighted_degree(b)).then_with(|| b.cmp(a)));
    Ok(std)
}

impl Jacobi {
    pub fn new(p: &LGPotential) -> Result<Self, JacobiError> {
        let w = &p.weights;
        let monomials = basis_monomials(&p.f, w)?;
        let ring = JacobiRing::with_basis(&p.deformed(), &w.big_q, w.d, monomials.clone())?;
        let basis = make_basis(p, &ring, monomials)?;
        Ok(Self { potential: p.clone(), ring, basis })
    }

    pub fn normal_form(&self, g: &Poly) -> Result<Poly, JacobiError> {
        self.ring.normal_form(g)
    }

    pub fn coordinates(&self, g: &Poly) -> Result<Vec<Gq>, JacobiError> {
        self.ring.coordinates(g)
    }

    pub fn hessian(&self) -> Poly {
        hessian(&self.potential.deformed())
    }
}

fn make_basis(p: &LGPotential, ring: &JacobiRing<Gq>, monomials: Vec<Monomial>) -> Result<JacobiBasis, JacobiError> {
    let w = &p.weights;
    let degrees: Vec<u64> = monomials.iter().map(|m| w.weighted_degree(m)).collect();
    let charges: Vec<u64> = monomials.iter().map(|m| w.charge(m)).collect();
    let prime_indices: Vec<usize> = (0..monomials.len()).filter(|&a| charges[a] % w.d == 0).collect();
    let socle = ring.socle_degree();
    let top: Vec<usize> = (0..monomials.len()).filter(|&a| degrees[a] == socle).collect();
    if top.len() != 1 {
        return Err(JacobiError::BadHessian);
    }
    let socle_index = top[0];
    let hess = hessian(&p.deformed());
    let hessian_class = ring.coordinates(&hess)?;
    let supported_on_socle =
        hessian_class.iter().enumerate().all(|(a, c)| (a == socle_index) != c.is_zero());
    if !supported_on_socle {
        return Err(JacobiError::BadHessian);
    }
    Ok(JacobiBasis {
        mu: monomials.len(),
        mu_prime: prime_indices.len(),
        monomials,
        degrees,
        charges,
        prime_indices,
        socle_index,
        hessian_class,
    })
}

/// `det(d_i d_j F)`.
pub fn hessian<K: Field>(f: &Polynomial<K>) -> Polynomial<K> {
    let n = f.nvars();
    let m: Vec<Vec<Polynomial<K>>> =
        (0..n).map(|i| (0..n).map(|j| f.derivative(i).derivative(j)).collect()).collect();
    poly_det(&m)
}

pub fn normal_form(g: &Poly, p: &LGPotential) -> Result<Poly, JacobiError> {
    Jacobi::new(p)?.normal_form(g)
}

pub fn compute_basis(p: &LGPotential) -> Result<JacobiBasis, JacobiError> {
    Ok(Jacobi::new(p)?.basis)
}

/// `mu = dim Jac(F)`, cross-checked against `prod (1/q_i - 1)`.
pub fn milnor_number(p: &LGPotential) -> Result<usize, JacobiError> {
    let mu = compute_basis(p)?.mu;
    let formula = p.weights.milnor_formula();
    if formula != BigRational::from_integer(mu.into()) {
        return Err(JacobiError::MilnorMismatch { basis: mu, formula: formula.to_string() });
    }
    Ok(mu)
}

/// Weight-one basis monomials of `f`, in basis order.
pub fn marginal_monomials(f: &Poly, w: &WeightSystem) -> Result<Vec<Monomial>, JacobiError> {
    Ok(basis_monomials(f, w)?.into_iter().filter(|m| w.weighted_degree(m) == w.d).collect())
}

/// U(1) charge `sum (beta_i + 1) Q_i`.
pub fn charge(a: &Monomial, w: &WeightSystem) -> u64 {
    w.charge(a)
}

/// Largest possible charge `n(n-1)` for a homogeneous degree-`n` potential in
/// `n` variables.
pub fn max_charge_homogeneous(n: u64) -> u64 {
    n * (n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_with_default_vars;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn fermat_cubic_basis() {
        let b = compute_basis(&LGPotential::fermat(3, 3)).unwrap();
        let expect: Vec<Monomial> = [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
            [1, 1, 1],
        ]
        .iter()
        .map(|e| m(e))
        .collect();
        assert_eq!(b.monomials, expect);
        assert_eq!(b.charges, vec![3, 4, 4, 4, 5, 5, 5, 6]);
        assert_eq!(b.mu, 8);
        assert_eq!(b.prime_indices, vec![0, 7]);
        assert_eq!(b.socle_index, 7);
    }

    #[test]
    fn one_variable_quadratic() {
        let f = parse_with_default_vars("z1^2", 1).unwrap();
        let b = compute_basis(&LGPotential::undeformed(f).unwrap()).unwrap();
        assert_eq!(b.monomials, vec![m(&[0])]);
        assert_eq!(b.socle_index, 0);
    }

    #[test]
    fn hesse_square_reduces_to_zero() {
        let p = LGPotential::hesse(Gq::from_ratio(1, 7));
        let g = Poly::monomial(m(&[2, 2, 2]));
        assert!(normal_form(&g, &p).unwrap().is_zero());
    }

    #[test]
    fn hesse_degenerate_point() {
        let p = LGPotential::hesse(Gq::from_int(-3));
        assert!(compute_basis(&p).is_err());
    }

    #[test]
    fn weighted_milnor_number() {
        let f = parse_with_default_vars("z1^4 + z2^2", 2).unwrap();
        let p = LGPotential::undeformed(f).unwrap();
        assert_eq!(milnor_number(&p).unwrap(), 3);
    }

    #[test]
    fn marginals_of_small_examples() {
        let p = LGPotential::fermat(3, 3);
        assert_eq!(marginal_monomials(&p.f, &p.weights).unwrap(), vec![m(&[1, 1, 1])]);
        let p2 = LGPotential::fermat(2, 3);
        assert!(marginal_monomials(&p2.f, &p2.weights).unwrap().is_empty());
    }

    #[test]
    fn charges_of_examples() {
        let w = WeightSystem::homogeneous(3, 3);
        assert_eq!(charge(&m(&[0, 0, 0]), &w), 3);
        assert_eq!(charge(&m(&[1, 1, 1]), &w), 6);
        let w5 = WeightSystem::homogeneous(5, 5);
        assert_eq!(charge(&m(&[2, 2, 2, 2, 2]), &w5), 15);
    }

    #[test]
    fn cofactors_reproduce_difference() {
        let p = LGPotential::hesse(Gq::from_ratio(2, 5));
        let j = Jacobi::new(&p).unwrap();
        let g = parse_with_default_vars("z1^4*z2 - 3*z1*z2^2*z3^2 + z3^5", 3).unwrap();
        let div = j.ring.divide(&g).unwrap();
        let fp = p.deformed();
        let mut lhs = div.normal_form.clone();
        for (i, h) in div.cofactors.iter().enumerate() {
            lhs = &lhs + &(h * &fp.derivative(i));
        }
        assert_eq!(lhs, g);
    }
}
