//! Grothendieck residue on Jac(F), its pairing, and the cup-product pairing of
//! residue forms on the hypersurface.

use thiserror::Error;

use crate::jacobi::{Jacobi, JacobiError, LGPotential};
use crate::ring::{Field, Gq, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidueError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("socle normalizer vanishes")]
    ZeroNormalizer,
    #[error("polynomial of weighted degree {degree} is not homogeneous of degree n(a-1) for n = {n}")]
    BadDegree { degree: String, n: u64 },
    #[error("cup-product pairing requires a homogeneous potential")]
    NotHomogeneous,
}

/// `res(g) = mu * c_g / c_H` where `c_g`, `c_H` are the socle coefficients of
/// the normal forms of `g` and of the Hessian.
#[derive(Debug, Clone)]
pub struct ResidueFunctional {
    pub jacobi: Jacobi,
    pub socle_normalizer: Gq,
}

impl ResidueFunctional {
    pub fn new(p: &LGPotential) -> Result<Self, ResidueError> {
        Self::from_jacobi(Jacobi::new(p)?)
    }

    pub fn from_jacobi(jacobi: Jacobi) -> Result<Self, ResidueError> {
        let c = jacobi.basis.hessian_socle_coeff().clone();
        if c.is_zero() {
            return Err(ResidueError::ZeroNormalizer);
        }
        Ok(Self { jacobi, socle_normalizer: c })
    }

    pub fn mu(&self) -> usize {
        self.jacobi.basis.mu
    }

    pub fn residue(&self, g: &Poly) -> Result<Gq, ResidueError> {
        let coords = self.jacobi.coordinates(g)?;
        let cg = &coords[self.jacobi.basis.socle_index];
        let mu = Gq::from_int(self.mu() as i64);
        Ok(&(&mu * cg) / &self.socle_normalizer)
    }

    /// Residue of a product of two basis elements.
    pub fn pair_basis(&self, a: usize, b: usize) -> Result<Gq, ResidueError> {
        let m = self.jacobi.basis.monomials[a].mul(&self.jacobi.basis.monomials[b]);
        self.residue(&Poly::monomial(m))
    }

    pub fn gram_matrix(&self) -> Result<Vec<Vec<Gq>>, ResidueError> {
        let mu = self.mu();
        (0..mu).map(|a| (0..mu).map(|b| self.pair_basis(a, b)).collect()).collect()
    }

    /// `int res(phi Omega/F^a) ^ res(psi Omega/F^b) = c~_ab res(phi psi)` on
    /// the hypersurface, with the constant as printed.
    pub fn cy_pairing(&self, phi: &Poly, psi: &Poly) -> Result<Gq, ResidueError> {
        let p = &self.jacobi.potential;
        if !p.is_homogeneous() {
            return Err(ResidueError::NotHomogeneous);
        }
        let n = p.weights.d;
        let a = pole_order(phi, n)?;
        let b = pole_order(psi, n)?;
        let res = self.residue(&(phi * psi))?;
        Ok(&c_tilde(a, b, n) * &res)
    }
}

/// `a` with `deg phi = n (a - 1)`.
pub fn pole_order(phi: &Poly, n: u64) -> Result<u64, ResidueError> {
    let q = vec![1u64; phi.nvars()];
    match phi.homogeneous_degree(&q) {
        Some(d) if d % n == 0 => Ok(d / n + 1),
        Some(d) => Err(ResidueError::BadDegree { degree: d.to_string(), n }),
        None if phi.is_zero() => Err(ResidueError::BadDegree { degree: "-inf".into(), n }),
        None => Err(ResidueError::BadDegree { degree: "mixed".into(), n }),
    }
}

fn factorial(k: u64) -> i64 {
    (1..=k as i64).product()
}

fn sign_exponent(a: u64, b: u64, n: u64) -> u64 {
    a * (a - 1) / 2 + b * (b - 1) / 2 + n + (b - 1) * (b - 1)
}

/// `c~_ab = (-1)^{a(a-1)/2 + b(b-1)/2 + n + (b-1)^2} / ((a-1)! (b-1)!)`.
pub fn c_tilde(a: u64, b: u64, n: u64) -> Gq {
    assert!(a >= 1 && b >= 1);
    let s = if sign_exponent(a, b, n) % 2 == 0 { 1 } else { -1 };
    Gq::from_ratio(s, factorial(a - 1) * factorial(b - 1))
}

/// `c_ab = c~_ab * deg f`.
pub fn c_ab(a: u64, b: u64, n: u64, deg_f: u64) -> Gq {
    &c_tilde(a, b, n) * &Gq::from_int(deg_f as i64)
}

pub fn residue_symbol(g: &Poly, r: &ResidueFunctional) -> Result<Gq, ResidueError> {
    r.residue(g)
}

pub fn cy_pairing(phi: &Poly, psi: &Poly, r: &ResidueFunctional) -> Result<Gq, ResidueError> {
    r.cy_pairing(phi, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::hessian;
    use crate::ring::parse::parse_with_default_vars;

    #[test]
    fn hessian_residue_is_mu() {
        for (text, n, mu) in [("z1^3+z2^3+z3^3", 3, 8), ("z1^3+z2^3", 2, 4)] {
            let f = parse_with_default_vars(text, n).unwrap();
            let r = ResidueFunctional::new(&LGPotential::undeformed(f.clone()).unwrap()).unwrap();
            assert_eq!(r.residue(&hessian(&f)).unwrap(), Gq::from_int(mu));
        }
    }

    #[test]
    fn cubic_values() {
        let r = ResidueFunctional::new(&LGPotential::fermat(3, 3)).unwrap();
        let xyz = parse_with_default_vars("z1*z2*z3", 3).unwrap();
        assert_eq!(r.residue(&xyz).unwrap(), Gq::from_ratio(1, 27));
        assert_eq!(r.residue(&Poly::one(3)).unwrap(), Gq::zero());
        let one = Poly::one(3);
        assert_eq!(r.cy_pairing(&one, &xyz).unwrap(), Gq::from_ratio(-1, 27));
        assert_eq!(r.cy_pairing(&xyz, &one).unwrap(), Gq::from_ratio(1, 27));
    }

    #[test]
    fn constants() {
        assert_eq!(c_tilde(1, 2, 3), Gq::from_int(-1));
        assert_eq!(c_tilde(2, 1, 3), Gq::from_int(1));
        assert_eq!(c_ab(2, 1, 3, 3), Gq::from_int(3));
    }

    #[test]
    fn hesse_residue_closed_form() {
        // res_u(z1 z2 z3) = 1/(u^3 + 27)
        for u in [Gq::from_ratio(1, 2), Gq::from_int(2), Gq::from_ints(1, -1)] {
            let r = ResidueFunctional::new(&LGPotential::hesse(u.clone())).unwrap();
            let xyz = parse_with_default_vars("z1*z2*z3", 3).unwrap();
            let expect = (&u.pow(3) + &Gq::from_int(27)).inv().unwrap();
            assert_eq!(r.residue(&xyz).unwrap(), expect);
        }
    }
}
