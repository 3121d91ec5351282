use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::monomial::Monomial;
use super::poly::Poly;
use super::scalar::Gq;
use crate::linalg::{solve_unique, SolveError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("polynomial is zero")]
    Zero,
    #[error("polynomial is not quasi-homogeneous (inconsistent weight system)")]
    Inconsistent,
    #[error("weights are underdetermined (rank {rank} < {unknowns}); some variable does not appear")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("weight q_{index} = {value} lies outside (0, 1/2]")]
    OutOfRange { index: usize, value: String },
}

/// Rational weights `q_i`, period `d` and integer exponents `Q_i = q_i d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub q: Vec<BigRational>,
    pub d: u64,
    pub big_q: Vec<u64>,
}

#[derive(Serialize)]
struct WeightJson {
    q: Vec<String>,
    d: u64,
    #[serde(rename = "Q")]
    big_q: Vec<u64>,
}

impl Serialize for WeightSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightJson { q: self.q.iter().map(|r| r.to_string()).collect(), d: self.d, big_q: self.big_q.clone() }
            .serialize(s)
    }
}

impl WeightSystem {
    pub fn from_weights(q: Vec<BigRational>) -> Self {
        let d = q.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let big_q = q
            .iter()
            .map(|r| (r * BigRational::from_integer(d.clone())).to_integer().to_u64().unwrap())
            .collect();
        Self { q, d: d.to_u64().expect("weight period overflow"), big_q }
    }

    /// `n` variables of weight `1/n`.
    pub fn homogeneous(n: usize, degree: u64) -> Self {
        Self::from_weights(vec![BigRational::new(1.into(), BigInt::from(degree)); n])
    }

    pub fn nvars(&self) -> usize {
        self.q.len()
    }

    pub fn weighted_degree(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.big_q)
    }

    /// Exact weight `sum beta_i q_i`.
    pub fn weight(&self, m: &Monomial) -> BigRational {
        BigRational::new(BigInt::from(self.weighted_degree(m)), BigInt::from(self.d))
    }

    /// U(1) charge `l(z^beta dz) = sum (beta_i + 1) Q_i`.
    pub fn charge(&self, m: &Monomial) -> u64 {
        self.weighted_degree(m) + self.big_q.iter().sum::<u64>()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.big_q.iter().all(|&x| x == 1)
    }

    /// Weighted degree of the socle, `sum (d - 2 Q_i)`.
    pub fn socle_degree(&self) -> u64 {
        let n = self.nvars() as u64;
        n * self.d - 2 * self.big_q.iter().sum::<u64>()
    }

    /// `prod (1/q_i - 1)`.
    pub fn milnor_formula(&self) -> BigRational {
        self.q.iter().fold(BigRational::one(), |acc, q| acc * (q.recip() - BigRational::one()))
    }
}

pub fn charge(a: &Monomial, w: &WeightSystem) -> u64 {
    w.charge(a)
}

/// Solves `sum beta_i q_i = 1` over the exponent vectors of `f`.
pub fn infer_weights(f: &Poly) -> Result<WeightSystem, WeightError> {
    if f.is_zero() {
        return Err(WeightError::Zero);
    }
    let rows: Vec<Vec<Gq>> = f
        .terms()
        .map(|(m, _)| m.0.iter().map(|&e| Gq::from_int(e as i64)).collect())
        .collect();
    let rhs = vec![Gq::from_int(1); rows.len()];
    let sol = solve_unique(&rows, &rhs).map_err(|e| match e {
        SolveError::Inconsistent => WeightError::Inconsistent,
        SolveError::Underdetermined { rank, unknowns } => WeightError::Underdetermined { rank, unknowns },
    })?;
    let q: Vec<BigRational> = sol.into_iter().map(|g| g.re).collect();
    let half = BigRational::new(1.into(), 2.into());
    for (i, qi) in q.iter().enumerate() {
        if !qi.is_positive() || *qi > half {
            return Err(WeightError::OutOfRange { index: i, value: qi.to_string() });
        }
    }
    let w = WeightSystem::from_weights(q);
    for (m, _) in f.terms() {
        if w.weighted_degree(m) != w.d {
            return Err(WeightError::Inconsistent);
        }
    }
    Ok(w)
}

/// `c = sum (1 - 2 q_i)`.
pub fn central_charge(w: &WeightSystem) -> BigRational {
    let two = BigRational::from_integer(2.into());
    w.q.iter().fold(BigRational::zero(), |acc, q| acc + BigRational::one() - &two * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_with_default_vars;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn fermat_cubic_weights() {
        let f = parse_with_default_vars("z1^3+z2^3+z3^3", 3).unwrap();
        let w = infer_weights(&f).unwrap();
        assert_eq!(w.q, vec![r(1, 3); 3]);
        assert_eq!(w.d, 3);
        assert_eq!(w.big_q, vec![1, 1, 1]);
        assert_eq!(central_charge(&w), r(1, 1));
    }

    #[test]
    fn weighted_example() {
        let f = parse_with_default_vars("z1^2*z2 + z2^2", 2).unwrap();
        let w = infer_weights(&f).unwrap();
        assert_eq!(w.q, vec![r(1, 4), r(1, 2)]);
        assert_eq!(w.d, 4);
        assert_eq!(w.big_q, vec![1, 2]);
    }

    #[test]
    fn inconsistent_system() {
        let f = parse_with_default_vars("z1^2 + z2^3 + z1*z2^2", 2).unwrap();
        assert_eq!(infer_weights(&f), Err(WeightError::Inconsistent));
    }

    #[test]
    fn missing_variable() {
        let f = parse_with_default_vars("z1^3", 2).unwrap();
        assert!(matches!(infer_weights(&f), Err(WeightError::Underdetermined { .. })));
    }

    #[test]
    fn central_charges() {
        let quintic = WeightSystem::homogeneous(5, 5);
        assert_eq!(central_charge(&quintic), r(3, 1));
        let single = WeightSystem::from_weights(vec![r(1, 2)]);
        assert_eq!(central_charge(&single), r(0, 1));
    }
}
