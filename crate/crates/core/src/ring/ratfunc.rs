//! Univariate polynomials over Q(i) and the rational-function field Q(i)(u).

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::field::Field;
use super::scalar::Gq;

/// Dense univariate polynomial, `c[k]` is the coefficient of `u^k`; no
/// trailing zeros.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct UPoly {
    c: Vec<Gq>,
}

impl UPoly {
    pub fn new(mut c: Vec<Gq>) -> Self {
        while c.last().is_some_and(|x| Field::is_zero(x)) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: vec![] }
    }

    pub fn constant(a: Gq) -> Self {
        Self::new(vec![a])
    }

    /// The indeterminate `u`.
    pub fn x() -> Self {
        Self::new(vec![Gq::zero(), Gq::one()])
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Gq {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = Gq::zero();
        Self::new((0..n).map(|k| self.c.get(k).unwrap_or(&z) + o.c.get(k).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Gq::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if Field::is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, a: &Gq) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, x)| x * &Gq::from_int(k as i64)).collect())
    }

    /// Euclidean division.
    pub fn div_rem(&self, o: &Self) -> (Self, Self) {
        assert!(!o.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dq = o.c.len() - 1;
        if r.len() <= dq {
            return (Self::zero(), self.clone());
        }
        let inv = o.lead().inv().unwrap();
        let mut q = vec![Gq::zero(); r.len() - dq];
        for k in (0..q.len()).rev() {
            let f = &r[k + dq] * &inv;
            if Field::is_zero(&f) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&f * b);
            }
            q[k] = f;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().unwrap())
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn eval(&self, u: &Gq) -> Gq {
        self.c.iter().rev().fold(Gq::zero(), |acc, a| &(&acc * u) + a)
    }

    pub fn eval_c(&self, u: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * u + a.to_complex())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.c.iter().map(Gq::to_complex).collect()
    }

    /// Complex roots by Durand-Kerner iteration followed by Newton polishing.
    pub fn roots(&self) -> Vec<Complex64> {
        let c = self.to_complex();
        crate::numeric::poly_roots(&c)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = super::poly::Poly::zero(1);
        for (k, a) in self.c.iter().enumerate() {
            p.add_term(super::monomial::Monomial(vec![k as u32]), a.clone());
        }
        f.write_str(&p.format(&["u".to_string()]))
    }
}

impl Serialize for UPoly {
    /// Serialized as the list of `[re, im]` rational-string pairs, lowest degree first.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

/// Element `num/den` of Q(i)(u), kept reduced with monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { num, den: UPoly::constant(Gq::one()) };
        }
        let g = UPoly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().inv().unwrap();
        Self { num: n.scale(&l), den: d.scale(&l) }
    }

    pub fn from_poly(p: UPoly) -> Self {
        Self { num: p, den: UPoly::constant(Gq::one()) }
    }

    pub fn var() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den))
    }

    pub fn eval(&self, u: &Gq) -> Option<Gq> {
        let d = self.den.eval(u);
        d.inv().map(|di| &self.num.eval(u) * &di)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        Self::from_poly(UPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(UPoly::constant(Gq::one()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn negate(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }
    fn from_gaussian(g: &Gq) -> Self {
        Self::from_poly(UPoly::constant(g.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_common_factor() {
        // (u^2 - 1)/(u - 1) = u + 1
        let num = UPoly::new(vec![Gq::from_int(-1), Gq::zero(), Gq::one()]);
        let den = UPoly::new(vec![Gq::from_int(-1), Gq::one()]);
        let r = RatFunc::new(num, den);
        assert_eq!(r, RatFunc::from_poly(UPoly::new(vec![Gq::one(), Gq::one()])));
    }

    #[test]
    fn derivative_of_inverse() {
        // d/du (1/u) = -1/u^2
        let r = RatFunc::var().inv().unwrap().derivative();
        let expect = RatFunc::new(UPoly::constant(Gq::from_int(-1)), UPoly::x().mul(&UPoly::x()));
        assert_eq!(r, expect);
    }
}
