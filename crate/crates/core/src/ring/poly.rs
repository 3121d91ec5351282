use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::monomial::Monomial;
use super::scalar::GaussianRational;

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<K: Field> {
    nvars: usize,
    terms: BTreeMap<Monomial, K>,
}

pub type Poly = Polynomial<GaussianRational>;

impl<K: Field> Polynomial<K> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, K::one())
    }

    pub fn term(m: Monomial, c: K) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.plus(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.times(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.times(&K::from_i64(e as i64)));
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// `Some(D)` if every term has weighted degree `D`.
    pub fn homogeneous_degree(&self, big_q: &[u64]) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(big_q));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into weighted-homogeneous components.
    pub fn homogeneous_parts(&self, big_q: &[u64]) -> BTreeMap<u64, Self> {
        let mut out: BTreeMap<u64, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weighted_degree(big_q))
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> Polynomial<L> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = coeff_body(c, m.is_one());
            let mono = if m.is_one() { String::new() } else { m.format(names) };
            let piece = match (body.as_str(), mono.is_empty()) {
                ("", true) => "1".to_string(),
                ("", false) => mono,
                (b, true) => b.to_string(),
                (b, false) => format!("{b}*{mono}"),
            };
            match (idx, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&piece);
        }
        out
    }
}

/// Splits a coefficient into (is_negative, printable magnitude); an empty
/// magnitude means the coefficient is +-1 attached to a non-constant monomial.
fn coeff_body<K: Field>(c: &K, is_const: bool) -> (bool, String) {
    let s = c.to_string();
    let simple = !s[1..].contains(['+', '-']);
    let (neg, mag) = match s.strip_prefix('-') {
        Some(rest) if simple => (true, rest.to_string()),
        _ => (false, s.clone()),
    };
    if mag == "1" && !is_const {
        return (neg, String::new());
    }
    if !simple || mag.contains('/') && !is_const {
        return (neg, format!("({mag})"));
    }
    (neg, mag)
}

impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("z{i}")).collect();
        f.write_str(&self.format(&names))
    }
}

impl<K: Field> Add for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<K: Field> Sub for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.negate());
        }
        out
    }
}

impl<K: Field> Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        out
    }
}

impl<K: Field> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        self.scale(&K::one().negate())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $m(self, o: Polynomial<K>) -> Polynomial<K> {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

/// Determinant of a square matrix of polynomials by permutation expansion.
pub fn poly_det<K: Field>(m: &[Vec<Polynomial<K>>]) -> Polynomial<K> {
    let n = m.len();
    let nvars = m[0][0].nvars();
    let mut total = Polynomial::zero(nvars);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(0, &mut perm, &mut |p| {
        let mut term = Polynomial::one(nvars);
        for (r, &c) in p.iter().enumerate() {
            if m[r][c].is_zero() {
                return;
            }
            term = &term * &m[r][c];
        }
        if permutation_sign(p) < 0 {
            term = -&term;
        }
        total = &total + &term;
    });
    total
}

fn permute(k: usize, p: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(k + 1, p, f);
        p.swap(k, i);
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    let mut seen = vec![false; p.len()];
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn cancel_removes_terms() {
        let x = Poly::var(2, 0);
        let d = &x - &x;
        assert!(d.is_zero());
    }

    #[test]
    fn derivative_of_cube() {
        let x = Poly::var(1, 0);
        let c = x.pow(3);
        assert_eq!(c.derivative(0), x.pow(2).scale(&q(3)));
    }

    #[test]
    fn det_of_diagonal() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let z = Poly::zero(2);
        let d = poly_det(&[vec![x.clone(), z.clone()], vec![z, y.clone()]]);
        assert_eq!(d, &x * &y);
    }
}
