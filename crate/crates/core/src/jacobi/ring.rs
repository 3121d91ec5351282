//! Graded pieces of the Jacobian ideal `<d_1 F, ..., d_n F>` and normal forms
//! with respect to a fixed monomial basis of the quotient.

use std::collections::{BTreeMap, HashMap};

use crate::ring::{Field, Monomial, Polynomial};

use super::JacobiError;

/// Generator `m * d_i F` of the ideal, stored as `(i, m)`.
pub type Generator = (usize, Monomial);

#[derive(Clone, Debug)]
struct PivotRow<K: Field> {
    entries: Vec<(usize, K)>,
    origin: Vec<(Generator, K)>,
}

/// Echelon form of the ideal in one weighted degree.
#[derive(Clone, Debug)]
pub struct GradedPiece<K: Field> {
    pub degree: u64,
    cols: Vec<Monomial>,
    col_of: HashMap<Monomial, usize>,
    n_free: usize,
    pivots: HashMap<usize, PivotRow<K>>,
}

type Work<K> = (BTreeMap<usize, K>, BTreeMap<Generator, K>);

impl<K: Field> GradedPiece<K> {
    /// With `basis = None`, every monomial of this degree is a column in
    /// descending graded-lex order and the non-pivot columns are returned as
    /// the standard monomials. With `basis = Some(b)`, the monomials of `b`
    /// are placed last and must stay independent modulo the ideal.
    fn build(
        gens: &[Polynomial<K>],
        big_q: &[u64],
        d: u64,
        degree: u64,
        basis: Option<&[Monomial]>,
    ) -> Result<(Self, Vec<Monomial>), JacobiError> {
        let n = big_q.len();
        let all = Monomial::of_weighted_degree(n, big_q, degree);
        let (cols, n_free) = match basis {
            None => {
                let k = all.len();
                (all, k)
            }
            Some(b) => {
                let mut cols: Vec<Monomial> = all.into_iter().filter(|m| !b.contains(m)).collect();
                let k = cols.len();
                cols.extend(b.iter().cloned());
                (cols, k)
            }
        };
        let col_of: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut piece = Self { degree, cols, col_of, n_free, pivots: HashMap::new() };

        for (i, g) in gens.iter().enumerate() {
            let gdeg = d - big_q[i];
            if degree < gdeg {
                continue;
            }
            for m in Monomial::of_weighted_degree(n, big_q, degree - gdeg) {
                let row = g.mul_monomial(&m);
                let mut work: Work<K> = (BTreeMap::new(), BTreeMap::new());
                for (mono, c) in row.terms() {
                    let col = piece.col_of[mono];
                    work.0.insert(col, c.clone());
                }
                work.1.insert((i, m), K::one());
                piece.insert(work, basis.is_some())?;
            }
        }

        let standard: Vec<Monomial> = match basis {
            None => (0..piece.cols.len())
                .filter(|c| !piece.pivots.contains_key(c))
                .map(|c| piece.cols[c].clone())
                .collect(),
            Some(_) => {
                if piece.pivots.len() < piece.n_free {
                    return Err(JacobiError::NonIsolated { degree });
                }
                vec![]
            }
        };
        Ok((piece, standard))
    }

    fn eliminate_from(&self, work: &mut Work<K>, upto: usize) -> Option<usize> {
        loop {
            let (&c, coef) = work.0.iter().next()?;
            if c >= upto {
                return Some(c);
            }
            let Some(p) = self.pivots.get(&c) else {
                return Some(c);
            };
            let f = coef.clone();
            for (col, v) in &p.entries {
                axpy(&mut work.0, *col, &f.times(v).negate());
            }
            for (g, v) in &p.origin {
                axpy(&mut work.1, g.clone(), &f.times(v).negate());
            }
        }
    }

    fn insert(&mut self, mut work: Work<K>, fixed_basis: bool) -> Result<(), JacobiError> {
        let Some(lead) = self.eliminate_from(&mut work, usize::MAX) else {
            return Ok(());
        };
        if fixed_basis && lead >= self.n_free {
            return Err(JacobiError::BasisDependent { degree: self.degree });
        }
        let inv = work.0[&lead].inv().unwrap();
        let entries = work.0.into_iter().map(|(c, v)| (c, v.times(&inv))).collect();
        let origin = work.1.into_iter().map(|(g, v)| (g, v.times(&inv))).collect();
        self.pivots.insert(lead, PivotRow { entries, origin });
        Ok(())
    }

    /// Reduces a homogeneous polynomial of this degree. Returns the remainder
    /// on the basis columns and the generator combination that was removed.
    fn reduce(&self, g: &Polynomial<K>) -> (Polynomial<K>, BTreeMap<Generator, K>) {
        let mut work: Work<K> = (BTreeMap::new(), BTreeMap::new());
        for (m, c) in g.terms() {
            let col = self.col_of[m];
            work.0.insert(col, c.clone());
        }
        // Track the combination subtracted: negate the origin bookkeeping.
        let rest = self.eliminate_from(&mut work, self.n_free);
        debug_assert!(rest.map_or(true, |c| c >= self.n_free));
        let nvars = g.nvars();
        let nf = Polynomial::from_terms(nvars, work.0.into_iter().map(|(c, v)| (self.cols[c].clone(), v)));
        let removed = work.1.into_iter().map(|(k, v)| (k, v.negate())).collect();
        (nf, removed)
    }
}

fn axpy<T: Ord, K: Field>(m: &mut BTreeMap<T, K>, key: T, v: &K) {
    if v.is_zero() {
        return;
    }
    match m.get_mut(&key) {
        Some(x) => {
            let s = x.plus(v);
            if s.is_zero() {
                m.remove(&key);
            } else {
                *x = s;
            }
        }
        None => {
            m.insert(key, v.clone());
        }
    }
}

/// Jacobi ring of `F` with a fixed monomial basis, graded by `Q`.
#[derive(Clone, Debug)]
pub struct JacobiRing<K: Field> {
    nvars: usize,
    big_q: Vec<u64>,
    d: u64,
    gens: Vec<Polynomial<K>>,
    basis: Vec<Monomial>,
    socle: u64,
    pieces: BTreeMap<u64, GradedPiece<K>>,
}

/// Result of dividing `g` by the Jacobian ideal.
#[derive(Clone, Debug)]
pub struct Division<K: Field> {
    pub normal_form: Polynomial<K>,
    /// `h_i` with `g - normal_form = sum_i h_i d_i F`.
    pub cofactors: Vec<Polynomial<K>>,
}

impl<K: Field> JacobiRing<K> {
    /// Standard monomials of `F` (pivot = largest monomial under graded-lex),
    /// listed by weighted degree. Fails if the quotient does not vanish just
    /// above the socle degree.
    pub fn standard_monomials(f: &Polynomial<K>, big_q: &[u64], d: u64) -> Result<Vec<Monomial>, JacobiError> {
        let gens: Vec<Polynomial<K>> = (0..f.nvars()).map(|i| f.derivative(i)).collect();
        check_generators(&gens, big_q, d)?;
        let socle = socle_degree(big_q, d);
        let mut out = Vec::new();
        for deg in 0..=socle {
            let (_, std) = GradedPiece::build(&gens, big_q, d, deg, None)?;
            out.extend(std);
        }
        let max_q = *big_q.iter().max().unwrap();
        for deg in socle + 1..=socle + max_q {
            let (_, std) = GradedPiece::build(&gens, big_q, d, deg, None)?;
            if !std.is_empty() {
                return Err(JacobiError::NonIsolated { degree: deg });
            }
        }
        Ok(out)
    }

    /// Builds the ring for `F` with the given basis, validating that the basis
    /// spans the quotient in every degree up to the socle and that the
    /// quotient vanishes just above it.
    pub fn with_basis(f: &Polynomial<K>, big_q: &[u64], d: u64, basis: Vec<Monomial>) -> Result<Self, JacobiError> {
        let nvars = f.nvars();
        let gens: Vec<Polynomial<K>> = (0..nvars).map(|i| f.derivative(i)).collect();
        check_generators(&gens, big_q, d)?;
        let socle = socle_degree(big_q, d);
        let max_q = *big_q.iter().max().unwrap();
        let mut ring = Self { nvars, big_q: big_q.to_vec(), d, gens, basis, socle, pieces: BTreeMap::new() };
        for deg in 0..=socle + max_q {
            let piece = ring.build_piece(deg)?;
            ring.pieces.insert(deg, piece);
        }
        Ok(ring)
    }

    fn build_piece(&self, deg: u64) -> Result<GradedPiece<K>, JacobiError> {
        let b: Vec<Monomial> = self
            .basis
            .iter()
            .filter(|m| m.weighted_degree(&self.big_q) == deg)
            .cloned()
            .collect();
        Ok(GradedPiece::build(&self.gens, &self.big_q, self.d, deg, Some(&b))?.0)
    }

    /// Precomputes graded pieces up to `deg` so later divisions are cheap.
    pub fn extend_to(mut self, deg: u64) -> Result<Self, JacobiError> {
        for k in 0..=deg {
            if !self.pieces.contains_key(&k) {
                let p = self.build_piece(k)?;
                self.pieces.insert(k, p);
            }
        }
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn big_q(&self) -> &[u64] {
        &self.big_q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn socle_degree(&self) -> u64 {
        self.socle
    }

    pub fn generators(&self) -> &[Polynomial<K>] {
        &self.gens
    }

    /// Division with cofactors; `g` need not be homogeneous.
    pub fn divide(&self, g: &Polynomial<K>) -> Result<Division<K>, JacobiError> {
        let mut nf = Polynomial::zero(self.nvars);
        let mut cof = vec![Polynomial::zero(self.nvars); self.nvars];
        for (deg, part) in g.homogeneous_parts(&self.big_q) {
            let owned;
            let piece = match self.pieces.get(&deg) {
                Some(p) => p,
                None => {
                    owned = self.build_piece(deg)?;
                    &owned
                }
            };
            let (r, removed) = piece.reduce(&part);
            nf = &nf + &r;
            for ((i, m), c) in removed {
                cof[i].add_term(m, c);
            }
        }
        Ok(Division { normal_form: nf, cofactors: cof })
    }

    pub fn normal_form(&self, g: &Polynomial<K>) -> Result<Polynomial<K>, JacobiError> {
        // The quotient vanishes above the socle degree, so those parts are
        // dropped without building their pieces.
        let low = Polynomial::from_terms(
            self.nvars,
            g.terms()
                .filter(|(m, _)| m.weighted_degree(&self.big_q) <= self.socle)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        Ok(self.divide(&low)?.normal_form)
    }

    /// Coordinates of the normal form in the basis order.
    pub fn coordinates(&self, g: &Polynomial<K>) -> Result<Vec<K>, JacobiError> {
        let nf = self.normal_form(g)?;
        Ok(self.basis.iter().map(|m| nf.coeff(m)).collect())
    }
}

fn check_generators<K: Field>(gens: &[Polynomial<K>], big_q: &[u64], d: u64) -> Result<(), JacobiError> {
    for (i, g) in gens.iter().enumerate() {
        if !g.is_zero() && (d < big_q[i] || g.homogeneous_degree(big_q) != Some(d - big_q[i])) {
            return Err(JacobiError::NotQuasiHomogeneous);
        }
    }
    Ok(())
}

pub fn socle_degree(big_q: &[u64], d: u64) -> u64 {
    big_q.len() as u64 * d - 2 * big_q.iter().sum::<u64>()
}
