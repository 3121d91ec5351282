//! Recursive-descent parser for polynomial text.
//!
//! Accepted forms include `z1^3 + z2^3`, `z1*z2*z3 - (1/3)*z1^3`, `(2+3*i)*z1`,
//! `3 z1^2` (juxtaposition multiplies) and parenthesised sub-expressions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::poly::Poly;
use super::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("invalid variable name '{0}'")]
    BadVariableName(String),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownVariable { pos, .. } => Some(*pos),
            ParseError::BadVariableName(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut toks = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let (pos, c) = chars[k];
            if c.is_whitespace() {
                k += 1;
            } else if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|x| x.1).collect();
                toks.push((Tok::Int(s.parse().unwrap()), pos));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = k;
                while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|x| x.1).collect();
                toks.push((Tok::Ident(s), pos));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), pos));
                k += 1;
            } else {
                return Err(ParseError::Syntax { pos, msg: format!("unexpected character '{c}'") });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Self { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        let mut acc = Poly::zero(n);
        let mut sign = 1i64;
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                sign = -1;
            }
            Tok::Sym('+') => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    sign = 1;
                }
                Tok::Sym('-') => {
                    self.bump();
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        if !self.starts_factor() {
            return self.err("expected a term");
        }
        let mut acc = self.factor()?;
        loop {
            if let Tok::Sym('*') = self.peek() {
                self.bump();
                if !self.starts_factor() {
                    return self.err("expected a factor after '*'");
                }
                acc = &acc * &self.factor()?;
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if let Tok::Sym('^') = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Int(k) => u32::try_from(&k)
                    .ok()
                    .filter(|&e| e <= 4096)
                    .map_or_else(|| Err(ParseError::Syntax { pos, msg: "exponent too large".into() }), Ok),
                _ => Err(ParseError::Syntax { pos, msg: "expected integer exponent".into() }),
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        let pos = self.pos();
        match self.bump() {
            Tok::Int(a) => {
                let mut r = BigRational::from_integer(a);
                if let Tok::Sym('/') = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => r /= BigRational::from_integer(d),
                        Tok::Int(_) => {
                            return Err(ParseError::Syntax { pos: dpos, msg: "zero denominator".into() })
                        }
                        _ => return Err(ParseError::Syntax { pos: dpos, msg: "expected integer denominator".into() }),
                    }
                }
                Ok(Poly::constant(n, GaussianRational::real(r)))
            }
            Tok::Ident(name) if name == "i" => Ok(Poly::constant(n, GaussianRational::i())),
            Tok::Ident(name) => {
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or(ParseError::UnknownVariable { pos, name })?;
                let e = self.exponent()?;
                Ok(Poly::var(n, idx).pow(e))
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    Tok::Sym(')') => {}
                    _ => return Err(ParseError::Syntax { pos: self.toks[self.at.saturating_sub(1)].1, msg: "expected ')'".into() }),
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            _ => Err(ParseError::Syntax { pos, msg: "expected a number, variable or '('".into() }),
        }
    }
}

/// Parses `text` as a polynomial in `variables`.
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<Poly, ParseError> {
    for v in variables {
        let ok = v != "i"
            && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ParseError::BadVariableName(v.clone()));
        }
    }
    let lexer = Lexer::new(text)?;
    let mut p = Parser { toks: lexer.toks, at: 0, vars: variables };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Convenience: variables named `z1..zn`.
pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

pub fn parse_with_default_vars(text: &str, n: usize) -> Result<Poly, ParseError> {
    parse_polynomial(text, &default_vars(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;
    use crate::ring::Monomial;

    fn v3() -> Vec<String> {
        default_vars(3)
    }

    #[test]
    fn fermat_cubic() {
        let p = parse_polynomial("z1^3+z2^3+z3^3", &v3()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coeff(&Monomial(vec![3, 0, 0])), GaussianRational::one());
    }

    #[test]
    fn zero_is_empty() {
        assert!(parse_polynomial("0", &v3()).unwrap().is_zero());
    }

    #[test]
    fn rational_coefficient() {
        let p = parse_polynomial("z1*z2*z3 - (1/3)*z1^3", &v3()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial(vec![3, 0, 0])), GaussianRational::from_ratio(-1, 3));
    }

    #[test]
    fn unknown_variable_reports_position() {
        let e = parse_polynomial("z1 + w^2", &v3()).unwrap_err();
        assert_eq!(e, ParseError::UnknownVariable { pos: 5, name: "w".into() });
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_polynomial("z1 + * z2", &v3()).unwrap_err();
        assert_eq!(e.position(), Some(5));
        assert!(parse_polynomial("(z1", &v3()).is_err());
        assert!(parse_polynomial("1/0", &v3()).is_err());
    }

    #[test]
    fn imaginary_unit() {
        let p = parse_polynomial("(2+3*i)*z1 - i", &v3()).unwrap();
        assert_eq!(p.to_string(), "(2+3*i)*z1 - i");
    }
}
