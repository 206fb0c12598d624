//! Polynomial input syntax.
//!
//! Either an expression in `x` such as `x^3 - 4x + 2` (implicit or explicit
//! `*` between coefficient and variable), or `coeffs:1,0,-4,2` listing the
//! coefficients from the highest degree down.

use std::iter::Peekable;
use std::str::Chars;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{IntPoly, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial at offset {offset}: {msg}")]
pub struct ParseError {
    pub offset: usize,
    pub msg: String,
}

/// Source text together with the parsed polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpec {
    pub source: String,
    pub poly: IntPoly,
}

impl PolySpec {
    pub fn rat(&self) -> RatPoly {
        self.poly.to_rat()
    }
}

impl std::str::FromStr for PolySpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Ok(PolySpec {
            source: s.to_string(),
            poly: parse_poly(s)?,
        })
    }
}

pub fn parse_poly(s: &str) -> Result<IntPoly, ParseError> {
    let t = s.trim();
    if let Some(list) = t.strip_prefix("coeffs:") {
        return parse_coeffs(list);
    }
    Parser {
        it: t.chars().peekable(),
        pos: 0,
    }
    .poly()
}

fn parse_coeffs(list: &str) -> Result<IntPoly, ParseError> {
    let mut c = Vec::new();
    for (i, item) in list.split(',').enumerate() {
        let v: BigInt = item.trim().parse().map_err(|_| ParseError {
            offset: i,
            msg: format!("coefficient {:?} is not an integer", item.trim()),
        })?;
        c.push(v);
    }
    c.reverse();
    Ok(IntPoly::new(c))
}

struct Parser<'a> {
    it: Peekable<Chars<'a>>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.it.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn bump(&mut self) -> Option<char> {
        self.pos += 1;
        self.it.next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.it.peek().copied()
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(c) = self.it.peek().copied().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        (!digits.is_empty()).then(|| digits.parse().expect("ascii digits"))
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') | Some('−') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn term(&mut self) -> Result<(BigInt, usize), ParseError> {
        let coeff = self.number();
        if coeff.is_some() && self.peek() == Some('*') {
            self.bump();
            if !matches!(self.peek(), Some('x') | Some('X')) {
                return Err(self.err("expected x after *"));
            }
        }
        if matches!(self.peek(), Some('x') | Some('X')) {
            self.bump();
            let exp = if self.peek() == Some('^') {
                self.bump();
                let e = self.number().ok_or_else(|| self.err("expected exponent"))?;
                usize::try_from(e).map_err(|_| self.err("exponent too large"))?
            } else {
                1
            };
            Ok((coeff.unwrap_or_else(|| 1.into()), exp))
        } else {
            coeff
                .map(|c| (c, 0))
                .ok_or_else(|| self.err("expected a term"))
        }
    }

    fn poly(mut self) -> Result<IntPoly, ParseError> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let neg = match self.sign() {
                Some(n) => n,
                None if first => false,
                None => {
                    return match self.peek() {
                        None => Ok(IntPoly::new(coeffs)),
                        Some(c) => Err(self.err(format!("unexpected {c:?}"))),
                    }
                }
            };
            first = false;
            let (c, e) = self.term()?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += if neg { -c } else { c };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn expressions() {
        assert_eq!(p("x^3 - 4x + 2"), IntPoly::from_i64s(&[2, -4, 0, 1]));
        assert_eq!(p("x^2-x-1"), IntPoly::from_i64s(&[-1, -1, 1]));
        assert_eq!(p("-x + 3*x^2 + x"), IntPoly::from_i64s(&[0, 0, 3]));
        assert_eq!(p("  2X - 1 "), IntPoly::from_i64s(&[-1, 2]));
        assert_eq!(p("x"), IntPoly::x());
        assert_eq!(p("7"), IntPoly::from_i64s(&[7]));
        assert_eq!(p("x^2 − 2"), IntPoly::from_i64s(&[-2, 0, 1]));
    }

    #[test]
    fn coefficient_lists() {
        assert_eq!(p("coeffs:1,0,-4,2"), p("x^3 - 4x + 2"));
        assert_eq!(p("coeffs: 1, -1, -1"), p("x^2 - x - 1"));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x^", "x^2 +", "3 x y", "coeffs:1,a", "2*", "x^2 2"] {
            assert!(parse_poly(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["x^3 - 4x + 2", "x^2 - x - 1", "x^5 + 3x^2 - 7"] {
            assert_eq!(p(s).to_string(), s);
        }
    }
}
