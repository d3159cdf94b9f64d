//! Recursive descent parser for the polynomial grammar
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') ['-'] term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | identifier | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! Division is only permitted between integer literals, so `1/2*(a - b)` is
//! accepted and `(a - b)/2` is not.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::param::Param;
use super::poly::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("division is only allowed between integer literals")]
    DivisionByNonLiteral,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exponent out of range")]
    ExponentOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// Which identifiers the parser accepts.
#[derive(Debug, Clone, Copy)]
pub enum Scope<'a> {
    /// Any syntactically valid identifier.
    Any,
    Declared(&'a BTreeSet<Param>),
}

pub fn parse_poly(text: &str, scope: Scope<'_>) -> Result<Poly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        scope,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

/// Parses an expression that must evaluate to a rational constant, such as a
/// grid value `-3/2`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let empty = BTreeSet::new();
    let p = parse_poly(text, Scope::Declared(&empty))?;
    Ok(p.as_constant().expect("identifier-free expression is constant"))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scope: Scope<'a>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
        {
            Some(ch) => self.err(ParseErrorKind::Unexpected(ch)),
            None => self.err(ParseErrorKind::Expected("more input")),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.signed_term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.signed_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<Poly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.term()?);
        }
        self.term()
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        if self.peek() == Some(b'/') {
            return Err(self.err(ParseErrorKind::DivisionByNonLiteral));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos_after_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err(ParseErrorKind::Expected("exponent")));
            }
            let exp: u32 = digits.parse().map_err(|_| ParseError {
                offset: start,
                kind: ParseErrorKind::ExponentOverflow,
            })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn pos_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(ParseErrorKind::Expected("')'")));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(ch) if ch.is_ascii_digit() => self.rational(),
            Some(ch) if ch.is_ascii_lowercase() => self.identifier(),
            Some(_) => Err(self.unexpected()),
            None => Err(self.err(ParseErrorKind::Expected("operand"))),
        }
    }

    fn rational(&mut self) -> Result<Poly, ParseError> {
        let numer: BigInt = self.digits().parse().expect("digit run");
        if self.peek() != Some(b'/') {
            return Ok(Poly::constant(Rational::from_integer(numer)));
        }
        self.pos += 1;
        let at = self.pos_after_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(ParseError {
                offset: at,
                kind: if self.peek() == Some(b'(') || self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
                    ParseErrorKind::DivisionByNonLiteral
                } else {
                    ParseErrorKind::Expected("integer denominator")
                },
            });
        }
        let denom: BigInt = digits.parse().expect("digit run");
        if denom.is_zero() {
            return Err(ParseError {
                offset: at,
                kind: ParseErrorKind::ZeroDenominator,
            });
        }
        Ok(Poly::constant(Rational::new(numer, denom)))
    }

    fn identifier(&mut self) -> Result<Poly, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() {
            let ch = self.src[self.pos];
            if ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let param = Param::new(name).expect("lexed identifier is valid");
        if let Scope::Declared(set) = self.scope {
            if !set.contains(&param) {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                });
            }
        }
        Ok(Poly::var(param))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rational;

    fn any(s: &str) -> Result<Poly, ParseError> {
        parse_poly(s, Scope::Any)
    }

    #[test]
    fn parses_two_term_polynomial() {
        let p = any("alpha^2 + 1/2*beta*gamma").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "alpha^2 + 1/2*beta*gamma");
    }

    #[test]
    fn parenthesized_division_is_rejected() {
        let e = any("-(beta - gamma)/2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByNonLiteral);
        assert_eq!(e.offset, 15);
        assert!(any("-1/2*(beta - gamma)").is_ok());
        assert_eq!(
            any("alpha/2").unwrap_err().kind,
            ParseErrorKind::DivisionByNonLiteral
        );
        assert_eq!(
            any("1/alpha").unwrap_err().kind,
            ParseErrorKind::DivisionByNonLiteral
        );
    }

    #[test]
    fn half_sum_expands() {
        let p = any("1/2*(alpha - beta - gamma)").unwrap();
        assert_eq!(p.to_string(), "1/2*alpha - 1/2*beta - 1/2*gamma");
    }

    #[test]
    fn unary_minus_and_powers() {
        assert_eq!(any("-alpha^2").unwrap().to_string(), "-alpha^2");
        assert_eq!(any("alpha - -beta").unwrap(), any("alpha + beta").unwrap());
        assert_eq!(any("(alpha + 1)^2").unwrap().to_string(), "alpha^2 + 2*alpha + 1");
        assert_eq!(any("2^3").unwrap(), Poly::int(8));
    }

    #[test]
    fn reports_offsets() {
        let e = any("alpha + * beta").unwrap_err();
        assert_eq!(e.offset, 8);
        let e = any("alpha beta").unwrap_err();
        assert_eq!(e.offset, 6);
        assert_eq!(any("(alpha").unwrap_err().kind, ParseErrorKind::Expected("')'"));
        assert_eq!(any("").unwrap_err().kind, ParseErrorKind::Expected("operand"));
        assert_eq!(any("3/0").unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(any("Alpha").unwrap_err().kind, ParseErrorKind::Unexpected('A'));
    }

    #[test]
    fn declared_scope() {
        let set: BTreeSet<Param> = [Param::alpha()].into_iter().collect();
        assert!(parse_poly("alpha + 1", Scope::Declared(&set)).is_ok());
        let e = parse_poly("alpha + zeta", Scope::Declared(&set)).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("zeta".into()));
        assert_eq!(e.offset, 8);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-3/2").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("4/8").unwrap(), rational(1, 2));
        assert!(parse_rational("alpha").is_err());
    }
}
