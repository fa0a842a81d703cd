//! Line-oriented text format for series.
//!
//! ```text
//! # eps | a | n | R/a | kind | M | w | numerator | denominator
//! 1 | 1 | 1 | 2 | sin | 1 | 0 | 3/4*(6*s^2-4)*e | 1
//! ```
//!
//! The numerator is any polynomial expression in `e`, `eta`, `s`, `c` (sums,
//! products, integer powers, parentheses, rational literals). The denominator
//! is a product of `e^p`, `eta^q` and `(1+eta)^r`, or `1`. Reading
//! canonicalizes and merges repeated keys; writing emits one canonical,
//! expanded line per key in key order.

use std::fmt::Write as _;

use super::{Coefficient, Kind, PoissonSeries, Polynomial, TermKey, TrigTerm};
use crate::error::{Error, Result};
use crate::scalar::Exact;

impl<S: Exact> PoissonSeries<S> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.iter() {
            let _ = writeln!(
                out,
                "{} | {} | {} | {} | {} | {} | {} | {} | {}",
                k.eps_order,
                k.a_power,
                k.n_power,
                k.roa_power,
                k.kind.as_str(),
                k.m_mult,
                k.w_mult,
                c.numerator(),
                c.denominator_string()
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            terms.push(parse_line(line).map_err(|message| Error::Parse {
                line: line_no,
                message,
            })?);
        }
        Ok(Self::from_terms(terms))
    }
}

fn parse_line<S: Exact>(line: &str) -> std::result::Result<TrigTerm<S>, String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() != 9 {
        return Err(format!("expected 9 fields, found {}", fields.len()));
    }
    let int = |i: usize, name: &str| -> std::result::Result<i64, String> {
        fields[i]
            .parse::<i64>()
            .map_err(|_| format!("bad {name}: '{}'", fields[i]))
    };
    let nonneg = |i: usize, name: &str| -> std::result::Result<u32, String> {
        let v = int(i, name)?;
        u32::try_from(v).map_err(|_| format!("{name} must be nonnegative"))
    };
    let kind = match fields[4] {
        "cos" => Kind::Cos,
        "sin" => Kind::Sin,
        other => return Err(format!("bad kind '{other}'")),
    };
    let key = TermKey {
        eps_order: nonneg(0, "eps_order")?,
        a_power: int(1, "a_power")? as i32,
        n_power: nonneg(2, "n_power")?,
        roa_power: nonneg(3, "roa_power")?,
        kind,
        m_mult: int(5, "m_mult")? as i32,
        w_mult: int(6, "w_mult")? as i32,
    };
    let num = parse_polynomial::<S>(fields[7])?;
    let (p, q, r) = parse_denominator(fields[8])?;
    Ok(TrigTerm::new(key, Coefficient::new(num, p, q, r)))
}

/// Parses a denominator such as `e^2*eta*(1+eta)^3`.
pub(crate) fn parse_denominator(text: &str) -> std::result::Result<(u32, u32, u32), String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (mut p, mut q, mut r) = (0u32, 0u32, 0u32);
    if compact == "1" {
        return Ok((0, 0, 0));
    }
    for factor in compact.split('*') {
        let (base, exp) = match factor.rsplit_once('^') {
            Some((b, x)) if !x.contains(')') => (
                b,
                x.parse::<u32>()
                    .map_err(|_| format!("bad exponent in '{factor}'"))?,
            ),
            _ => (factor, 1),
        };
        match base {
            "e" => p += exp,
            "eta" => q += exp,
            "(1+eta)" => r += exp,
            "1" => {}
            _ => return Err(format!("unsupported denominator factor '{factor}'")),
        }
    }
    Ok((p, q, r))
}

/// Parses a polynomial expression in `e`, `eta`, `s`, `c`.
pub fn parse_polynomial<S: Exact>(text: &str) -> std::result::Result<Polynomial<S>, String> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(format!("trailing input in '{text}'"));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> std::result::Result<Vec<Token>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token::Int(chars[start..i].iter().collect()));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            i += 1;
        } else {
            return Err(format!("unexpected character '{ch}'"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr<S: Exact>(&mut self) -> std::result::Result<Polynomial<S>, String> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term<S: Exact>(&mut self) -> std::result::Result<Polynomial<S>, String> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = acc.mul(&rhs);
            } else {
                let divisor: S = rhs.as_constant().ok_or("division by a non-constant")?;
                if divisor.is_zero() {
                    return Err("division by zero".into());
                }
                acc = acc.scale(&(S::one() / divisor));
            }
        }
        Ok(acc)
    }

    fn unary<S: Exact>(&mut self) -> std::result::Result<Polynomial<S>, String> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<S: Exact>(&mut self) -> std::result::Result<Polynomial<S>, String> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Int(digits)) => {
                    let k: u32 = digits.parse().map_err(|_| "exponent too large")?;
                    self.pos += 1;
                    return Ok(base.pow(k));
                }
                _ => return Err("expected integer exponent".into()),
            }
        }
        Ok(base)
    }

    fn atom<S: Exact>(&mut self) -> std::result::Result<Polynomial<S>, String> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Token::Int(digits) => Ok(Polynomial::constant(
                S::parse(&digits).ok_or("bad integer literal")?,
            )),
            Token::Ident(name) => match name.as_str() {
                "e" => Ok(Polynomial::e()),
                "eta" => Ok(Polynomial::eta()),
                "s" => Ok(Polynomial::s()),
                "c" => Ok(Polynomial::c()),
                other => Err(format!("unknown symbol '{other}'")),
            },
            Token::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Op(c) => Err(format!("unexpected '{c}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Series};

    #[test]
    fn parses_expressions() {
        let p: Polynomial<Rational> = parse_polynomial("3/4*(6*s^2-4)*e - eta^2").unwrap();
        let expected: Polynomial<Rational> = parse_polynomial("9/2*e*s^2 - 3*e - 1 + e^2").unwrap();
        assert_eq!(p, expected);
        assert!(parse_polynomial::<Rational>("x + 1").is_err());
        assert!(parse_polynomial::<Rational>("e/s").is_err());
    }

    #[test]
    fn denominators() {
        assert_eq!(parse_denominator("1").unwrap(), (0, 0, 0));
        assert_eq!(parse_denominator("e^2*eta*(1+eta)^3").unwrap(), (2, 1, 3));
        assert_eq!(parse_denominator("(1 + eta)").unwrap(), (0, 0, 1));
        assert!(parse_denominator("s").is_err());
    }

    #[test]
    fn merges_and_round_trips() {
        let text = "\
            # comment\n\
            1 | 1 | 1 | 2 | sin | 1 | 0 | e | 1\n\
            1 | 1 | 1 | 2 | sin | 1 | 0 | 2*e | 1\n\
            0 | 0 | 0 | 0 | cos | -2 | 0 | eta*s | (1+eta)\n";
        let s = Series::from_text(text).unwrap();
        assert_eq!(s.len(), 2);
        let again = Series::from_text(&s.to_text()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_text(), s.to_text());
    }

    #[test]
    fn reports_line_numbers() {
        let err = Series::from_text("\n1 | 2 | 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
