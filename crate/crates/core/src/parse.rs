//! Expression DSL for map components and golden formulas.
//!
//! Grammar (Pratt style, loosest first):
//!
//! ```text
//! expr   := expr ('+' | '-') expr
//!         | expr ('*' | '/') expr
//!         | '-' expr
//!         | expr '^' ['-'] integer
//!         | atom
//! atom   := integer | 'i' | variable | parameter
//!         | func '(' expr ')' | '(' expr ')'
//! func   := 'sqrt' | 'conj' | 're' | 'im'
//! ```
//!
//! Variables are `z1..z{m}`; with two variables `z`, `w` are aliases, with
//! one variable `z` is. `sqrt` accepts only a nonnegative rational constant.

use std::collections::BTreeMap;

use num_traits::Signed;
use thiserror::Error;

use crate::algebra::{GaussianRational, HermitianPoly, RadicalNumber, Rational, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("division by zero")]
    ZeroDenominator,
    #[error("sqrt of a negative number ({0})")]
    NegativeRadicand(String),
    #[error("sqrt needs a rational constant argument")]
    NonRationalRadicand,
    #[error("exponent out of range")]
    BadExponent,
    #[error("trailing input")]
    Trailing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut k = 0;
    while k < bytes.len() {
        let (pos, c) = bytes[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].1.is_ascii_digit() {
                k += 1;
            }
            let s: String = bytes[start..k].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].1.is_ascii_alphanumeric() || bytes[k].1 == '_') {
                k += 1;
            }
            out.push((pos, Tok::Ident(bytes[start..k].iter().map(|x| x.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            k += 1;
        } else {
            return Err(ParseError { pos, kind: ParseErrorKind::UnexpectedChar(c) });
        }
    }
    Ok(out)
}

/// Variable count plus named constants and bound sub-expressions.
#[derive(Clone, Debug)]
pub struct ParseContext {
    pub nvars: usize,
    bindings: BTreeMap<String, RationalFunction>,
}

impl ParseContext {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, bindings: BTreeMap::new() }
    }

    /// Binds a name to a constant (map parameters such as `t`).
    pub fn with_param(mut self, name: &str, value: RadicalNumber) -> Self {
        self.bindings.insert(name.to_string(), RationalFunction::constant(self.nvars, value));
        self
    }

    /// Binds a name to an arbitrary expression, e.g. `s` to `z*conj(z)`.
    pub fn with_binding(mut self, name: &str, value: RationalFunction) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    fn variable(&self, name: &str) -> Option<usize> {
        match (self.nvars, name) {
            (1, "z") | (2, "z") => return Some(0),
            (2, "w") => return Some(1),
            _ => {}
        }
        let idx: usize = name.strip_prefix('z')?.parse().ok()?;
        (1..=self.nvars).contains(&idx).then(|| idx - 1)
    }

    pub fn parse(&self, src: &str) -> Result<RationalFunction, ParseError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, k: 0, ctx: self, end: src.len() };
        let v = p.expr(0)?;
        if p.k < p.toks.len() {
            return Err(ParseError { pos: p.toks[p.k].0, kind: ParseErrorKind::Trailing });
        }
        Ok(v)
    }
}

/// Parses with no parameters or bindings.
pub fn parse_expression(src: &str, nvars: usize) -> Result<RationalFunction, ParseError> {
    ParseContext::new(nvars).parse(src)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    k: usize,
    ctx: &'a ParseContext,
    end: usize,
}

const UNARY_BP: u8 = 5;

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.k).map_or(self.end, |t| t.0)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos(), kind }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.k).map(|t| t.1.clone());
        self.k += 1;
        t
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Op(o)) if *o == c => {
                self.k += 1;
                Ok(())
            }
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            _ => Err(self.err(ParseErrorKind::Expected(what))),
        }
    }

    fn constant(&self, c: RadicalNumber) -> RationalFunction {
        RationalFunction::constant(self.ctx.nvars, c)
    }

    fn expr(&mut self, min_bp: u8) -> Result<RationalFunction, ParseError> {
        let mut lhs = self.prefix()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c)) if *c != '(' && *c != ')' => *c,
                _ => break,
            };
            let (lbp, rbp) = match op {
                '+' | '-' => (1, 2),
                '*' | '/' => (3, 4),
                '^' => (7, 6),
                _ => unreachable!(),
            };
            if lbp < min_bp {
                break;
            }
            let op_pos = self.pos();
            self.k += 1;
            if op == '^' {
                let e = self.exponent()?;
                lhs = if e >= 0 {
                    lhs.pow(e as u32)
                } else {
                    RationalFunction::one(self.ctx.nvars)
                        .div_ref(&lhs.pow(e.unsigned_abs() as u32))
                        .map_err(|_| ParseError { pos: op_pos, kind: ParseErrorKind::ZeroDenominator })?
                };
                continue;
            }
            let rhs = self.expr(rbp)?;
            lhs = match op {
                '+' => lhs.add_ref(&rhs),
                '-' => lhs.sub_ref(&rhs),
                '*' => lhs.mul_ref(&rhs),
                '/' => {
                    lhs.div_ref(&rhs).map_err(|_| ParseError { pos: op_pos, kind: ParseErrorKind::ZeroDenominator })?
                }
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let neg = matches!(self.peek(), Some(Tok::Op('-')));
        if neg {
            self.k += 1;
        }
        let paren = matches!(self.peek(), Some(Tok::Op('(')));
        if paren {
            self.k += 1;
        }
        let e = match self.next() {
            Some(Tok::Int(n)) => {
                i64::try_from(n).ok().filter(|e| *e <= 4096).ok_or_else(|| self.err(ParseErrorKind::BadExponent))?
            }
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            _ => {
                self.k -= 1;
                return Err(self.err(ParseErrorKind::Expected("integer exponent")));
            }
        };
        if paren {
            self.expect(')', "`)`")?;
        }
        Ok(if neg { -e } else { e })
    }

    fn prefix(&mut self) -> Result<RationalFunction, ParseError> {
        let pos = self.pos();
        match self.next() {
            None => Err(ParseError { pos, kind: ParseErrorKind::UnexpectedEnd }),
            Some(Tok::Int(n)) => Ok(self.constant(RadicalNumber::from_rational(Rational::from_integer(n)))),
            Some(Tok::Op('-')) => Ok(self.expr(UNARY_BP)?.neg_ref()),
            Some(Tok::Op('+')) => self.expr(UNARY_BP),
            Some(Tok::Op('(')) => {
                let v = self.expr(0)?;
                self.expect(')', "`)`")?;
                Ok(v)
            }
            Some(Tok::Op(c)) => Err(ParseError { pos, kind: ParseErrorKind::UnexpectedChar(c) }),
            Some(Tok::Ident(name)) => self.ident(&name, pos),
        }
    }

    fn call_arg(&mut self) -> Result<RationalFunction, ParseError> {
        self.expect('(', "`(`")?;
        let v = self.expr(0)?;
        self.expect(')', "`)`")?;
        Ok(v)
    }

    fn ident(&mut self, name: &str, pos: usize) -> Result<RationalFunction, ParseError> {
        let nvars = self.ctx.nvars;
        match name {
            "i" => return Ok(self.constant(RadicalNumber::i())),
            "sqrt" => {
                let arg_pos = self.pos();
                let v = self.call_arg()?;
                let q = if v.is_zero() {
                    Some(Rational::default())
                } else if v.is_polynomial() {
                    v.num().as_constant().and_then(|c| c.as_rational())
                } else {
                    None
                };
                let q = q.ok_or(ParseError { pos: arg_pos, kind: ParseErrorKind::NonRationalRadicand })?;
                if q.is_negative() {
                    return Err(ParseError {
                        pos: arg_pos,
                        kind: ParseErrorKind::NegativeRadicand(crate::algebra::fmt_rational(&q)),
                    });
                }
                let r = RadicalNumber::sqrt_rational(&q)
                    .map_err(|_| ParseError { pos: arg_pos, kind: ParseErrorKind::NonRationalRadicand })?;
                return Ok(self.constant(r));
            }
            "conj" => return Ok(self.call_arg()?.conj()),
            "re" => {
                let v = self.call_arg()?;
                let half = RadicalNumber::from_rational(crate::algebra::rat(1, 2));
                return Ok(v.add_ref(&v.conj()).scale(&half));
            }
            "im" => {
                let v = self.call_arg()?;
                // (v − v̄)/(2i) = −i(v − v̄)/2
                let c = RadicalNumber::from_gaussian(GaussianRational::new(
                    Rational::default(),
                    -crate::algebra::rat(1, 2),
                ));
                return Ok(v.sub_ref(&v.conj()).scale(&c));
            }
            _ => {}
        }
        if let Some(b) = self.ctx.bindings.get(name) {
            return Ok(b.clone());
        }
        if let Some(j) = self.ctx.variable(name) {
            return Ok(RationalFunction::from_poly(HermitianPoly::var(nvars, j)));
        }
        Err(ParseError { pos, kind: ParseErrorKind::UnknownIdent(name.to_string()) })
    }
}

/// Parses a rational literal such as `3/5`, `-2` or `0`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let src = src.trim();
    let (n, d) = match src.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (src, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d == num_bigint::BigInt::default() {
        return None;
    }
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Monomial};

    #[test]
    fn sqrt2_zw() {
        let f = parse_expression("sqrt(2)*z*w", 2).unwrap();
        assert!(f.is_polynomial());
        let c = f.num().coeff(&Monomial::new(&[1, 1], &[0, 0])).unwrap();
        assert_eq!(c, &RadicalNumber::sqrt_term(GaussianRational::from_int(1), 2));
    }

    #[test]
    fn division_by_sqrt_folds() {
        let f = parse_expression("(z^2 - z^2*w)/sqrt(2)", 2).unwrap();
        assert!(f.is_polynomial());
        let c = f.num().coeff(&Monomial::new(&[2, 0], &[0, 0])).unwrap();
        assert_eq!(c, &RadicalNumber::sqrt_term(GaussianRational::real(rat(1, 2)), 2));
    }

    #[test]
    fn genuine_rational_function() {
        let f = parse_expression("z/(1 - w/2)", 2).unwrap();
        assert!(!f.is_polynomial());
    }

    #[test]
    fn precedence() {
        let a = parse_expression("-z^2", 2).unwrap();
        let b = parse_expression("-(z*z)", 2).unwrap();
        assert!(a.eq_exact(&b));
        let c = parse_expression("1 + 2*z - w/2", 2).unwrap();
        let d = parse_expression("(1 + (2*z)) - (w/2)", 2).unwrap();
        assert!(c.eq_exact(&d));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expression("z + $", 2).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(matches!(parse_expression("sqrt(-2)", 2).unwrap_err().kind, ParseErrorKind::NegativeRadicand(_)));
        assert!(matches!(parse_expression("z/0", 2).unwrap_err().kind, ParseErrorKind::ZeroDenominator));
        assert!(matches!(parse_expression("q", 2).unwrap_err().kind, ParseErrorKind::UnknownIdent(_)));
        assert!(matches!(parse_expression("sqrt(z)", 2).unwrap_err().kind, ParseErrorKind::NonRationalRadicand));
    }

    #[test]
    fn bindings_and_params() {
        let ctx = ParseContext::new(2)
            .with_param("t", RadicalNumber::from_rational(rat(1, 2)))
            .with_binding("s", parse_expression("z*conj(z)", 2).unwrap());
        let f = ctx.parse("sqrt(1 - t^2)*s").unwrap();
        let g = parse_expression("sqrt(3)/2*z*conj(z)", 2).unwrap();
        assert!(f.eq_exact(&g));
    }

    #[test]
    fn real_and_imaginary_parts() {
        let f = parse_expression("re(z) + i*im(z)", 2).unwrap();
        assert!(f.eq_exact(&parse_expression("z", 2).unwrap()));
    }

    #[test]
    fn indexed_variables() {
        let f = parse_expression("z1*z3", 3).unwrap();
        assert_eq!(f.num().degree(), 2);
        assert!(parse_expression("z4", 3).is_err());
    }
}
