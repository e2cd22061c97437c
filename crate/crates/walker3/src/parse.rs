//! Text syntax for expressions.
//!
//! Precedence (loosest to tightest): `+ -`, then `* /` and implicit
//! multiplication, then unary minus, then `^` (right-associative, with a
//! constant rational exponent). `x`, `y`, `z` are the coordinates, `eps`
//! is the sign symbol, `exp log sin cos sqrt` are the built-in functions,
//! `D(e, v[, n])` differentiates, `INT(e, v, lo)` is an antiderivative
//! with a constant lower limit, `name(coords...)` introduces an opaque
//! function symbol, and any other identifier is a free parameter.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diff::diff;
use crate::expr::{int, Coord, Expr, Func, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "parse error at offset {}: expected {}", self.offset, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => { out.push((Tok::LParen, i)); i += 1; }
            b')' => { out.push((Tok::RParen, i)); i += 1; }
            b',' => { out.push((Tok::Comma, i)); i += 1; }
            b'+' => { out.push((Tok::Plus, i)); i += 1; }
            b'-' => { out.push((Tok::Minus, i)); i += 1; }
            b'*' => { out.push((Tok::Star, i)); i += 1; }
            b'/' => { out.push((Tok::Slash, i)); i += 1; }
            b'^' => { out.push((Tok::Caret, i)); i += 1; }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let mut frac_digits = 0u32;
                if i < b.len() && b[i] == b'.' {
                    i += 1;
                    let fs = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac_digits = (i - fs) as u32;
                    if i == start + 1 {
                        return Err(ParseError {
                            offset: start,
                            expected: "digits around decimal point".to_string(),
                        });
                    }
                }
                let digits: String = src[start..i].chars().filter(|c| *c != '.').collect();
                let n: BigInt = digits.parse().map_err(|_| ParseError {
                    offset: start,
                    expected: "number".to_string(),
                })?;
                let den = BigInt::from(10u32).pow(frac_digits);
                out.push((Tok::Num(Rat::new(n, den)), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < b.len()
                    && (b[i].is_ascii_alphanumeric() || b[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: "expression token".to_string(),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

const BP_ADD: (u8, u8) = (1, 2);
const BP_MUL: (u8, u8) = (3, 4);
const BP_PREFIX: u8 = 5;
const BP_POW: (u8, u8) = (7, 6);

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn expr_bp(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = match self.next() {
            Some(Tok::Num(r)) => Expr::Rational(r),
            Some(Tok::Minus) => {
                let rhs = self.expr_bp(BP_PREFIX)?;
                Expr::neg(rhs)
            }
            Some(Tok::LParen) => {
                let e = self.expr_bp(0)?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            Some(Tok::Ident(name)) => self.ident(name)?,
            _ => return Err(self.err("expression")),
        };
        loop {
            let (op, l_bp, r_bp) = match self.peek() {
                Some(Tok::Plus) => ('+', BP_ADD.0, BP_ADD.1),
                Some(Tok::Minus) => ('-', BP_ADD.0, BP_ADD.1),
                Some(Tok::Star) => ('*', BP_MUL.0, BP_MUL.1),
                Some(Tok::Slash) => ('/', BP_MUL.0, BP_MUL.1),
                Some(Tok::Caret) => ('^', BP_POW.0, BP_POW.1),
                // adjacency: a primary starts here, so multiply
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    ('i', BP_MUL.0, BP_MUL.1)
                }
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            if op != 'i' {
                self.pos += 1;
            }
            if op == '^' {
                let at = self.offset();
                let rhs = self.expr_bp(r_bp)?;
                let r = constant_of(&rhs).ok_or(ParseError {
                    offset: at,
                    expected: "constant rational exponent".to_string(),
                })?;
                lhs = Expr::pow(lhs, r);
                continue;
            }
            let rhs = self.expr_bp(r_bp)?;
            lhs = match op {
                '+' => Expr::add(lhs, rhs),
                '-' => Expr::sub(lhs, rhs),
                '/' => Expr::div(lhs, rhs),
                _ => Expr::mul(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn ident(&mut self, name: String) -> Result<Expr, ParseError> {
        // Coordinates and the sign symbol are never callable: `x(y)` is a
        // product.
        if let Some(c) = Coord::from_name(&name) {
            return Ok(Expr::coord(c));
        }
        if name == "eps" {
            return Ok(Expr::sign("eps"));
        }
        if self.peek() != Some(&Tok::LParen) {
            return Ok(Expr::param(&name));
        }
        self.pos += 1; // consume `(`
        let out = match name.as_str() {
            "exp" | "log" | "sin" | "cos" | "sqrt" => {
                let arg = self.expr_bp(0)?;
                match name.as_str() {
                    "exp" => Expr::apply(Func::Exp, arg),
                    "log" => Expr::apply(Func::Log, arg),
                    "sin" => Expr::apply(Func::Sin, arg),
                    "cos" => Expr::apply(Func::Cos, arg),
                    _ => Expr::sqrt(arg),
                }
            }
            "D" => {
                let e = self.expr_bp(0)?;
                self.expect(Tok::Comma, "`,`")?;
                let v = self.coord_arg()?;
                let n = if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    let at = self.offset();
                    let ne = self.expr_bp(0)?;
                    let r = constant_of(&ne)
                        .filter(|r| r.is_integer() && !r.numer().is_zero() && *r > int(0))
                        .ok_or(ParseError {
                            offset: at,
                            expected: "positive integer derivative order".to_string(),
                        })?;
                    use num_traits::ToPrimitive;
                    r.to_integer().to_u32().ok_or(ParseError {
                        offset: at,
                        expected: "small derivative order".to_string(),
                    })?
                } else {
                    1
                };
                let mut acc = e;
                for _ in 0..n {
                    acc = diff(&acc, v);
                }
                acc
            }
            "INT" => {
                let e = self.expr_bp(0)?;
                self.expect(Tok::Comma, "`,`")?;
                let v = self.coord_arg()?;
                self.expect(Tok::Comma, "`,`")?;
                let at = self.offset();
                let lo = self.expr_bp(0)?;
                let r = constant_of(&lo).ok_or(ParseError {
                    offset: at,
                    expected: "constant lower limit".to_string(),
                })?;
                Expr::antideriv(e, v, r)
            }
            _ => {
                // opaque function symbol over coordinates
                let mut args = Vec::new();
                loop {
                    args.push(self.coord_arg()?);
                    match self.peek() {
                        Some(Tok::Comma) => {
                            self.pos += 1;
                        }
                        _ => break,
                    }
                }
                Expr::opaque(&name, &args)
            }
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn coord_arg(&mut self) -> Result<Coord, ParseError> {
        match self.next() {
            Some(Tok::Ident(n)) => Coord::from_name(&n).ok_or_else(|| ParseError {
                offset: self.toks[self.pos - 1].1,
                expected: "coordinate name".to_string(),
            }),
            _ => Err(ParseError {
                offset: self.offset(),
                expected: "coordinate name".to_string(),
            }),
        }
    }
}

/// Folds an already-constructed expression down to a rational constant.
fn constant_of(e: &Expr) -> Option<Rat> {
    match crate::canon::simplify(e) {
        Expr::Rational(r) => Some(r),
        _ => None,
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr_bp(0)?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            offset: p.offset(),
            expected: format!("end of input, found extra token"),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("a+b*c"), p("a+(b*c)"));
        assert_eq!(p("a*b+c"), p("(a*b)+c"));
        assert_eq!(p("a/b/c"), p("(a/b)/c"));
        assert_eq!(p("x^2^3"), p("x^8"));
        assert_eq!(p("-x^2"), p("-(x^2)"));
        assert_eq!(p("2x y"), p("2*x*y"));
        assert_eq!(p("x(y)"), p("x*y"));
        assert_eq!(p("a-b-c"), p("(a-b)-c"));
    }

    #[test]
    fn numbers() {
        assert_eq!(p("1.5"), Expr::ratio(3, 2));
        assert_eq!(p("0.25"), Expr::ratio(1, 4));
        assert_eq!(p("10"), Expr::num(10));
    }

    #[test]
    fn names() {
        assert_eq!(p("x"), Expr::x());
        assert_eq!(p("eps"), Expr::sign("eps"));
        assert_eq!(p("beta"), Expr::param("beta"));
        assert_eq!(p("F(z)"), Expr::opaque("F", &[Coord::Z]));
        assert_eq!(p("a(y,z)"), Expr::opaque("a", &[Coord::Y, Coord::Z]));
    }

    #[test]
    fn builtins_and_operators() {
        assert_eq!(p("sqrt(2)"), Expr::sqrt(Expr::num(2)));
        assert_eq!(p("exp(x+z)"), Expr::exp(Expr::add(Expr::x(), Expr::z())));
        assert_eq!(
            p("INT(exp(y), y, 0)"),
            Expr::antideriv(Expr::exp(Expr::y()), Coord::Y, rat(0, 1))
        );
        // D folds immediately
        assert_eq!(p("D(x^3, x)"), p("3x^2"));
        assert_eq!(p("D(x^3, x, 2)"), p("6x"));
        assert_eq!(p("D(F(z), z)"), {
            let mut o = match Expr::opaque("F", &[Coord::Z]) {
                Expr::Opaque(o) => o,
                _ => unreachable!(),
            };
            o.orders[0] = 1;
            Expr::Opaque(o)
        });
    }

    #[test]
    fn exponent_must_be_constant() {
        assert!(parse("x^y").is_err());
        assert!(parse("x^(1/2)").is_ok());
        assert!(parse("x^-2").is_ok());
        assert_eq!(p("x^-2"), Expr::powi(Expr::x(), -2));
        assert_eq!(p("x^(3/2)"), Expr::pow(Expr::x(), rat(3, 2)));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("1+").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse("(x+y").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse("x$").is_err());
        assert!(parse("F(w)").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn roundtrip_through_display() {
        for src in [
            "2*x*z - y^2 + eps",
            "exp(x + z)*cos(sqrt(2)*y)",
            "x^2 + z*x + 1",
            "-1/2*y^2",
            "INT(exp(2*y), y, 0) + F(z)",
        ] {
            let e = crate::canon::simplify(&p(src));
            let back = crate::canon::simplify(&p(&e.to_string()));
            assert_eq!(e, back, "roundtrip failed for {src}: rendered {e}");
        }
    }
}
