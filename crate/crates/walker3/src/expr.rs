//! Expression trees: exact rational constants, chart coordinates, named
//! parameters, elementary functions, opaque function symbols carrying
//! derivative multi-indices, and antiderivative nodes.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Chart coordinates; displayed as x, y, z with 1-based indices 1, 2, 3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        match self {
            Coord::X => 0,
            Coord::Y => 1,
            Coord::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Coord {
        Coord::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        }
    }

    pub fn from_name(s: &str) -> Option<Coord> {
        match s {
            "x" => Some(Coord::X),
            "y" => Some(Coord::Y),
            "z" => Some(Coord::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

/// A named scalar parameter. `sign` marks a sign symbol (eps = +-1),
/// which obeys eps^2 = 1 and 1/eps = eps under simplification.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Param {
    pub name: String,
    pub sign: bool,
}

/// An opaque function symbol with a fixed coordinate argument list and
/// per-argument partial-derivative orders, so differentiation stays closed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Opaque {
    pub name: String,
    pub args: Vec<Coord>,
    pub orders: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Rational(Rat),
    Coordinate(Coord),
    Param(Param),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, Rat),
    Apply(Func, Box<Expr>),
    Opaque(Opaque),
    /// Definite integral of the integrand with respect to `Coord`, from the
    /// rational lower bound up to the current value of that coordinate.
    Antideriv(Box<Expr>, Coord, Rat),
}

impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Rational(int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::Rational(rat(n, d))
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::Coordinate(c)
    }

    pub fn x() -> Expr {
        Expr::Coordinate(Coord::X)
    }

    pub fn y() -> Expr {
        Expr::Coordinate(Coord::Y)
    }

    pub fn z() -> Expr {
        Expr::Coordinate(Coord::Z)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(Param {
            name: name.to_string(),
            sign: false,
        })
    }

    /// A sign symbol: a parameter constrained to the values +1 and -1.
    pub fn sign(name: &str) -> Expr {
        Expr::Param(Param {
            name: name.to_string(),
            sign: true,
        })
    }

    pub fn opaque(name: &str, args: &[Coord]) -> Expr {
        Expr::Opaque(Opaque {
            name: name.to_string(),
            args: args.to_vec(),
            orders: vec![0; args.len()],
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_one())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::add_many(vec![a, b])
    }

    pub fn add_many(terms: Vec<Expr>) -> Expr {
        let mut out: Vec<Expr> = Vec::new();
        let mut konst = int(0);
        for t in terms {
            match t {
                Expr::Rational(r) => konst += r,
                Expr::Sum(inner) => {
                    for s in inner {
                        match s {
                            Expr::Rational(r) => konst += r,
                            other => out.push(other),
                        }
                    }
                }
                other => out.push(other),
            }
        }
        if !konst.is_zero() {
            out.push(Expr::Rational(konst));
        }
        match out.len() {
            0 => Expr::num(0),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::mul_many(vec![a, b])
    }

    pub fn mul_many(factors: Vec<Expr>) -> Expr {
        let mut out: Vec<Expr> = Vec::new();
        let mut konst = int(1);
        for f in factors {
            match f {
                Expr::Rational(r) => konst *= r,
                Expr::Product(inner) => {
                    for g in inner {
                        match g {
                            Expr::Rational(r) => konst *= r,
                            other => out.push(other),
                        }
                    }
                }
                other => out.push(other),
            }
        }
        if konst.is_zero() {
            return Expr::num(0);
        }
        if out.is_empty() {
            return Expr::Rational(konst);
        }
        if !konst.is_one() {
            out.insert(0, Expr::Rational(konst));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Product(out)
        }
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::mul(Expr::num(-1), e)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(a, Expr::neg(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::mul(a, Expr::pow(b, int(-1)))
    }

    pub fn pow(base: Expr, exp: Rat) -> Expr {
        if exp.is_zero() {
            return Expr::num(1);
        }
        if exp.is_one() {
            return base;
        }
        if let Expr::Rational(r) = &base {
            if exp.is_integer() && !r.is_zero() {
                return Expr::Rational(rat_pow_int(r, &exp.to_integer()));
            }
        }
        if let Expr::Power(inner, p) = &base {
            // (b^p)^q = b^(pq) is unconditionally valid for integer q.
            if exp.is_integer() {
                return Expr::pow((**inner).clone(), p * &exp);
            }
        }
        Expr::Power(Box::new(base), exp)
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, int(n))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::pow(e, rat(1, 2))
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        if let Expr::Rational(r) = &arg {
            match f {
                Func::Exp if r.is_zero() => return Expr::num(1),
                Func::Log if r.is_one() => return Expr::num(0),
                Func::Sin if r.is_zero() => return Expr::num(0),
                Func::Cos if r.is_zero() => return Expr::num(1),
                _ => {}
            }
        }
        Expr::Apply(f, Box::new(arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::apply(Func::Exp, arg)
    }

    pub fn log(arg: Expr) -> Expr {
        Expr::apply(Func::Log, arg)
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::apply(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::apply(Func::Cos, arg)
    }

    pub fn antideriv(integrand: Expr, var: Coord, lower: Rat) -> Expr {
        if integrand.is_zero() {
            return Expr::num(0);
        }
        Expr::Antideriv(Box::new(integrand), var, lower)
    }

    /// True if the coordinate occurs anywhere in the tree, including as an
    /// opaque argument or an antiderivative integration variable.
    pub fn uses_coord(&self, c: Coord) -> bool {
        match self {
            Expr::Rational(_) | Expr::Param(_) => false,
            Expr::Coordinate(d) => *d == c,
            Expr::Sum(v) | Expr::Product(v) => v.iter().any(|e| e.uses_coord(c)),
            Expr::Power(b, _) => b.uses_coord(c),
            Expr::Apply(_, a) => a.uses_coord(c),
            Expr::Opaque(o) => o.args.contains(&c),
            Expr::Antideriv(g, v, _) => *v == c || g.uses_coord(c),
        }
    }

    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Sum(v) | Expr::Product(v) => {
                for e in v {
                    e.visit(f);
                }
            }
            Expr::Power(b, _) => b.visit(f),
            Expr::Apply(_, a) => a.visit(f),
            Expr::Antideriv(g, _, _) => g.visit(f),
            _ => {}
        }
    }
}

pub(crate) fn rat_pow_int(base: &Rat, exp: &BigInt) -> Rat {
    let mut n = exp.clone();
    let mut b = base.clone();
    if n.is_negative() {
        b = b.recip();
        n = -n;
    }
    let mut acc = int(1);
    let two = BigInt::from(2);
    while n > BigInt::from(0) {
        if &n % &two == BigInt::from(1) {
            acc *= &b;
        }
        b = &b * &b;
        n /= &two;
    }
    acc
}

impl core::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl core::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl core::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

// --- rendering -----------------------------------------------------------
//
// The textual form round-trips through parse::parse_expr. Precedence levels:
// sums (lowest), products, prefix minus, powers, atoms.

fn fmt_rat(r: &Rat, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(out, "{}", r.numer())
    } else {
        write!(out, "{}/{}", r.numer(), r.denom())
    }
}

fn needs_parens_in_product(e: &Expr) -> bool {
    match e {
        Expr::Sum(_) => true,
        Expr::Rational(r) => r.is_negative() || !r.is_integer(),
        _ => false,
    }
}

fn fmt_factor(e: &Expr, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens_in_product(e) {
        write!(out, "({})", e)
    } else {
        write!(out, "{}", e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => fmt_rat(r, out),
            Expr::Coordinate(c) => write!(out, "{}", c.name()),
            Expr::Param(p) => write!(out, "{}", p.name),
            Expr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    // Pull a leading minus out of the term so sums read
                    // "a - b" rather than "a + -1*b".
                    let (neg, body) = split_negation(t);
                    if i == 0 {
                        if neg {
                            write!(out, "-")?;
                        }
                    } else if neg {
                        write!(out, " - ")?;
                    } else {
                        write!(out, " + ")?;
                    }
                    match &body {
                        Expr::Sum(_) => write!(out, "({})", body)?,
                        _ => write!(out, "{}", body)?,
                    }
                }
                Ok(())
            }
            Expr::Product(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(out, "*")?;
                    }
                    if i == 0 {
                        // A leading rational keeps its sign: "-2*x" reparses.
                        match f {
                            Expr::Rational(r) => fmt_rat(r, out)?,
                            _ => fmt_factor(f, out)?,
                        }
                    } else {
                        fmt_factor(f, out)?;
                    }
                }
                Ok(())
            }
            Expr::Power(b, e) => {
                match &**b {
                    Expr::Coordinate(_) | Expr::Param(_) | Expr::Apply(..) | Expr::Opaque(_) => {
                        write!(out, "{}", b)?
                    }
                    Expr::Rational(r) if !r.is_negative() && r.is_integer() => {
                        write!(out, "{}", b)?
                    }
                    _ => write!(out, "({})", b)?,
                }
                if e.is_integer() && !e.is_negative() {
                    write!(out, "^")?;
                    fmt_rat(e, out)
                } else {
                    write!(out, "^(")?;
                    fmt_rat(e, out)?;
                    write!(out, ")")
                }
            }
            Expr::Apply(f, a) => write!(out, "{}({})", f.name(), a),
            Expr::Opaque(o) => {
                let mut depth = 0usize;
                for ord in &o.orders {
                    if *ord > 0 {
                        depth += 1;
                    }
                }
                for _ in 0..depth {
                    write!(out, "D(")?;
                }
                write!(out, "{}(", o.name)?;
                for (i, a) in o.args.iter().enumerate() {
                    if i > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{}", a.name())?;
                }
                write!(out, ")")?;
                for (a, ord) in o.args.iter().zip(&o.orders) {
                    if *ord > 0 {
                        write!(out, ", {}, {})", a.name(), ord)?;
                    }
                }
                Ok(())
            }
            Expr::Antideriv(g, v, lb) => {
                write!(out, "INT({}, {}, ", g, v.name())?;
                fmt_rat(lb, out)?;
                write!(out, ")")
            }
        }
    }
}

/// Splits `-k*rest` / negative rationals into (true, positive body).
fn split_negation(e: &Expr) -> (bool, Expr) {
    match e {
        Expr::Rational(r) if r.is_negative() => (true, Expr::Rational(-r.clone())),
        Expr::Product(fs) => {
            if let Some(Expr::Rational(r)) = fs.first() {
                if r.is_negative() {
                    let mut rest = fs[1..].to_vec();
                    let k = -r.clone();
                    if !k.is_one() {
                        rest.insert(0, Expr::Rational(k));
                    }
                    return (
                        true,
                        if rest.len() == 1 {
                            rest.pop().unwrap()
                        } else {
                            Expr::Product(rest)
                        },
                    );
                }
            }
            (false, e.clone())
        }
        _ => (false, e.clone()),
    }
}
