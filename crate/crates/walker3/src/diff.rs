//! Partial differentiation. The recursion produces a raw tree; the public
//! entry points run the result through the canonical simplifier.

use alloc::vec::Vec;

use crate::canon::simplify;
use crate::expr::{int, Coord, Expr, Func};

fn d(e: &Expr, v: Coord) -> Expr {
    match e {
        Expr::Rational(_) | Expr::Param(_) => Expr::num(0),
        Expr::Coordinate(c) => {
            if *c == v {
                Expr::num(1)
            } else {
                Expr::num(0)
            }
        }
        Expr::Sum(terms) => Expr::add_many(terms.iter().map(|t| d(t, v)).collect()),
        Expr::Product(fs) => {
            let mut terms: Vec<Expr> = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let df = d(f, v);
                if df.is_zero() {
                    continue;
                }
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, g) in fs.iter().enumerate() {
                    prod.push(if i == j { df.clone() } else { g.clone() });
                }
                terms.push(Expr::mul_many(prod));
            }
            Expr::add_many(terms)
        }
        Expr::Power(b, r) => {
            let db = d(b, v);
            if db.is_zero() {
                return Expr::num(0);
            }
            let dec = r.clone() - crate::expr::int(1);
            Expr::mul_many(alloc::vec![
                Expr::Rational(r.clone()),
                Expr::pow((**b).clone(), dec),
                db,
            ])
        }
        Expr::Apply(f, u) => {
            let du = d(u, v);
            if du.is_zero() {
                return Expr::num(0);
            }
            let outer = match f {
                Func::Exp => Expr::exp((**u).clone()),
                Func::Log => Expr::pow((**u).clone(), int(-1)),
                Func::Sin => Expr::cos((**u).clone()),
                Func::Cos => Expr::neg(Expr::sin((**u).clone())),
            };
            Expr::mul(outer, du)
        }
        Expr::Opaque(o) => match o.args.iter().position(|a| *a == v) {
            Some(i) => {
                let mut bumped = o.clone();
                bumped.orders[i] += 1;
                Expr::Opaque(bumped)
            }
            None => Expr::num(0),
        },
        Expr::Antideriv(g, w, lb) => {
            if *w == v {
                (**g).clone()
            } else {
                Expr::antideriv(d(g, v), *w, lb.clone())
            }
        }
    }
}

/// d e / d v, canonically simplified.
pub fn diff(e: &Expr, v: Coord) -> Expr {
    simplify(&d(e, v))
}

/// n-th partial derivative with respect to v.
pub fn diff_n(e: &Expr, v: Coord, n: u32) -> Expr {
    let mut acc = if n == 0 { simplify(e) } else { e.clone() };
    for k in 0..n {
        acc = if k + 1 == n { diff(&acc, v) } else { d(&acc, v) };
    }
    acc
}

/// Raw (unsimplified) derivative; used internally where intermediate
/// simplification would be wasted work.
pub fn diff_raw(e: &Expr, v: Coord) -> Expr {
    d(e, v)
}
