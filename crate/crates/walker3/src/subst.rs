//! Coordinate substitution (capture-aware for antiderivative dummies).
//!
//! Substituting a coordinate that an opaque symbol depends on is not
//! representable; such nodes are left untouched, so callers must only
//! substitute coordinates their opaques do not carry.

use alloc::boxed::Box;

use crate::expr::{Coord, Expr};

/// Replaces every occurrence of the named parameter.
pub fn subst_param(e: &Expr, name: &str, r: &Expr) -> Expr {
    match e {
        Expr::Param(p) if p.name == name => r.clone(),
        Expr::Rational(_) | Expr::Coordinate(_) | Expr::Param(_) | Expr::Opaque(_) => e.clone(),
        Expr::Sum(ts) => Expr::add_many(ts.iter().map(|t| subst_param(t, name, r)).collect()),
        Expr::Product(fs) => Expr::mul_many(fs.iter().map(|f| subst_param(f, name, r)).collect()),
        Expr::Power(b, k) => Expr::pow(subst_param(b, name, r), k.clone()),
        Expr::Apply(f, u) => Expr::Apply(*f, Box::new(subst_param(u, name, r))),
        Expr::Antideriv(g, w, lb) => Expr::antideriv(subst_param(g, name, r), *w, lb.clone()),
    }
}

pub fn subst(e: &Expr, v: Coord, r: &Expr) -> Expr {
    match e {
        Expr::Rational(_) | Expr::Param(_) | Expr::Opaque(_) => e.clone(),
        Expr::Coordinate(c) => {
            if *c == v {
                r.clone()
            } else {
                e.clone()
            }
        }
        Expr::Sum(ts) => Expr::add_many(ts.iter().map(|t| subst(t, v, r)).collect()),
        Expr::Product(fs) => Expr::mul_many(fs.iter().map(|f| subst(f, v, r)).collect()),
        Expr::Power(b, k) => Expr::pow(subst(b, v, r), k.clone()),
        Expr::Apply(f, u) => Expr::Apply(*f, Box::new(subst(u, v, r))),
        Expr::Antideriv(g, w, lb) => {
            if *w == v {
                // v is bound inside the integral.
                e.clone()
            } else {
                Expr::antideriv(subst(g, v, r), *w, lb.clone())
            }
        }
    }
}
