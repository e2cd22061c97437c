//! Floating-point evaluation of expressions at a point, with statistics
//! used by the randomized zero tester: the largest intermediate magnitude
//! (for tolerance scaling) and the smallest denominator magnitude (to
//! reject samples too close to a pole).

use alloc::collections::BTreeMap;
use alloc::string::String;

use num_traits::{Signed, ToPrimitive};

use crate::diff::diff_n;
use crate::expr::{Coord, Expr, Func, Rat};

#[derive(Clone, Debug, Default)]
pub struct Env {
    pub coords: [f64; 3],
    pub params: BTreeMap<String, f64>,
    /// Closed forms for opaque symbols, by name; differentiated on demand.
    pub opaques: BTreeMap<String, Expr>,
}

impl Env {
    pub fn at(x: f64, y: f64, z: f64) -> Env {
        Env {
            coords: [x, y, z],
            ..Env::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    UnboundParam(String),
    UnboundOpaque(String),
    /// Negative base under a fractional power, log of a non-positive
    /// value, or division by (numerical) zero.
    Domain,
    NonFinite,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalStats {
    pub max_mag: f64,
    pub min_den: f64,
}

impl Default for EvalStats {
    fn default() -> EvalStats {
        EvalStats {
            max_mag: 0.0,
            min_den: f64::INFINITY,
        }
    }
}

impl EvalStats {
    fn note(&mut self, v: f64) {
        let a = libm::fabs(v);
        if a > self.max_mag {
            self.max_mag = a;
        }
    }

    fn note_den(&mut self, v: f64) {
        let a = libm::fabs(v);
        if a < self.min_den {
            self.min_den = a;
        }
    }
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn eval(e: &Expr, env: &Env, st: &mut EvalStats) -> Result<f64, EvalError> {
    let v = eval_inner(e, env, st)?;
    if !v.is_finite() {
        return Err(EvalError::NonFinite);
    }
    st.note(v);
    Ok(v)
}

fn eval_inner(e: &Expr, env: &Env, st: &mut EvalStats) -> Result<f64, EvalError> {
    match e {
        Expr::Rational(r) => Ok(rat_f64(r)),
        Expr::Coordinate(c) => Ok(env.coords[c.index()]),
        Expr::Param(p) => env
            .params
            .get(&p.name)
            .copied()
            .ok_or_else(|| EvalError::UnboundParam(p.name.clone())),
        Expr::Sum(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval(t, env, st)?;
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= eval(f, env, st)?;
            }
            Ok(acc)
        }
        Expr::Power(b, r) => {
            let base = eval(b, env, st)?;
            if r.is_integer() {
                let n = r.to_integer().to_i32().ok_or(EvalError::NonFinite)?;
                if n < 0 {
                    st.note_den(base);
                    if base == 0.0 {
                        return Err(EvalError::Domain);
                    }
                }
                return Ok(libm::pow(base, n as f64));
            }
            if base < 0.0 {
                return Err(EvalError::Domain);
            }
            if r.is_negative() {
                st.note_den(base);
                if base == 0.0 {
                    return Err(EvalError::Domain);
                }
            }
            Ok(libm::pow(base, rat_f64(r)))
        }
        Expr::Apply(f, u) => {
            let a = eval(u, env, st)?;
            match f {
                Func::Exp => Ok(libm::exp(a)),
                Func::Log => {
                    st.note_den(a);
                    if a <= 0.0 {
                        return Err(EvalError::Domain);
                    }
                    Ok(libm::log(a))
                }
                Func::Sin => Ok(libm::sin(a)),
                Func::Cos => Ok(libm::cos(a)),
            }
        }
        Expr::Opaque(o) => {
            let base = env
                .opaques
                .get(&o.name)
                .ok_or_else(|| EvalError::UnboundOpaque(o.name.clone()))?;
            let mut d = base.clone();
            for (c, n) in o.args.iter().zip(&o.orders) {
                if *n > 0 {
                    d = diff_n(&d, *c, *n);
                }
            }
            eval(&d, env, st)
        }
        Expr::Antideriv(g, v, lb) => {
            let hi = env.coords[v.index()];
            let lo = rat_f64(lb);
            integrate(g, *v, lo, hi, env, st)
        }
    }
}

/// Adaptive Simpson quadrature of g(s) over s in [lo, hi], where s stands
/// for the coordinate v.
fn integrate(
    g: &Expr,
    v: Coord,
    lo: f64,
    hi: f64,
    env: &Env,
    st: &mut EvalStats,
) -> Result<f64, EvalError> {
    if lo == hi {
        return Ok(0.0);
    }
    let f = |s: f64, st: &mut EvalStats| -> Result<f64, EvalError> {
        let mut e2 = env.clone();
        e2.coords[v.index()] = s;
        eval(g, &e2, st)
    };
    let fa = f(lo, st)?;
    let fb = f(hi, st)?;
    let m = 0.5 * (lo + hi);
    let fm = f(m, st)?;
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, lo, hi, fa, fm, fb, whole, 1e-10, 30, st)
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64, &mut EvalStats) -> Result<f64, EvalError>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    st: &mut EvalStats,
) -> Result<f64, EvalError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm, st)?;
    let frm = f(rm, st)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let l = simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st)?;
    let r = simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st)?;
    Ok(l + r)
}

/// Convenience wrapper used by tests: evaluate with coordinate values and
/// (name, value) parameter pairs.
pub fn eval_at(e: &Expr, coords: [f64; 3], params: &[(&str, f64)]) -> Result<f64, EvalError> {
    let mut env = Env {
        coords,
        ..Env::default()
    };
    for (n, v) in params {
        env.params.insert(String::from(*n), *v);
    }
    let mut st = EvalStats::default();
    eval(e, &env, &mut st)
}

/// Central finite difference of order h^2; testing aid.
pub fn finite_diff(
    e: &Expr,
    v: Coord,
    env: &Env,
    h: f64,
) -> Result<f64, EvalError> {
    let mut st = EvalStats::default();
    let mut lo = env.clone();
    lo.coords[v.index()] -= h;
    let mut hi = env.clone();
    hi.coords[v.index()] += h;
    let a = eval(e, &lo, &mut st)?;
    let b = eval(e, &hi, &mut st)?;
    Ok((b - a) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    #[test]
    fn arithmetic_and_functions() {
        // 2xz - y^2 at (1, 2, 3) = 6 - 4 = 2
        let e = Expr::sub(
            Expr::mul_many(alloc::vec![Expr::num(2), Expr::x(), Expr::z()]),
            Expr::powi(Expr::y(), 2),
        );
        assert_eq!(eval_at(&e, [1.0, 2.0, 3.0], &[]).unwrap(), 2.0);
        let t = Expr::add(
            Expr::powi(Expr::sin(Expr::x()), 2),
            Expr::powi(Expr::cos(Expr::x()), 2),
        );
        assert!((eval_at(&t, [0.7, 0.0, 0.0], &[]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let e = Expr::div(Expr::num(1), Expr::x());
        assert_eq!(eval_at(&e, [0.0, 0.0, 0.0], &[]), Err(EvalError::Domain));
        let s = Expr::sqrt(Expr::x());
        assert_eq!(eval_at(&s, [-1.0, 0.0, 0.0], &[]), Err(EvalError::Domain));
        let l = Expr::log(Expr::x());
        assert_eq!(eval_at(&l, [-1.0, 0.0, 0.0], &[]), Err(EvalError::Domain));
    }

    #[test]
    fn unbound_and_bound_params() {
        let e = Expr::param("alpha");
        assert!(matches!(
            eval_at(&e, [0.0; 3], &[]),
            Err(EvalError::UnboundParam(_))
        ));
        assert_eq!(eval_at(&e, [0.0; 3], &[("alpha", 2.5)]).unwrap(), 2.5);
    }

    #[test]
    fn antideriv_quadrature() {
        // INT(exp(s), y, 0) at y = 1 is e - 1
        let e = Expr::antideriv(Expr::exp(Expr::y()), crate::expr::Coord::Y, rat(0, 1));
        let v = eval_at(&e, [0.0, 1.0, 0.0], &[]).unwrap();
        assert!((v - (libm::exp(1.0) - 1.0)).abs() < 1e-9);
        // lower limit above the evaluation point: sign flips
        let v2 = eval_at(&e, [0.0, -1.0, 0.0], &[]).unwrap();
        assert!((v2 - (libm::exp(-1.0) - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn opaque_closed_form_binding() {
        // a(z) bound to z^2; D(a, z, 1) evaluates to 2z.
        let o = Expr::opaque("a", &[Coord::Z]);
        let dz = crate::diff::diff(&o, Coord::Z);
        let mut env = Env::at(0.0, 0.0, 3.0);
        env.opaques.insert(String::from("a"), Expr::powi(Expr::z(), 2));
        let mut st = EvalStats::default();
        assert_eq!(eval(&o, &env, &mut st).unwrap(), 9.0);
        assert_eq!(eval(&dz, &env, &mut st).unwrap(), 6.0);
    }

    #[test]
    fn stats_track_denominators() {
        let e = Expr::div(Expr::num(1), Expr::x());
        let env = Env::at(1e-8, 0.0, 0.0);
        let mut st = EvalStats::default();
        let _ = eval(&e, &env, &mut st).unwrap();
        assert!(st.min_den < 1e-6);
        assert!(st.max_mag > 1e6);
    }

    #[test]
    fn finite_difference_matches_diff() {
        let e = Expr::mul(Expr::exp(Expr::mul(Expr::x(), Expr::y())), Expr::z());
        let sym = crate::diff::diff(&e, Coord::X);
        let env = Env::at(0.3, -0.7, 1.1);
        let mut st = EvalStats::default();
        let s = eval(&sym, &env, &mut st).unwrap();
        let n = finite_diff(&e, Coord::X, &env, 1e-5).unwrap();
        assert!((s - n).abs() < 1e-6 * (1.0 + s.abs()));
    }
}
