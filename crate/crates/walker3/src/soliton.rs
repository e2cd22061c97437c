//! Ricci-Yamabe soliton residuals on the Walker metric, in both the
//! vector-field and gradient forms, the scalar trace condition, the
//! divergence-free + potential certificate, and the lambda classification.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::canon::simplify;
use crate::expr::{Expr, Rat};
use crate::geometry::{Mat, Metric, Vec3};

/// Soliton constants; kept symbolic so whole families of constants can be
/// checked at once.
#[derive(Clone, Debug)]
pub struct Params {
    pub beta: Expr,
    pub lambda: Expr,
    pub mu: Expr,
}

impl Params {
    pub fn new(beta: Expr, lambda: Expr, mu: Expr) -> Params {
        Params { beta, lambda, mu }
    }

    /// -2 lambda + mu * Scal, the right-hand scalar factor of the soliton
    /// equation.
    fn rhs_factor(&self, w: &Metric) -> Expr {
        Expr::add(
            Expr::mul(Expr::num(-2), self.lambda.clone()),
            Expr::mul(self.mu.clone(), w.scalar_curvature()),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolitonKind {
    Expanding,
    Steady,
    Shrinking,
}

/// lambda < 0 expanding, lambda = 0 steady, lambda > 0 shrinking.
pub fn classify(lambda: &Rat) -> SolitonKind {
    if lambda.is_negative() {
        SolitonKind::Expanding
    } else if lambda.is_zero() {
        SolitonKind::Steady
    } else {
        SolitonKind::Shrinking
    }
}

use num_traits::Zero;

fn combine(w: &Metric, p: &Params, middle: &Mat) -> Mat {
    let ric = w.ricci();
    let g = w.components();
    let factor = p.rhs_factor(w);
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            simplify(&Expr::add_many(alloc::vec![
                Expr::mul_many(alloc::vec![
                    Expr::num(2),
                    p.beta.clone(),
                    ric[i][j].clone()
                ]),
                middle[i][j].clone(),
                Expr::neg(Expr::mul(factor.clone(), g[i][j].clone())),
            ]))
        })
    })
}

/// 2 beta Ric + L_V g - (-2 lambda + mu Scal) g.
pub fn ry_residual(w: &Metric, v: &Vec3, p: &Params) -> Mat {
    combine(w, p, &w.lie_metric(v))
}

/// 2 beta Ric + 2 Hess(F) - (-2 lambda + mu Scal) g.
pub fn gradient_ry_residual(w: &Metric, big_f: &Expr, p: &Params) -> Mat {
    let h = w.hessian(big_f);
    let doubled: Mat =
        core::array::from_fn(|i| core::array::from_fn(|j| Expr::mul(Expr::num(2), h[i][j].clone())));
    combine(w, p, &doubled)
}

/// Laplacian(F) - 3(-lambda + (-beta + mu/2) Scal).
pub fn trace_condition_residual(w: &Metric, big_f: &Expr, p: &Params) -> Expr {
    let scal = w.scalar_curvature();
    let inner = Expr::add(
        Expr::neg(p.lambda.clone()),
        Expr::mul(
            Expr::add(
                Expr::neg(p.beta.clone()),
                Expr::mul(Expr::ratio(1, 2), p.mu.clone()),
            ),
            scal,
        ),
    );
    simplify(&Expr::sub(
        w.laplacian(big_f),
        Expr::mul(Expr::num(3), inner),
    ))
}

/// Certificate for the divergence-free + gradient decomposition of the
/// soliton field: both expressions must be identically zero.
#[derive(Clone, Debug)]
pub struct HodgeReport {
    pub divergence: Expr,
    pub trace: Expr,
}

pub fn hodge_soliton_check(w: &Metric, y: &Vec3, big_f: &Expr, p: &Params) -> HodgeReport {
    HodgeReport {
        divergence: w.divergence(y),
        trace: trace_condition_residual(w, big_f, p),
    }
}

/// Metric trace g^{ij} T_ij of a symmetric tensor.
pub fn metric_trace(w: &Metric, t: &Mat) -> Expr {
    let inv = w.inverse();
    let mut terms = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            terms.push(Expr::mul(inv[i][j].clone(), t[i][j].clone()));
        }
    }
    simplify(&Expr::add_many(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_zero_sym;
    use crate::expr::{rat, Coord};
    use crate::parse::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn assert_zero_mat(m: &Mat, what: &str) {
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    is_zero_sym(&m[i][j]),
                    "{what}: component ({},{}) = {}",
                    i + 1,
                    j + 1,
                    m[i][j]
                );
            }
        }
    }

    #[test]
    fn classify_by_sign() {
        assert_eq!(classify(&rat(-1, 1)), SolitonKind::Expanding);
        assert_eq!(classify(&rat(0, 1)), SolitonKind::Steady);
        assert_eq!(classify(&rat(1, 1)), SolitonKind::Shrinking);
        assert_eq!(classify(&rat(7, 3)), SolitonKind::Shrinking);
        assert_eq!(classify(&rat(-1, 5)), SolitonKind::Expanding);
    }

    #[test]
    fn vector_residual_vanishes_on_known_solution() {
        // eps = lambda = beta = 1, mu = 2, f = x^2, V = (0, y, 0)
        let w = Metric::new(Expr::num(1), p("x^2"));
        let pr = Params::new(Expr::num(1), Expr::num(1), Expr::num(2));
        let v = [Expr::num(0), Expr::y(), Expr::num(0)];
        assert_zero_mat(&ry_residual(&w, &v, &pr), "vector residual");
    }

    #[test]
    fn vector_residual_trivial_zero() {
        let w = Metric::new(
            Expr::sign("eps"),
            Expr::opaque("f", &[Coord::X, Coord::Y, Coord::Z]),
        );
        let pr = Params::new(Expr::num(0), Expr::num(0), Expr::num(0));
        let v = [Expr::num(0), Expr::num(0), Expr::num(0)];
        assert_zero_mat(&ry_residual(&w, &v, &pr), "trivial vector residual");
    }

    #[test]
    fn vector_residual_c2_example() {
        // mu = 0, lambda = 1, beta = 1, eps = 1, f = -4z
        let w = Metric::new(Expr::num(1), p("-4z"));
        let pr = Params::new(Expr::num(1), Expr::num(1), Expr::num(0));
        let v = [p("-2x + 2z y + 2z^2 + b0"), p("-x - y + z^2"), p("y")];
        assert_zero_mat(&ry_residual(&w, &v, &pr), "c2 residual");
    }

    #[test]
    fn gradient_residual_vanishes_on_known_family() {
        // Symbolic beta != mu, lambda; F = eps lambda beta/(2(mu-beta)) y^2,
        // f = lambda/(mu-beta) x^2 + R(z) x + D(z).
        let pr = Params::new(p("beta"), p("lambda"), p("mu"));
        let w = Metric::new(
            Expr::sign("eps"),
            p("lambda/(mu - beta) x^2 + R(z) x + N(z)"),
        );
        let big_f = p("eps lambda beta / (2(mu - beta)) y^2 + b");
        assert_zero_mat(
            &gradient_ry_residual(&w, &big_f, &pr),
            "gradient residual (symbolic family)",
        );
    }

    #[test]
    fn gradient_residual_trivial_zero() {
        let w = Metric::new(
            Expr::sign("eps"),
            Expr::opaque("f", &[Coord::X, Coord::Y, Coord::Z]),
        );
        let pr = Params::new(Expr::num(0), Expr::num(0), Expr::num(0));
        assert_zero_mat(
            &gradient_ry_residual(&w, &Expr::num(5), &pr),
            "trivial gradient residual",
        );
    }

    #[test]
    fn trace_condition_examples() {
        let pr = Params::new(p("beta"), Expr::num(0), p("2 beta"));
        let w_plus = Metric::new(Expr::num(1), p("y z exp(-x)"));
        let w_minus = Metric::new(Expr::num(-1), p("y z exp(-x)"));
        for (w, ff) in [
            (&w_plus, "cos(sqrt(2) y) exp(x + z)"),
            (&w_plus, "sin(sqrt(2) y) exp(x + z)"),
            (&w_minus, "exp(sqrt(2) y) exp(x + z)"),
            (&w_minus, "exp(-sqrt(2) y) exp(x + z)"),
        ] {
            let r = trace_condition_residual(w, &p(ff), &pr);
            assert!(is_zero_sym(&r), "trace residual for {ff}: {r}");
        }
        // Non-solution of the oscillator equation: residual survives.
        let bad = trace_condition_residual(&w_plus, &p("y exp(x + z)"), &pr);
        assert!(!is_zero_sym(&bad));
        // F = 0 is always a trivial certificate at lambda=0, mu=2 beta.
        let triv = trace_condition_residual(&w_plus, &Expr::num(0), &pr);
        assert!(is_zero_sym(&triv));
    }

    #[test]
    fn hodge_certificate() {
        let pr = Params::new(p("beta"), Expr::num(0), p("2 beta"));
        let w = Metric::new(Expr::num(1), p("y z exp(-x)"));
        let ff = p("cos(sqrt(2) y) exp(x + z)");
        let zero = [Expr::num(0), Expr::num(0), Expr::num(0)];
        let r = hodge_soliton_check(&w, &zero, &ff, &pr);
        assert!(is_zero_sym(&r.divergence) && is_zero_sym(&r.trace));
        let good = [Expr::z(), Expr::num(0), Expr::num(0)];
        let r = hodge_soliton_check(&w, &good, &ff, &pr);
        assert!(is_zero_sym(&r.divergence) && is_zero_sym(&r.trace));
        let bad = [Expr::x(), Expr::num(0), Expr::num(0)];
        let r = hodge_soliton_check(&w, &bad, &ff, &pr);
        assert!(is_zero_sym(&Expr::sub(r.divergence, Expr::num(1))));
    }

    #[test]
    fn gradient_matches_vector_along_gradient_field() {
        let w = Metric::new(Expr::sign("eps"), p("x^2 + G(y,z)"));
        let pr = Params::new(p("beta"), p("lambda"), p("mu"));
        let big_f = p("x y + z^2");
        let via_vector = ry_residual(&w, &w.gradient(&big_f), &pr);
        let via_hessian = gradient_ry_residual(&w, &big_f, &pr);
        for i in 0..3 {
            for j in 0..3 {
                let d = Expr::sub(via_vector[i][j].clone(), via_hessian[i][j].clone());
                assert!(is_zero_sym(&d), "bridge mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn residuals_are_symmetric() {
        let w = Metric::new(Expr::sign("eps"), p("x^2 y + z"));
        let pr = Params::new(p("beta"), p("lambda"), p("mu"));
        let v = [p("x z"), p("y^2"), p("x + y")];
        let r = ry_residual(&w, &v, &pr);
        let h = gradient_ry_residual(&w, &p("x y z"), &pr);
        for i in 0..3 {
            for j in 0..3 {
                assert!(is_zero_sym(&Expr::sub(r[i][j].clone(), r[j][i].clone())));
                assert!(is_zero_sym(&Expr::sub(h[i][j].clone(), h[j][i].clone())));
            }
        }
    }

    #[test]
    fn trace_of_gradient_residual() {
        let w = Metric::new(Expr::sign("eps"), p("x^2 + H(y,z)"));
        let pr = Params::new(p("beta"), p("lambda"), p("mu"));
        let big_f = p("x^2 y + cos(z)");
        let tr = metric_trace(&w, &gradient_ry_residual(&w, &big_f, &pr));
        let scal = w.scalar_curvature();
        let lap = w.laplacian(&big_f);
        let want = p("2 (beta S + L) - 3 (-2 lambda + mu S)");
        let want = replace_param_expr(&replace_param_expr(&want, "S", &scal), "L", &lap);
        assert!(is_zero_sym(&Expr::sub(tr, want)));
    }

    fn replace_param_expr(e: &Expr, n: &str, r: &Expr) -> Expr {
        match e {
            Expr::Param(p) if p.name == n => r.clone(),
            Expr::Sum(ts) => Expr::add_many(ts.iter().map(|t| replace_param_expr(t, n, r)).collect()),
            Expr::Product(fs) => {
                Expr::mul_many(fs.iter().map(|f| replace_param_expr(f, n, r)).collect())
            }
            Expr::Power(b, k) => Expr::pow(replace_param_expr(b, n, r), k.clone()),
            Expr::Apply(f, u) => Expr::apply(*f, replace_param_expr(u, n, r)),
            _ => e.clone(),
        }
    }
}
