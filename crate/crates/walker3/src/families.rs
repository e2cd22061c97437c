//! Constructors for every classified soliton family: each takes the free
//! functions and constants of one classification case and produces the
//! metric function f, the soliton field (vector or gradient potential) and
//! the residual side-constraints the case leaves open. A built-in catalog
//! bundles the worked examples with their expected verdicts.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::canon::{is_zero_sym, simplify};
use crate::diff::{diff, diff_n};
use crate::expr::{int, rat, Coord, Expr};
use crate::geometry::{Mat, Metric};
use crate::scenario::{Check, FieldSpec, ParamVal, Scenario};
use crate::soliton::{self, Params};
use crate::subst::subst;
use crate::verify::Policy;

/// Soliton constants for a family; symbolic values are allowed so whole
/// constant-families can be certified at once.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub beta: Expr,
    pub lambda: Expr,
    pub mu: Expr,
    pub eps: Expr,
}

impl FamilyParams {
    pub fn numeric(beta: i64, lambda: i64, mu: i64, eps: i64) -> FamilyParams {
        FamilyParams {
            beta: Expr::num(beta),
            lambda: Expr::num(lambda),
            mu: Expr::num(mu),
            eps: Expr::num(eps),
        }
    }

    pub fn symbolic() -> FamilyParams {
        FamilyParams {
            beta: Expr::param("beta"),
            lambda: Expr::param("lambda"),
            mu: Expr::param("mu"),
            eps: Expr::sign("eps"),
        }
    }

    fn soliton(&self) -> Params {
        Params::new(self.beta.clone(), self.lambda.clone(), self.mu.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyError {
    MuZero,
    BetaEqualsMu,
    ZeroDenominator,
    ArgumentViolation(String),
    CaseMismatch(String),
    UnknownName(String),
}

impl core::fmt::Display for FamilyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FamilyError::MuZero => write!(f, "mu must be nonzero"),
            FamilyError::BetaEqualsMu => write!(f, "beta must differ from mu"),
            FamilyError::ZeroDenominator => write!(f, "an input used as a denominator is identically zero"),
            FamilyError::ArgumentViolation(s) => write!(f, "argument violation: {s}"),
            FamilyError::CaseMismatch(s) => write!(f, "case mismatch: {s}"),
            FamilyError::UnknownName(s) => write!(f, "unknown catalog entry: {s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum BuiltField {
    Vector([Expr; 3]),
    Gradient(Expr),
}

#[derive(Clone, Debug)]
pub struct BuiltScenario {
    pub f: Expr,
    pub field: BuiltField,
    pub params: FamilyParams,
    /// Named residual components the family leaves as side conditions;
    /// everything not listed vanishes identically by construction.
    pub constraints: Vec<(String, Expr)>,
}

impl BuiltScenario {
    pub fn metric(&self) -> Metric {
        Metric::new(self.params.eps.clone(), self.f.clone())
    }

    /// The matching soliton residual tensor (vector form for vector
    /// fields, gradient form for potentials).
    pub fn residual(&self) -> Mat {
        let w = self.metric();
        let p = self.params.soliton();
        match &self.field {
            BuiltField::Vector(v) => soliton::ry_residual(&w, v, &p),
            BuiltField::Gradient(pot) => soliton::gradient_ry_residual(&w, pot, &p),
        }
    }
}

fn require_only(e: &Expr, allowed: &[Coord], what: &str) -> Result<(), FamilyError> {
    for c in Coord::ALL {
        if !allowed.contains(&c) && e.uses_coord(c) {
            return Err(FamilyError::ArgumentViolation(alloc::format!(
                "{what} must not depend on {}",
                c.name()
            )));
        }
    }
    Ok(())
}

fn half(e: &Expr) -> Expr {
    simplify(&Expr::mul(Expr::ratio(1, 2), e.clone()))
}

/// Definite integral from 0 to y, in closed form when the integrand is
/// polynomial in y times at most an exponential that is linear in y with a
/// constant rate; otherwise an antiderivative node evaluated by
/// quadrature.
pub fn integrate_y(e: &Expr) -> Expr {
    let s = simplify(e);
    if s.is_zero() {
        return Expr::num(0);
    }
    let terms: Vec<Expr> = match &s {
        Expr::Sum(ts) => ts.clone(),
        other => alloc::vec![other.clone()],
    };
    let mut primitive_terms = Vec::with_capacity(terms.len());
    for t in &terms {
        match primitive_term(t) {
            Some(p) => primitive_terms.push(p),
            None => return Expr::antideriv(s, Coord::Y, int(0)),
        }
    }
    let prim = Expr::add_many(primitive_terms);
    let at0 = subst(&prim, Coord::Y, &Expr::num(0));
    simplify(&Expr::sub(prim, at0))
}

/// Antiderivative in y of a single product term, or None when it is not
/// of the polynomial-times-exponential shape.
fn primitive_term(t: &Expr) -> Option<Expr> {
    let factors: Vec<Expr> = match t {
        Expr::Product(fs) => fs.clone(),
        other => alloc::vec![other.clone()],
    };
    let mut yfree: Vec<Expr> = Vec::new();
    let mut ypow: i64 = 0;
    let mut exp_arg: Option<Expr> = None;
    let push_exp = |arg: Expr, exp_arg: &mut Option<Expr>| {
        *exp_arg = Some(match exp_arg.take() {
            Some(a) => Expr::add(a, arg),
            None => arg,
        });
    };
    for f in factors {
        if !f.uses_coord(Coord::Y) {
            yfree.push(f);
            continue;
        }
        match &f {
            Expr::Coordinate(Coord::Y) => ypow += 1,
            Expr::Power(b, r) if **b == Expr::Coordinate(Coord::Y) => {
                use num_traits::{Signed, ToPrimitive};
                if !r.is_integer() || r.is_negative() {
                    return None;
                }
                ypow += r.to_integer().to_i64()?;
            }
            Expr::Apply(crate::expr::Func::Exp, arg) => push_exp((**arg).clone(), &mut exp_arg),
            Expr::Power(b, r) => {
                use num_traits::ToPrimitive;
                if let Expr::Apply(crate::expr::Func::Exp, arg) = &**b {
                    if !r.is_integer() {
                        return None;
                    }
                    let n = r.to_integer().to_i64()?;
                    push_exp(Expr::mul(Expr::num(n), (**arg).clone()), &mut exp_arg);
                } else {
                    return None;
                }
            }
            _ => return None,
        }
    }
    let coeff = Expr::mul_many(yfree);
    match exp_arg {
        None => {
            // y^k -> y^(k+1)/(k+1)
            let k1 = ypow + 1;
            Some(Expr::mul_many(alloc::vec![
                Expr::ratio(1, k1),
                coeff,
                Expr::powi(Expr::y(), k1),
            ]))
        }
        Some(arg) => {
            // need a constant rational rate c with arg linear in y
            let c = match diff(&arg, Coord::Y) {
                Expr::Rational(r) if !num_traits::Zero::is_zero(&r) => r,
                _ => return None,
            };
            // I_k = y^k e/c - (k/c) I_{k-1}, I_0 = e/c, e = exp(arg)
            let e = Expr::exp(arg);
            let c_inv = Expr::Rational(rat(1, 1) / c);
            let mut acc = Expr::mul(c_inv.clone(), e.clone());
            for k in 1..=ypow {
                acc = Expr::mul(
                    c_inv.clone(),
                    Expr::sub(
                        Expr::mul(Expr::powi(Expr::y(), k), e.clone()),
                        Expr::mul(Expr::num(k), acc),
                    ),
                );
            }
            Some(Expr::mul(coeff, acc))
        }
    }
}

fn raw_components(r: &Mat, keys: &[(usize, usize)]) -> Vec<(String, Expr)> {
    keys.iter()
        .map(|(i, j)| (alloc::format!("{}{}", i + 1, j + 1), r[*i][*j].clone()))
        .collect()
}

fn half_components(r: &Mat, keys: &[(usize, usize)]) -> Vec<(String, Expr)> {
    keys.iter()
        .map(|(i, j)| (alloc::format!("{}{}", i + 1, j + 1), half(&r[*i][*j])))
        .collect()
}

// ---------------------------------------------------------------------------
// Vector families (mu != 0 and mu = 0 classifications)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct T2Inputs {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub v: Expr,
    pub xi: Expr,
}

/// Family of soliton vector fields for nonzero mu: V and f are generated
/// by four functions of (y, z) and one of (x, z); the (1,3) and (3,3)
/// residual components remain as side constraints.
pub fn build_t2(inputs: &T2Inputs, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if is_zero_sym(&p.mu) {
        return Err(FamilyError::MuZero);
    }
    for (e, what) in [
        (&inputs.a, "a"),
        (&inputs.b, "b"),
        (&inputs.c, "c"),
        (&inputs.v, "v"),
    ] {
        require_only(e, &[Coord::Y, Coord::Z], what)?;
    }
    require_only(&inputs.xi, &[Coord::X, Coord::Z], "xi")?;
    let T2Inputs { a, b, c, v, xi } = inputs;
    let eps = &p.eps;
    let mu = &p.mu;
    let a_yy = diff_n(a, Coord::Y, 2);
    let b_y = diff(b, Coord::Y);
    let f = simplify(&Expr::add_many(alloc::vec![
        Expr::div(
            Expr::mul_many(alloc::vec![
                Expr::num(-1),
                eps.clone(),
                Expr::powi(Expr::x(), 3),
                a_yy.clone()
            ]),
            Expr::mul(Expr::num(3), mu.clone()),
        ),
        Expr::mul(
            Expr::div(Expr::add(b_y.clone(), p.lambda.clone()), mu.clone()),
            Expr::powi(Expr::x(), 2),
        ),
        Expr::mul(Expr::x(), c.clone()),
        v.clone(),
    ]));
    let v3 = simplify(a);
    let v2 = simplify(&Expr::add(
        Expr::mul_many(alloc::vec![
            Expr::num(-1),
            eps.clone(),
            Expr::x(),
            diff(a, Coord::Y)
        ]),
        b.clone(),
    ));
    // the y-derivative of the first component is pinned by the off-diagonal
    // closure: d/dy V1 = -beta f_xy - f d/dy V3 - eps d/dz V2; the y-free
    // part is the -beta(...) bracket plus the free xi
    let int_v2z = integrate_y(&simplify(&Expr::mul(eps.clone(), diff(&v2, Coord::Z))));
    let int_fa = integrate_y(&Expr::mul(f.clone(), diff(a, Coord::Y)));
    let v1 = simplify(&Expr::add_many(alloc::vec![
        xi.clone(),
        Expr::mul(
            Expr::neg(p.beta.clone()),
            Expr::add(
                Expr::div(
                    Expr::add(
                        Expr::mul_many(alloc::vec![
                            Expr::num(-1),
                            eps.clone(),
                            Expr::powi(Expr::x(), 2),
                            a_yy
                        ]),
                        Expr::mul_many(alloc::vec![Expr::num(2), Expr::x(), b_y]),
                    ),
                    mu.clone(),
                ),
                c.clone(),
            ),
        ),
        Expr::neg(int_v2z),
        Expr::neg(int_fa),
    ]));
    let built = BuiltScenario {
        f,
        field: BuiltField::Vector([v1, v2, v3]),
        params: p.clone(),
        constraints: Vec::new(),
    };
    let r = built.residual();
    Ok(BuiltScenario {
        constraints: raw_components(&r, &[(0, 2), (2, 2)]),
        ..built
    })
}

#[derive(Clone, Debug)]
pub struct T3Inputs {
    pub z1: Expr,
    pub z2: Expr,
    pub z3: Expr,
    /// Generic mode: free function of (y, z) in the first component.
    pub xi: Option<Expr>,
    /// Specialized mode (x-free f, constant z1): function of z replacing
    /// xi, with the -z1 * integral of f term added.
    pub z4: Option<Expr>,
    pub f: Expr,
}

/// Family of soliton vector fields for mu = 0 and a prescribed metric
/// function f; the (2,3) and (3,3) residual components remain as side
/// constraints.
pub fn build_t3(inputs: &T3Inputs, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if !is_zero_sym(&p.mu) {
        return Err(FamilyError::CaseMismatch("mu must be zero".to_string()));
    }
    for (e, what) in [(&inputs.z1, "z1"), (&inputs.z2, "z2"), (&inputs.z3, "z3")] {
        require_only(e, &[Coord::Z], what)?;
    }
    let T3Inputs {
        z1,
        z2,
        z3,
        xi,
        z4,
        f,
    } = inputs;
    let eps = &p.eps;
    let lam = &p.lambda;
    let common = [
        Expr::mul_many(alloc::vec![
            Expr::num(-1),
            Expr::y(),
            Expr::x(),
            diff(z1, Coord::Z)
        ]),
        Expr::mul_many(alloc::vec![Expr::num(-1), Expr::x(), diff(z2, Coord::Z)]),
        Expr::mul_many(alloc::vec![Expr::num(-2), lam.clone(), Expr::x()]),
    ];
    let v1 = match (xi, z4) {
        (Some(xi), None) => {
            require_only(xi, &[Coord::Y, Coord::Z], "xi")?;
            let mut terms = alloc::vec![Expr::mul(Expr::neg(p.beta.clone()), diff(f, Coord::X))];
            terms.extend(common.iter().cloned());
            terms.push(xi.clone());
            Expr::add_many(terms)
        }
        (None, Some(z4)) => {
            require_only(z4, &[Coord::Z], "z4")?;
            require_only(f, &[Coord::Y, Coord::Z], "f (specialized mode)")?;
            if !is_zero_sym(&diff(z1, Coord::Z)) {
                return Err(FamilyError::ArgumentViolation(
                    "z1 must be constant in the specialized mode".to_string(),
                ));
            }
            let mut terms = Vec::from(common.clone());
            terms.push(Expr::mul(
                Expr::neg(z1.clone()),
                integrate_y(f),
            ));
            terms.push(Expr::mul_many(alloc::vec![
                Expr::num(-1),
                eps.clone(),
                Expr::y(),
                diff(z3, Coord::Z)
            ]));
            terms.push(z4.clone());
            Expr::add_many(terms)
        }
        _ => {
            return Err(FamilyError::ArgumentViolation(
                "exactly one of xi or z4 must be given".to_string(),
            ))
        }
    };
    let v2 = Expr::add_many(alloc::vec![
        Expr::mul_many(alloc::vec![Expr::num(-1), eps.clone(), z1.clone(), Expr::x()]),
        Expr::mul_many(alloc::vec![Expr::num(-1), lam.clone(), Expr::y()]),
        z3.clone(),
    ]);
    let v3 = Expr::add(Expr::mul(z1.clone(), Expr::y()), z2.clone());
    let built = BuiltScenario {
        f: simplify(f),
        field: BuiltField::Vector([simplify(&v1), simplify(&v2), simplify(&v3)]),
        params: p.clone(),
        constraints: Vec::new(),
    };
    let r = built.residual();
    Ok(BuiltScenario {
        constraints: raw_components(&r, &[(1, 2), (2, 2)]),
        ..built
    })
}

#[derive(Clone, Debug)]
pub struct C2Inputs {
    pub z1: Expr,
    pub z2: Expr,
    pub z3: Expr,
    pub xi: Expr,
}

/// The mu = 0 family with nonzero z1, which determines f; the single
/// remaining side constraint is the (3,3) residual component.
pub fn build_c2(inputs: &C2Inputs, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if !is_zero_sym(&p.mu) {
        return Err(FamilyError::CaseMismatch("mu must be zero".to_string()));
    }
    if is_zero_sym(&inputs.z1) {
        return Err(FamilyError::ZeroDenominator);
    }
    for (e, what) in [(&inputs.z1, "z1"), (&inputs.z2, "z2"), (&inputs.z3, "z3")] {
        require_only(e, &[Coord::Z], what)?;
    }
    require_only(&inputs.xi, &[Coord::Y, Coord::Z], "xi")?;
    let f = simplify(&Expr::div(
        Expr::add_many(alloc::vec![
            Expr::mul_many(alloc::vec![
                Expr::num(2),
                Expr::x(),
                diff(&inputs.z1, Coord::Z)
            ]),
            Expr::neg(diff(&inputs.xi, Coord::Y)),
            Expr::mul_many(alloc::vec![
                Expr::num(-1),
                p.eps.clone(),
                diff(&inputs.z3, Coord::Z)
            ]),
        ]),
        inputs.z1.clone(),
    ));
    let t3 = T3Inputs {
        z1: inputs.z1.clone(),
        z2: inputs.z2.clone(),
        z3: inputs.z3.clone(),
        xi: Some(inputs.xi.clone()),
        z4: None,
        f,
    };
    let built = build_t3(&t3, p)?;
    // the (2,3) condition is satisfied by the choice of f; only (3,3)
    // survives as a constraint
    let constraints = built
        .constraints
        .iter()
        .filter(|(k, _)| k == "33")
        .cloned()
        .collect();
    Ok(BuiltScenario {
        constraints,
        ..built
    })
}

// ---------------------------------------------------------------------------
// Gradient families
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct T1Inputs {
    pub a: Expr,
    pub b: Expr,
    pub r: Expr,
    pub c: Expr,
    pub d: Expr,
}

/// Gradient family for nonzero beta and lambda with beta != mu: potential
/// quadratic in y, f quadratic in x with an exponential-integral tail.
/// No side constraints remain.
pub fn build_t1_gradient(inputs: &T1Inputs, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if is_zero_sym(&Expr::sub(p.beta.clone(), p.mu.clone())) {
        return Err(FamilyError::BetaEqualsMu);
    }
    if is_zero_sym(&p.beta) {
        return Err(FamilyError::ArgumentViolation("beta must be nonzero".to_string()));
    }
    require_only(&inputs.a, &[], "a")?;
    require_only(&inputs.b, &[], "b")?;
    for (e, what) in [(&inputs.r, "R"), (&inputs.c, "C"), (&inputs.d, "D")] {
        require_only(e, &[Coord::Z], what)?;
    }
    let gap = Expr::sub(p.mu.clone(), p.beta.clone());
    let quad = Expr::div(
        Expr::mul_many(alloc::vec![p.eps.clone(), p.lambda.clone(), p.beta.clone()]),
        Expr::mul(Expr::num(2), gap.clone()),
    );
    let pot = Expr::add_many(alloc::vec![
        Expr::mul(quad, Expr::powi(Expr::y(), 2)),
        Expr::mul(inputs.a.clone(), Expr::y()),
        inputs.b.clone(),
    ]);
    let exponent = Expr::add(
        Expr::mul(Expr::div(inputs.a.clone(), p.beta.clone()), Expr::y()),
        Expr::mul(
            Expr::div(
                Expr::mul(p.eps.clone(), p.lambda.clone()),
                Expr::mul(Expr::num(2), gap.clone()),
            ),
            Expr::powi(Expr::y(), 2),
        ),
    );
    let f = Expr::add_many(alloc::vec![
        Expr::mul(Expr::div(p.lambda.clone(), gap), Expr::powi(Expr::x(), 2)),
        Expr::mul(inputs.r.clone(), Expr::x()),
        Expr::mul(
            inputs.c.clone(),
            Expr::antideriv(Expr::exp(exponent), Coord::Y, int(0)),
        ),
        inputs.d.clone(),
    ]);
    Ok(BuiltScenario {
        f: simplify(&f),
        field: BuiltField::Gradient(simplify(&pot)),
        params: p.clone(),
        constraints: Vec::new(),
    })
}

/// Steady (lambda = 0) gradient cases, keyed by how beta and mu relate.
#[derive(Clone, Debug)]
pub enum TtCase {
    /// beta = mu = 0: any f works, the potential is a y + F(z); the third
    /// diagonal residual survives as an ODE constraint on F.
    BothZero { a: Expr, cap_f: Expr, f: Expr },
    /// beta = mu != 0 with a nonzero slope k: exponential profile in y.
    EqualExp {
        k: Expr,
        f2: Expr,
        f3: Expr,
        a_h: Expr,
        b_h: Expr,
    },
    /// beta = mu != 0 with zero slope: quadratic profile in y.
    EqualQuad {
        f2: Expr,
        f3: Expr,
        f6: Expr,
        f7: Expr,
    },
    /// beta = 0 != mu with a nonzero slope a.
    BetaZeroSlope {
        a: Expr,
        f2: Expr,
        f3: Expr,
        f4: Expr,
    },
    /// beta = 0 != mu with zero slope: potential b z + c, f free affine in
    /// x; the third diagonal residual survives as a constraint.
    BetaZeroFree {
        b: Expr,
        c: Expr,
        f1: Expr,
        f2: Expr,
    },
    /// beta != 0, beta != mu: z-only potential, quadratic f profile.
    Generic {
        f2: Expr,
        f5: Expr,
        f6: Expr,
        f7: Expr,
    },
}

pub fn build_tt(case: &TtCase, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if !is_zero_sym(&p.lambda) {
        return Err(FamilyError::CaseMismatch("steady case requires lambda = 0".to_string()));
    }
    let beta_zero = is_zero_sym(&p.beta);
    let mu_zero = is_zero_sym(&p.mu);
    let equal = is_zero_sym(&Expr::sub(p.beta.clone(), p.mu.clone()));
    let eps = &p.eps;
    match case {
        TtCase::BothZero { a, cap_f, f } => {
            if !beta_zero || !mu_zero {
                return Err(FamilyError::CaseMismatch("requires beta = mu = 0".to_string()));
            }
            require_only(a, &[], "a")?;
            require_only(cap_f, &[Coord::Z], "F")?;
            let pot = Expr::add(Expr::mul(a.clone(), Expr::y()), cap_f.clone());
            let built = BuiltScenario {
                f: simplify(f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            };
            let r = built.residual();
            Ok(BuiltScenario {
                constraints: half_components(&r, &[(2, 2)]),
                ..built
            })
        }
        TtCase::EqualExp { k, f2, f3, a_h, b_h } => {
            if !equal || mu_zero {
                return Err(FamilyError::CaseMismatch("requires beta = mu != 0".to_string()));
            }
            require_only(k, &[], "k")?;
            if is_zero_sym(k) {
                return Err(FamilyError::CaseMismatch("requires a nonzero slope k".to_string()));
            }
            for (e, what) in [(f2, "F2"), (f3, "F3"), (a_h, "A"), (b_h, "B")] {
                require_only(e, &[Coord::Z], what)?;
            }
            let s0 = Expr::div(
                Expr::mul(
                    Expr::num(2),
                    Expr::add(
                        diff_n(f2, Coord::Z, 2),
                        Expr::mul(Expr::ratio(1, 2), Expr::mul(f3.clone(), diff(f2, Coord::Z))),
                    ),
                ),
                Expr::mul(eps.clone(), p.mu.clone()),
            );
            let f = Expr::add_many(alloc::vec![
                Expr::mul(f3.clone(), Expr::x()),
                Expr::mul(
                    a_h.clone(),
                    Expr::exp(Expr::mul(Expr::div(k.clone(), p.mu.clone()), Expr::y())),
                ),
                b_h.clone(),
                Expr::mul_many(alloc::vec![
                    Expr::num(-1),
                    Expr::div(Expr::mul(p.mu.clone(), s0), k.clone()),
                    Expr::y()
                ]),
            ]);
            let pot = Expr::add(Expr::mul(k.clone(), Expr::y()), f2.clone());
            Ok(BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            })
        }
        TtCase::EqualQuad { f2, f3, f6, f7 } => {
            if !equal || mu_zero {
                return Err(FamilyError::CaseMismatch("requires beta = mu != 0".to_string()));
            }
            for (e, what) in [(f2, "F2"), (f3, "F3"), (f6, "F6"), (f7, "F7")] {
                require_only(e, &[Coord::Z], what)?;
            }
            let s0_half = Expr::div(
                Expr::add(
                    diff_n(f2, Coord::Z, 2),
                    Expr::mul(Expr::ratio(1, 2), Expr::mul(f3.clone(), diff(f2, Coord::Z))),
                ),
                Expr::mul(eps.clone(), p.mu.clone()),
            );
            let f = Expr::add_many(alloc::vec![
                Expr::mul(f3.clone(), Expr::x()),
                Expr::mul(s0_half, Expr::powi(Expr::y(), 2)),
                Expr::mul(f6.clone(), Expr::y()),
                f7.clone(),
            ]);
            Ok(BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(f2)),
                params: p.clone(),
                constraints: Vec::new(),
            })
        }
        TtCase::BetaZeroSlope { a, f2, f3, f4 } => {
            if !beta_zero || mu_zero {
                return Err(FamilyError::CaseMismatch("requires beta = 0 and mu != 0".to_string()));
            }
            require_only(a, &[], "a")?;
            if is_zero_sym(a) {
                return Err(FamilyError::CaseMismatch("requires a nonzero slope a".to_string()));
            }
            for (e, what) in [(f2, "F2"), (f3, "F3"), (f4, "F4")] {
                require_only(e, &[Coord::Z], what)?;
            }
            let bracket = Expr::add(
                diff_n(f2, Coord::Z, 2),
                Expr::mul(Expr::ratio(1, 2), Expr::mul(diff(f2, Coord::Z), f3.clone())),
            );
            let f = Expr::add_many(alloc::vec![
                Expr::mul(Expr::x(), f3.clone()),
                Expr::mul_many(alloc::vec![
                    Expr::num(-2),
                    Expr::div(eps.clone(), a.clone()),
                    Expr::y(),
                    bracket
                ]),
                f4.clone(),
            ]);
            let pot = Expr::add(Expr::mul(a.clone(), Expr::y()), f2.clone());
            Ok(BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            })
        }
        TtCase::BetaZeroFree { b, c, f1, f2 } => {
            if !beta_zero || mu_zero {
                return Err(FamilyError::CaseMismatch("requires beta = 0 and mu != 0".to_string()));
            }
            require_only(b, &[], "b")?;
            require_only(c, &[], "c")?;
            require_only(f1, &[Coord::Y, Coord::Z], "f1")?;
            require_only(f2, &[Coord::Y, Coord::Z], "f2")?;
            let pot = Expr::add(Expr::mul(b.clone(), Expr::z()), c.clone());
            let f = Expr::add(Expr::mul(Expr::x(), f1.clone()), f2.clone());
            let built = BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            };
            let r = built.residual();
            Ok(BuiltScenario {
                constraints: half_components(&r, &[(2, 2)]),
                ..built
            })
        }
        TtCase::Generic { f2, f5, f6, f7 } => {
            if beta_zero || equal {
                return Err(FamilyError::CaseMismatch(
                    "requires beta != 0 and beta != mu".to_string(),
                ));
            }
            for (e, what) in [(f2, "F2"), (f5, "F5"), (f6, "F6"), (f7, "F7")] {
                require_only(e, &[Coord::Z], what)?;
            }
            let quad = Expr::div(
                Expr::add(
                    diff_n(f2, Coord::Z, 2),
                    Expr::mul(Expr::ratio(1, 2), Expr::mul(f5.clone(), diff(f2, Coord::Z))),
                ),
                Expr::mul(p.beta.clone(), eps.clone()),
            );
            let f = Expr::add_many(alloc::vec![
                Expr::mul(Expr::x(), f5.clone()),
                Expr::mul(quad, Expr::powi(Expr::y(), 2)),
                Expr::mul(f6.clone(), Expr::y()),
                f7.clone(),
            ]);
            Ok(BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(f2)),
                params: p.clone(),
                constraints: Vec::new(),
            })
        }
    }
}

/// Gradient families with beta = 0, split on mu.
#[derive(Clone, Debug)]
pub enum Beta0Branch {
    MuZero {
        cap_f: Expr,
        a: Expr,
        b: Expr,
        c: Expr,
    },
    MuNonzero {
        cap_f: Expr,
        f2: Expr,
        f4: Expr,
        f5: Expr,
    },
}

pub fn build_beta0(branch: &Beta0Branch, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if !is_zero_sym(&p.beta) {
        return Err(FamilyError::CaseMismatch("requires beta = 0".to_string()));
    }
    match branch {
        Beta0Branch::MuZero { cap_f, a, b, c } => {
            if !is_zero_sym(&p.mu) {
                return Err(FamilyError::CaseMismatch("branch requires mu = 0".to_string()));
            }
            if is_zero_sym(cap_f) {
                return Err(FamilyError::ZeroDenominator);
            }
            for (e, what) in [(cap_f, "F"), (a, "a"), (b, "b"), (c, "c")] {
                require_only(e, &[Coord::Z], what)?;
            }
            let pot = Expr::add_many(alloc::vec![
                Expr::mul(cap_f.clone(), Expr::x()),
                Expr::mul_many(alloc::vec![
                    Expr::ratio(-1, 2),
                    p.eps.clone(),
                    p.lambda.clone(),
                    Expr::powi(Expr::y(), 2)
                ]),
                Expr::mul(a.clone(), Expr::y()),
                b.clone(),
            ]);
            let f = Expr::add_many(alloc::vec![
                Expr::div(
                    Expr::add(
                        Expr::mul_many(alloc::vec![Expr::num(2), Expr::y(), diff(a, Coord::Z)]),
                        Expr::mul(Expr::num(2), diff(b, Coord::Z)),
                    ),
                    cap_f.clone(),
                ),
                Expr::mul(
                    Expr::div(
                        Expr::mul(
                            Expr::num(2),
                            Expr::add(p.lambda.clone(), diff(cap_f, Coord::Z)),
                        ),
                        cap_f.clone(),
                    ),
                    Expr::x(),
                ),
                c.clone(),
            ]);
            let built = BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            };
            let r = built.residual();
            Ok(BuiltScenario {
                constraints: half_components(&r, &[(2, 2)]),
                ..built
            })
        }
        Beta0Branch::MuNonzero { cap_f, f2, f4, f5 } => {
            if is_zero_sym(&p.mu) {
                return Err(FamilyError::CaseMismatch("branch requires mu != 0".to_string()));
            }
            if is_zero_sym(cap_f) {
                return Err(FamilyError::ZeroDenominator);
            }
            require_only(cap_f, &[Coord::Z], "F")?;
            require_only(f2, &[Coord::Y, Coord::Z], "F2")?;
            require_only(f4, &[Coord::Z], "F4")?;
            require_only(f5, &[Coord::Z], "F5")?;
            let pot = Expr::add(Expr::mul(cap_f.clone(), Expr::x()), f2.clone());
            let f = Expr::add_many(alloc::vec![
                Expr::div(
                    Expr::mul(Expr::num(2), diff(f2, Coord::Z)),
                    cap_f.clone(),
                ),
                Expr::mul(
                    Expr::div(
                        Expr::add(
                            Expr::mul(p.eps.clone(), p.lambda.clone()),
                            diff_n(f2, Coord::Y, 2),
                        ),
                        Expr::mul(p.eps.clone(), p.mu.clone()),
                    ),
                    Expr::powi(Expr::x(), 2),
                ),
                Expr::mul(f4.clone(), Expr::x()),
                f5.clone(),
            ]);
            let built = BuiltScenario {
                f: simplify(&f),
                field: BuiltField::Gradient(simplify(&pot)),
                params: p.clone(),
                constraints: Vec::new(),
            };
            let r = built.residual();
            Ok(BuiltScenario {
                constraints: half_components(&r, &[(0, 2), (1, 2), (2, 2)]),
                ..built
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct FinInputs {
    pub cap_f: Expr,
    pub f2: Expr,
    pub a: Expr,
    pub b: Expr,
}

/// Gradient family for nonzero beta: f carries an exponential-in-x
/// homogeneous part against an antiderivative in y; the three residual
/// components (1,3), (2,2), (3,3) remain as side constraints.
pub fn build_fin(inputs: &FinInputs, p: &FamilyParams) -> Result<BuiltScenario, FamilyError> {
    if is_zero_sym(&p.beta) {
        return Err(FamilyError::ArgumentViolation("beta must be nonzero".to_string()));
    }
    if is_zero_sym(&inputs.cap_f) {
        return Err(FamilyError::ZeroDenominator);
    }
    require_only(&inputs.cap_f, &[Coord::Z], "F")?;
    require_only(&inputs.f2, &[Coord::Y, Coord::Z], "F2")?;
    require_only(&inputs.a, &[Coord::Y, Coord::Z], "a")?;
    require_only(&inputs.b, &[Coord::X, Coord::Z], "b")?;
    let pot = Expr::add(Expr::mul(inputs.cap_f.clone(), Expr::x()), inputs.f2.clone());
    let f = Expr::add_many(alloc::vec![
        Expr::mul(
            Expr::exp(Expr::div(
                Expr::mul(Expr::x(), inputs.cap_f.clone()),
                p.beta.clone(),
            )),
            Expr::antideriv(inputs.a.clone(), Coord::Y, int(0)),
        ),
        Expr::div(
            Expr::mul(Expr::num(2), diff(&inputs.f2, Coord::Z)),
            inputs.cap_f.clone(),
        ),
        inputs.b.clone(),
    ]);
    let built = BuiltScenario {
        f: simplify(&f),
        field: BuiltField::Gradient(simplify(&pot)),
        params: p.clone(),
        constraints: Vec::new(),
    };
    let r = built.residual();
    Ok(BuiltScenario {
        constraints: half_components(&r, &[(0, 2), (1, 1), (2, 2)]),
        ..built
    })
}

// ---------------------------------------------------------------------------
// Catalog of worked examples
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Expectation {
    pub check: &'static str,
    pub component: &'static str,
    pub zero: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub scenario: Scenario,
    /// Residual side conditions of the generating family; expected zero.
    pub constraints: Vec<(String, Expr)>,
    /// Extra identities recorded for the entry; expected zero.
    pub diagnostics: Vec<(String, Expr)>,
    /// Expected zero-ness per check component; components not listed are
    /// expected zero.
    pub expect: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.scenario.name
    }

    pub fn expected_zero(&self, check: &str, component: &str) -> bool {
        self.expect
            .iter()
            .find(|e| e.check == check && e.component == component)
            .map_or(true, |e| e.zero)
    }
}

fn pe(s: &str) -> Expr {
    crate::parse::parse(s).unwrap()
}

fn scenario(
    name: &str,
    epsilon: i8,
    (beta, lambda, mu): (ParamVal, ParamVal, ParamVal),
    f: Expr,
    field: FieldSpec,
    checks: Vec<Check>,
) -> Scenario {
    Scenario {
        name: name.to_string(),
        epsilon,
        beta,
        lambda,
        mu,
        f,
        field,
        checks,
        sampling: Policy::default(),
    }
}

fn val(n: i64) -> ParamVal {
    ParamVal::Value(int(n))
}

fn built_vector(b: &BuiltScenario) -> FieldSpec {
    match &b.field {
        BuiltField::Vector(v) => FieldSpec::Vector(v.clone()),
        BuiltField::Gradient(p) => FieldSpec::Gradient(p.clone()),
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    // Divergence-free + potential certificates for f = y z e^{-x}.
    for (name, epsilon, potential) in [
        ("ex-thm1-plus", 1i8, "cos(sqrt(2) y) exp(x + z)"),
        ("ex-thm1-minus", -1i8, "exp(sqrt(2) y) exp(x + z)"),
    ] {
        out.push(CatalogEntry {
            scenario: scenario(
                name,
                epsilon,
                (val(1), val(0), val(2)),
                pe("y z exp(-x)"),
                FieldSpec::Hodge {
                    potential: pe(potential),
                    y: [pe("z"), pe("0"), pe("0")],
                },
                alloc::vec![Check::Trace, Check::Divergence],
            ),
            constraints: Vec::new(),
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // Vector family with mu != 0, at the constants that satisfy both side
    // constraints.
    {
        let p = FamilyParams::numeric(1, 1, 2, 1);
        let b = build_t2(
            &T2Inputs {
                a: pe("0"),
                b: pe("y"),
                c: pe("0"),
                v: pe("0"),
                xi: pe("x"),
            },
            &p,
        )
        .unwrap();
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-E1",
                1,
                (val(1), val(1), val(2)),
                b.f.clone(),
                built_vector(&b),
                alloc::vec![Check::Ry],
            ),
            constraints: b.constraints,
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // mu = 0, vanishing rotation coefficient, f = 1/z^2.
    {
        let p = FamilyParams::numeric(1, 0, 0, 1);
        let b = build_t3(
            &T3Inputs {
                z1: pe("0"),
                z2: pe("z"),
                z3: pe("z"),
                xi: None,
                z4: Some(pe("0")),
                f: pe("z^-2"),
            },
            &p,
        )
        .unwrap();
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-C1",
                1,
                (val(1), val(0), val(0)),
                b.f.clone(),
                built_vector(&b),
                alloc::vec![Check::Ry],
            ),
            constraints: b.constraints,
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // mu = 0 with nonzero z1 determining f = -4z; b0 stays free.
    {
        let p = FamilyParams::numeric(1, 1, 0, 1);
        let b = build_c2(
            &C2Inputs {
                z1: pe("1"),
                z2: pe("0"),
                z3: pe("z^2"),
                xi: pe("2z y + 2z^2 + b0"),
            },
            &p,
        )
        .unwrap();
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-C2",
                1,
                (val(1), val(1), val(0)),
                b.f.clone(),
                built_vector(&b),
                alloc::vec![Check::Ry],
            ),
            constraints: b.constraints,
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // Gradient family with beta != mu, reduced inputs.
    {
        let p = FamilyParams::numeric(1, 1, 2, 1);
        let b = build_t1_gradient(
            &T1Inputs {
                a: pe("0"),
                b: pe("0"),
                r: pe("z"),
                c: pe("0"),
                d: pe("1"),
            },
            &p,
        )
        .unwrap();
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-t1-reduced",
                1,
                (val(1), val(1), val(2)),
                b.f.clone(),
                built_vector(&b),
                alloc::vec![Check::GradientRy],
            ),
            constraints: b.constraints,
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // Steady case with beta = mu = 0: f chosen so the ODE constraint
    // closes exactly (rate matched against the integrating factor).
    {
        let p = FamilyParams::numeric(0, 0, 0, 1);
        let b = build_tt(
            &TtCase::BothZero {
                a: pe("2"),
                cap_f: pe("exp(z)"),
                f: pe("2x - 2 exp(z) y"),
            },
            &p,
        )
        .unwrap();
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-TT-ode",
                1,
                (val(0), val(0), val(0)),
                b.f.clone(),
                built_vector(&b),
                alloc::vec![Check::GradientRy],
            ),
            constraints: b.constraints,
            diagnostics: Vec::new(),
            expect: Vec::new(),
        });
    }

    // Final-family worked data: potential with an alpha y x cross term.
    // The three reduced identities hold; the full residual keeps nonzero
    // (1,2) and (3,3) components, which the expectations record.
    {
        let f = pe("2 C exp(-2z)");
        let pot = pe("(alpha y - z) x - 1/2 y^2 - C/2 exp(-2z)");
        let w = Metric::new(Expr::num(1), f.clone());
        let params = Params::new(Expr::num(1), Expr::num(1), Expr::num(0));
        let r = soliton::gradient_ry_residual(&w, &pot, &params);
        let diagnostics = alloc::vec![
            (
                "identity-xz".to_string(),
                simplify(&Expr::add(
                    diff(&diff(&pot, Coord::X), Coord::Z),
                    Expr::num(1)
                ))
            ),
            (
                "identity-yy".to_string(),
                simplify(&Expr::add(diff_n(&pot, Coord::Y, 2), Expr::num(1)))
            ),
            (
                "identity-zz".to_string(),
                simplify(&Expr::add(diff_n(&pot, Coord::Z, 2), f.clone()))
            ),
            (
                "residual-33-value".to_string(),
                simplify(&Expr::sub(
                    r[2][2].clone(),
                    pe("4 C exp(-2z) (alpha y - z)")
                ))
            ),
        ];
        out.push(CatalogEntry {
            scenario: scenario(
                "ex-fin",
                1,
                (val(1), val(1), val(0)),
                f,
                FieldSpec::Gradient(pot),
                alloc::vec![Check::GradientRy],
            ),
            constraints: Vec::new(),
            diagnostics,
            expect: alloc::vec![
                Expectation {
                    check: "gradient_ry",
                    component: "12",
                    zero: false
                },
                Expectation {
                    check: "gradient_ry",
                    component: "33",
                    zero: false
                },
            ],
        });
    }

    out
}

pub fn lookup(name: &str) -> Result<CatalogEntry, FamilyError> {
    catalog()
        .into_iter()
        .find(|e| e.name() == name)
        .ok_or_else(|| FamilyError::UnknownName(name.to_string()))
}
