//! Zero-testing of symbolic expressions: first canonically, then (when the
//! canonical form is not literally zero) numerically at seeded random
//! points. Expressions still containing unbound opaque function symbols
//! cannot be sampled and yield a conditional verdict.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::simplify;
use crate::eval::{eval, Env, EvalError, EvalStats};
use crate::expr::Expr;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The canonical form is literally zero.
    ProvedZero,
    /// Not symbolically zero, but within tolerance at every sample point.
    NumericallyZero { samples: u32, max_abs: f64 },
    /// A concrete witness where the expression is non-negligible.
    NonZero {
        point: [f64; 3],
        params: Vec<(String, f64)>,
        value: f64,
    },
    /// Contains unbound opaque symbols; zero only conditionally on them.
    Conditional { residual: Expr },
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(
            self,
            Verdict::ProvedZero | Verdict::NumericallyZero { .. }
        )
    }
}

#[derive(Clone, Debug)]
pub struct Policy {
    pub count: u32,
    pub range: (f64, f64),
    pub seed: u64,
    pub tol: f64,
}

impl Default for Policy {
    fn default() -> Policy {
        Policy {
            count: 64,
            range: (-2.0, 2.0),
            seed: 42,
            tol: 1e-9,
        }
    }
}

impl Policy {
    /// Decorrelated seed for the idx-th expression checked under one policy.
    pub fn seed_for(&self, idx: u64) -> u64 {
        self.seed
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(idx + 1))
    }

    pub fn with_seed(&self, seed: u64) -> Policy {
        Policy {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    /// Too many sample points rejected (poles / domain errors).
    SamplingExhausted,
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

struct FreeSymbols {
    params: Vec<(String, bool)>, // (name, is_sign)
    opaques: BTreeSet<String>,
}

fn free_symbols(e: &Expr, env: &Env) -> FreeSymbols {
    let mut params: Vec<(String, bool)> = Vec::new();
    let mut opaques = BTreeSet::new();
    e.visit(&mut |n| match n {
        Expr::Param(p) => {
            if !env.params.contains_key(&p.name)
                && !params.iter().any(|(n, _)| *n == p.name)
            {
                params.push((p.name.clone(), p.sign));
            }
        }
        Expr::Opaque(o) => {
            if !env.opaques.contains_key(&o.name) {
                opaques.insert(o.name.clone());
            }
        }
        _ => {}
    });
    params.sort();
    FreeSymbols { params, opaques }
}

/// Full zero test under the policy. `env` supplies fixed parameter values
/// and opaque closed forms; anything unbound is sampled (sign symbols from
/// {-1, +1}, other parameters uniformly from the range).
pub fn check_zero(e: &Expr, env: &Env, policy: &Policy) -> Result<Verdict, VerifyError> {
    let s = simplify(e);
    if s.is_zero() {
        return Ok(Verdict::ProvedZero);
    }
    let free = free_symbols(&s, env);
    if !free.opaques.is_empty() {
        return Ok(Verdict::Conditional { residual: s });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let (lo, hi) = policy.range;
    let span = hi - lo;
    let mut max_abs: f64 = 0.0;
    let mut accepted = 0u32;
    let budget = policy.count.saturating_mul(100);
    let mut attempts = 0u32;
    while accepted < policy.count {
        if attempts >= budget {
            return Err(VerifyError::SamplingExhausted);
        }
        attempts += 1;
        let mut trial = env.clone();
        for c in trial.coords.iter_mut() {
            *c = lo + span * unit_f64(&mut rng);
        }
        for (name, is_sign) in &free.params {
            let v = if *is_sign {
                if rng.next_u64() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                lo + span * unit_f64(&mut rng)
            };
            trial.params.insert(name.clone(), v);
        }
        let mut st = EvalStats::default();
        let v = match eval(&s, &trial, &mut st) {
            Ok(v) => v,
            Err(EvalError::Domain) | Err(EvalError::NonFinite) => continue,
            Err(EvalError::UnboundParam(_)) | Err(EvalError::UnboundOpaque(_)) => {
                // cannot happen: free symbols were just collected
                return Ok(Verdict::Conditional { residual: s });
            }
        };
        if st.min_den < 1e-6 {
            continue;
        }
        let tol_eff = policy.tol * (1.0 + st.max_mag);
        if libm::fabs(v) > tol_eff {
            let params = free
                .params
                .iter()
                .map(|(n, _)| (n.clone(), trial.params[n]))
                .collect();
            return Ok(Verdict::NonZero {
                point: trial.coords,
                params,
                value: v,
            });
        }
        if libm::fabs(v) > max_abs {
            max_abs = libm::fabs(v);
        }
        accepted += 1;
    }
    Ok(Verdict::NumericallyZero {
        samples: accepted,
        max_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Coord;
    use crate::parse::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn run(e: &Expr) -> Verdict {
        check_zero(e, &Env::default(), &Policy::default()).unwrap()
    }

    #[test]
    fn proves_symbolic_zeros() {
        assert_eq!(run(&p("(x+y)^2 - x^2 - 2x y - y^2")), Verdict::ProvedZero);
        assert_eq!(run(&p("sin(x)^2 + cos(x)^2 - 1")), Verdict::ProvedZero);
    }

    #[test]
    fn numerically_zero_when_canon_misses() {
        // log(exp(x)) - x is zero but not in the polynomial theory.
        let v = run(&p("log(exp(x)) - x"));
        match v {
            Verdict::NumericallyZero { samples, max_abs } => {
                assert_eq!(samples, 64);
                assert!(max_abs < 1e-9);
            }
            other => panic!("expected numeric zero, got {other:?}"),
        }
    }

    #[test]
    fn finds_witness() {
        match run(&p("x*y - 1")) {
            Verdict::NonZero { value, .. } => assert!(value.abs() > 1e-9),
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn samples_free_parameters_deterministically() {
        let e = p("alpha*x - 3");
        let a = run(&e);
        let b = run(&e);
        assert_eq!(a, b);
        match a {
            Verdict::NonZero { params, .. } => {
                assert_eq!(params.len(), 1);
                assert_eq!(params[0].0, "alpha");
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn sign_symbols_sampled_from_pm_one() {
        // eps^2 - 1 is proved zero symbolically; eps - 1 must find eps = -1.
        assert_eq!(run(&p("eps^2 - 1")), Verdict::ProvedZero);
        match run(&p("eps - 1")) {
            Verdict::NonZero { params, value, .. } => {
                assert_eq!(params[0], ("eps".into(), -1.0));
                assert!((value + 2.0).abs() < 1e-12);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn opaque_symbols_give_conditional() {
        let v = run(&p("F(z) - 1"));
        assert!(matches!(v, Verdict::Conditional { .. }));
        // ...unless the environment binds them.
        let mut env = Env::default();
        env.opaques.insert("F".into(), Expr::num(1));
        let v = check_zero(&p("F(z) - 1"), &env, &Policy::default()).unwrap();
        assert!(matches!(v, Verdict::NumericallyZero { .. }));
    }

    #[test]
    fn near_pole_samples_are_rejected_not_failed() {
        // 1/x - 1/x written opaquely enough to dodge the canonical zero
        // is still fine; here check that a genuine pole function just
        // samples around its pole.
        let v = run(&p("1/(x - 1) - 1/(x - 1)"));
        assert_eq!(v, Verdict::ProvedZero);
        let v = run(&p("log(exp(1/(x-1))) - 1/(x-1)"));
        assert!(matches!(v, Verdict::NumericallyZero { .. }));
    }

    #[test]
    fn exhaustion_reported() {
        // log of a strictly negative quantity over the whole range.
        let e = p("log(-10 - x^2)");
        let r = check_zero(&e, &Env::default(), &Policy::default());
        assert_eq!(r, Err(VerifyError::SamplingExhausted));
    }

    #[test]
    fn fixed_env_params_are_respected() {
        let mut env = Env::default();
        env.params.insert("beta".into(), 2.0);
        let v = check_zero(&p("beta - 2"), &env, &Policy::default()).unwrap();
        assert!(matches!(v, Verdict::NumericallyZero { .. }));
    }

    #[test]
    fn per_index_seeds_differ() {
        let p0 = Policy::default();
        assert_ne!(p0.seed_for(0), p0.seed_for(1));
        assert_ne!(p0.seed_for(0), p0.seed);
    }

    #[test]
    fn antideriv_numeric_path() {
        // d/dy INT(exp(y^2), y, 0) = exp(y^2) symbolically; check the
        // quadrature agrees with a shifted lower bound identity:
        // INT(2y, y, 0) - y^2 == 0 numerically.
        let e = Expr::sub(
            Expr::antideriv(p("2y"), Coord::Y, crate::expr::rat(0, 1)),
            p("y^2"),
        );
        let v = run(&e);
        assert!(matches!(v, Verdict::NumericallyZero { .. }), "{v:?}");
    }
}
