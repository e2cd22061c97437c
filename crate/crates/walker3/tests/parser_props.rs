//! Parser properties: printing any expression re-parses to an equivalent
//! one, and arbitrary input never panics the parser. Also spot-checks that
//! symbolically proved zeros evaluate to zero numerically.

use proptest::prelude::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use walker3::canon::is_zero_sym;
use walker3::eval::{eval, Env, EvalStats};
use walker3::expr::{Func, Opaque};
use walker3::parse::parse;
use walker3::{simplify, Coord, Expr};

fn gen_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 {
        return match rng.next_u32() % 8 {
            0 => Expr::x(),
            1 => Expr::y(),
            2 => Expr::z(),
            3 => Expr::ratio((rng.next_u32() % 9) as i64 - 4, (rng.next_u32() % 4 + 1) as i64),
            4 => Expr::param("p"),
            5 => Expr::sign("eps"),
            6 => Expr::opaque("a", &[Coord::Y, Coord::Z]),
            _ => Expr::opaque("F", &[Coord::Z]),
        };
    }
    match rng.next_u32() % 8 {
        0 => Expr::add(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        1 => Expr::sub(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        2 => Expr::mul(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        3 => Expr::powi(gen_expr(rng, depth - 1), (rng.next_u32() % 3) as i64 - 1),
        4 => Expr::apply(Func::Sin, gen_expr(rng, depth - 1)),
        5 => Expr::exp(gen_expr(rng, depth - 1)),
        6 => Expr::sqrt(Expr::num((rng.next_u32() % 5 + 2) as i64)),
        _ => walker3::diff(&gen_expr(rng, depth - 1), Coord::Y),
    }
}

#[test]
fn display_reparses_to_equivalent_expression() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut checked = 0;
    while checked < 40 {
        let e = gen_expr(&mut rng, 3);
        let text = format!("{e}");
        let back = parse(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
        assert!(
            is_zero_sym(&Expr::sub(e.clone(), back)),
            "round trip drifted for {text}"
        );
        checked += 1;
    }
}

#[test]
fn derivative_notation_round_trips() {
    let d = Expr::Opaque(Opaque {
        name: "a".into(),
        args: vec![Coord::Y, Coord::Z],
        orders: vec![2, 1],
    });
    let text = format!("{d}");
    assert_eq!(parse(&text).unwrap(), d);
}

proptest! {
    #[test]
    fn parser_never_panics(s in ".{0,48}") {
        let _ = parse(&s);
    }

    #[test]
    fn parser_accepts_or_rejects_ascii_math(s in "[-+*/^ ()a-z0-9.]{0,32}") {
        if let Ok(e) = parse(&s) {
            // anything accepted must print and re-parse
            let text = format!("{e}");
            prop_assert!(parse(&text).is_ok(), "reprint failed for {}", text);
        }
    }
}

/// Proved zeros stay zero numerically: construct expressions that cancel
/// symbolically and confirm pointwise evaluation agrees.
#[test]
fn proved_zero_implies_numeric_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for _ in 0..20 {
        let a = gen_expr(&mut rng, 2);
        let b = gen_expr(&mut rng, 2);
        // (a+b)^2 - a^2 - 2ab - b^2 == 0 symbolically
        let d = Expr::sub(
            Expr::powi(Expr::add(a.clone(), b.clone()), 2),
            Expr::add_many(vec![
                Expr::powi(a.clone(), 2),
                Expr::mul_many(vec![Expr::num(2), a.clone(), b.clone()]),
                Expr::powi(b, 2),
            ]),
        );
        assert!(simplify(&d).is_zero());
        let mut env = Env::at(0.3, -0.7, 1.1);
        env.params.insert("p".into(), 0.5);
        env.params.insert("eps".into(), -1.0);
        env.opaques.insert("a".into(), parse("y z + 1").unwrap());
        env.opaques.insert("F".into(), parse("sin(z)").unwrap());
        let mut st = EvalStats::default();
        if let Ok(v) = eval(&d, &env, &mut st) {
            assert!(v.abs() <= 1e-9 * (1.0 + st.max_mag), "residual {v}");
        }
    }
}
