//! The `build` subcommand: read a family-inputs file, run the matching
//! constructor from the core crate, and emit a runnable scenario plus the
//! side constraints the family leaves open.

use std::collections::BTreeMap;

use serde::Deserialize;
use walker3::expr::Expr;
use walker3::families::{
    build_beta0, build_c2, build_fin, build_t1_gradient, build_t2, build_t3, build_tt,
    Beta0Branch, BuiltField, BuiltScenario, C2Inputs, FamilyParams, FinInputs, T1Inputs, T2Inputs,
    T3Inputs, TtCase,
};
use walker3::parse::parse;
use walker3::scenario::{Check, FieldSpec, ParamVal, Scenario};
use walker3::simplify;
use walker3::verify::Policy;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildDto {
    #[serde(default)]
    pub name: Option<String>,
    pub params: BuildParamsDto,
    #[serde(default)]
    pub case: Option<String>,
    #[serde(default)]
    pub branch: Option<String>,
    pub inputs: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildParamsDto {
    pub beta: serde_json::Value,
    pub lambda: serde_json::Value,
    pub mu: serde_json::Value,
    pub epsilon: i8,
}

fn rational(name: &str, v: &serde_json::Value) -> Result<Expr, CliError> {
    let text = match v {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => {
            return Err(CliError::Value(format!(
                "params.{name} must be a number or string, got {other}"
            )))
        }
    };
    match simplify(&parse(&text).map_err(|e| CliError::Expr {
        field: format!("params.{name}"),
        message: e.to_string(),
    })?) {
        e @ Expr::Rational(_) => Ok(e),
        _ => Err(CliError::Value(format!(
            "params.{name} must be a rational constant, got {text:?}"
        ))),
    }
}

struct Inputs<'a>(&'a BTreeMap<String, String>);

impl Inputs<'_> {
    fn get(&self, key: &str) -> Result<Expr, CliError> {
        let text = self
            .0
            .get(key)
            .ok_or_else(|| CliError::Value(format!("missing input {key:?}")))?;
        parse(text).map_err(|e| CliError::Expr {
            field: format!("inputs.{key}"),
            message: e.to_string(),
        })
    }

    fn get_opt(&self, key: &str) -> Result<Option<Expr>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(_) => self.get(key).map(Some),
        }
    }
}

pub fn build_family(
    family: &str,
    dto: &BuildDto,
) -> Result<(Scenario, Vec<(String, String)>), CliError> {
    if dto.params.epsilon != 1 && dto.params.epsilon != -1 {
        return Err(CliError::Value(format!(
            "params.epsilon must be 1 or -1, got {}",
            dto.params.epsilon
        )));
    }
    let beta = rational("beta", &dto.params.beta)?;
    let lambda = rational("lambda", &dto.params.lambda)?;
    let mu = rational("mu", &dto.params.mu)?;
    let fp = FamilyParams {
        beta: beta.clone(),
        lambda: lambda.clone(),
        mu: mu.clone(),
        eps: Expr::num(dto.params.epsilon as i64),
    };
    let i = Inputs(&dto.inputs);
    let case = |what: &str, opts: &[&str]| -> Result<String, CliError> {
        let sel = match what {
            "case" => dto.case.as_ref(),
            _ => dto.branch.as_ref(),
        };
        match sel {
            Some(s) if opts.contains(&s.as_str()) => Ok(s.clone()),
            Some(s) => Err(CliError::Value(format!(
                "unknown {what} {s:?}; expected one of {opts:?}"
            ))),
            None => Err(CliError::Value(format!(
                "family requires a {what} field (one of {opts:?})"
            ))),
        }
    };
    let built: BuiltScenario = match family {
        "t2" => build_t2(
            &T2Inputs {
                a: i.get("a")?,
                b: i.get("b")?,
                c: i.get("c")?,
                v: i.get("v")?,
                xi: i.get("xi")?,
            },
            &fp,
        )
        .map_err(CliError::Family)?,
        "t3" => build_t3(
            &T3Inputs {
                z1: i.get("z1")?,
                z2: i.get("z2")?,
                z3: i.get("z3")?,
                xi: i.get_opt("xi")?,
                z4: i.get_opt("z4")?,
                f: i.get("f")?,
            },
            &fp,
        )
        .map_err(CliError::Family)?,
        "c2" => build_c2(
            &C2Inputs {
                z1: i.get("z1")?,
                z2: i.get("z2")?,
                z3: i.get("z3")?,
                xi: i.get("xi")?,
            },
            &fp,
        )
        .map_err(CliError::Family)?,
        "t1" => build_t1_gradient(
            &T1Inputs {
                a: i.get("a")?,
                b: i.get("b")?,
                r: i.get("r")?,
                c: i.get("c")?,
                d: i.get("d")?,
            },
            &fp,
        )
        .map_err(CliError::Family)?,
        "tt" => {
            let c = case(
                "case",
                &[
                    "both-zero",
                    "equal-exp",
                    "equal-quad",
                    "beta-zero-slope",
                    "beta-zero-free",
                    "generic",
                ],
            )?;
            let tc = match c.as_str() {
                "both-zero" => TtCase::BothZero {
                    a: i.get("a")?,
                    cap_f: i.get("F")?,
                    f: i.get("f")?,
                },
                "equal-exp" => TtCase::EqualExp {
                    k: i.get("k")?,
                    f2: i.get("f2")?,
                    f3: i.get("f3")?,
                    a_h: i.get("A")?,
                    b_h: i.get("B")?,
                },
                "equal-quad" => TtCase::EqualQuad {
                    f2: i.get("f2")?,
                    f3: i.get("f3")?,
                    f6: i.get("f6")?,
                    f7: i.get("f7")?,
                },
                "beta-zero-slope" => TtCase::BetaZeroSlope {
                    a: i.get("a")?,
                    f2: i.get("f2")?,
                    f3: i.get("f3")?,
                    f4: i.get("f4")?,
                },
                "beta-zero-free" => TtCase::BetaZeroFree {
                    b: i.get("b")?,
                    c: i.get("c")?,
                    f1: i.get("f1")?,
                    f2: i.get("f2")?,
                },
                _ => TtCase::Generic {
                    f2: i.get("f2")?,
                    f5: i.get("f5")?,
                    f6: i.get("f6")?,
                    f7: i.get("f7")?,
                },
            };
            build_tt(&tc, &fp).map_err(CliError::Family)?
        }
        "beta0" => {
            let b = case("branch", &["mu-zero", "mu-nonzero"])?;
            let br = match b.as_str() {
                "mu-zero" => Beta0Branch::MuZero {
                    cap_f: i.get("F")?,
                    a: i.get("a")?,
                    b: i.get("b")?,
                    c: i.get("c")?,
                },
                _ => Beta0Branch::MuNonzero {
                    cap_f: i.get("F")?,
                    f2: i.get("f2")?,
                    f4: i.get("f4")?,
                    f5: i.get("f5")?,
                },
            };
            build_beta0(&br, &fp).map_err(CliError::Family)?
        }
        "fin" => build_fin(
            &FinInputs {
                cap_f: i.get("F")?,
                f2: i.get("f2")?,
                a: i.get("a")?,
                b: i.get("b")?,
            },
            &fp,
        )
        .map_err(CliError::Family)?,
        other => {
            return Err(CliError::Value(format!(
                "unknown family {other:?}; expected one of t2, t3, c2, t1, tt, beta0, fin"
            )))
        }
    };
    let rat_of = |e: &Expr| match e {
        Expr::Rational(r) => ParamVal::Value(r.clone()),
        _ => unreachable!("params validated as rationals"),
    };
    let (field, checks) = match &built.field {
        BuiltField::Vector(v) => (FieldSpec::Vector(v.clone()), vec![Check::Ry]),
        BuiltField::Gradient(p) => (FieldSpec::Gradient(p.clone()), vec![Check::GradientRy]),
    };
    let scenario = Scenario {
        name: dto
            .name
            .clone()
            .unwrap_or_else(|| format!("{family}-built")),
        epsilon: dto.params.epsilon,
        beta: rat_of(&beta),
        lambda: rat_of(&lambda),
        mu: rat_of(&mu),
        f: built.f.clone(),
        field,
        checks,
        sampling: Policy::default(),
    };
    let constraints = built
        .constraints
        .iter()
        .map(|(k, e)| (k.clone(), format!("{e}")))
        .collect();
    Ok((scenario, constraints))
}
