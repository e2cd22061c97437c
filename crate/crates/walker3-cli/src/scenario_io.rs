//! Scenario file format: JSON in, JSON out. Deserialization is strict
//! (unknown keys are schema errors) and every expression field holds the
//! text syntax of the core crate.

use serde::{Deserialize, Serialize};
use walker3::expr::{Expr, Rat};
use walker3::parse::parse;
use walker3::scenario::{Check, FieldSpec, ParamVal, Scenario};
use walker3::simplify;
use walker3::verify::Policy;

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDto {
    pub name: String,
    pub epsilon: i8,
    pub beta: ParamDto,
    pub lambda: ParamDto,
    pub mu: ParamDto,
    pub f: String,
    pub field: FieldDto,
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingDto>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamDto {
    Num(i64),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldDto {
    Vector([String; 3]),
    Gradient(String),
    Hodge { potential: String, y: [String; 3] },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingDto {
    #[serde(default = "default_count")]
    pub count: u32,
    #[serde(default = "default_range")]
    pub range: [f64; 2],
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_count() -> u32 {
    Policy::default().count
}
fn default_range() -> [f64; 2] {
    let (lo, hi) = Policy::default().range;
    [lo, hi]
}
fn default_seed() -> u64 {
    Policy::default().seed
}
fn default_tol() -> f64 {
    Policy::default().tol
}

fn parse_expr(field: &str, s: &str) -> Result<Expr, CliError> {
    parse(s).map_err(|e| CliError::Expr {
        field: field.to_string(),
        message: e.to_string(),
    })
}

fn parse_param(name: &str, dto: &ParamDto) -> Result<ParamVal, CliError> {
    let text = match dto {
        ParamDto::Num(n) => return Ok(ParamVal::Value(Rat::from_integer((*n).into()))),
        ParamDto::Text(t) => t,
    };
    if text == "free" {
        return Ok(ParamVal::Free);
    }
    match simplify(&parse_expr(name, text)?) {
        Expr::Rational(r) => Ok(ParamVal::Value(r)),
        _ => Err(CliError::Value(format!(
            "{name} must be a rational constant or \"free\", got {text:?}"
        ))),
    }
}

pub fn to_scenario(dto: &ScenarioDto) -> Result<Scenario, CliError> {
    if dto.epsilon != 1 && dto.epsilon != -1 {
        return Err(CliError::Value(format!(
            "epsilon must be 1 or -1, got {}",
            dto.epsilon
        )));
    }
    let beta = parse_param("beta", &dto.beta)?;
    let lambda = parse_param("lambda", &dto.lambda)?;
    let mu = parse_param("mu", &dto.mu)?;
    let f = parse_expr("f", &dto.f)?;
    let field = match &dto.field {
        FieldDto::Vector(v) => FieldSpec::Vector([
            parse_expr("field.vector[0]", &v[0])?,
            parse_expr("field.vector[1]", &v[1])?,
            parse_expr("field.vector[2]", &v[2])?,
        ]),
        FieldDto::Gradient(p) => FieldSpec::Gradient(parse_expr("field.gradient", p)?),
        FieldDto::Hodge { potential, y } => FieldSpec::Hodge {
            potential: parse_expr("field.hodge.potential", potential)?,
            y: [
                parse_expr("field.hodge.y[0]", &y[0])?,
                parse_expr("field.hodge.y[1]", &y[1])?,
                parse_expr("field.hodge.y[2]", &y[2])?,
            ],
        },
    };
    let mut checks = Vec::new();
    for c in &dto.checks {
        checks.push(
            Check::from_name(c).ok_or_else(|| CliError::Value(format!("unknown check {c:?}")))?,
        );
    }
    // the scalar-curvature coupling needs a concrete mu for every check
    // that builds the residual right-hand side
    let needs_mu = checks
        .iter()
        .any(|c| matches!(c, Check::Ry | Check::GradientRy | Check::Trace));
    if needs_mu && mu == ParamVal::Free {
        return Err(CliError::Value(
            "mu cannot be \"free\" when ry, gradient_ry, or trace checks are requested".into(),
        ));
    }
    let sampling = match &dto.sampling {
        None => Policy::default(),
        Some(s) => Policy {
            count: s.count,
            range: (s.range[0], s.range[1]),
            seed: s.seed,
            tol: s.tol,
        },
    };
    Ok(Scenario {
        name: dto.name.clone(),
        epsilon: dto.epsilon,
        beta,
        lambda,
        mu,
        f,
        field,
        checks,
        sampling,
    })
}

fn param_dto(v: &ParamVal) -> ParamDto {
    match v {
        ParamVal::Free => ParamDto::Text("free".into()),
        ParamVal::Value(r) => ParamDto::Text(format!("{}", Expr::Rational(r.clone()))),
    }
}

pub fn from_scenario(s: &Scenario) -> ScenarioDto {
    let field = match &s.field {
        FieldSpec::Vector(v) => {
            FieldDto::Vector([format!("{}", v[0]), format!("{}", v[1]), format!("{}", v[2])])
        }
        FieldSpec::Gradient(p) => FieldDto::Gradient(format!("{p}")),
        FieldSpec::Hodge { potential, y } => FieldDto::Hodge {
            potential: format!("{potential}"),
            y: [format!("{}", y[0]), format!("{}", y[1]), format!("{}", y[2])],
        },
    };
    ScenarioDto {
        name: s.name.clone(),
        epsilon: s.epsilon,
        beta: param_dto(&s.beta),
        lambda: param_dto(&s.lambda),
        mu: param_dto(&s.mu),
        f: format!("{}", s.f),
        field,
        checks: s.checks.iter().map(|c| c.name().to_string()).collect(),
        sampling: None,
    }
}

/// A scenario file is either a bare scenario object or the wrapper that
/// `build` writes ({"scenario": ..., "constraints": ...}).
#[derive(Debug, Deserialize)]
pub struct BuiltFileDto {
    pub scenario: ScenarioDto,
}

pub fn read_scenario_file(text: &str) -> Result<Scenario, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let dto = if value.get("scenario").is_some() {
        serde_json::from_value::<BuiltFileDto>(value)?.scenario
    } else {
        serde_json::from_value::<ScenarioDto>(value)?
    };
    to_scenario(&dto)
}
