//! Report rendering: a stable JSON document (keys sorted, fixed field
//! set) or a short text form. Identical inputs produce byte-identical
//! JSON so reports can be golden-tested.

use serde_json::{json, Map, Value};
use walker3::scenario::{Scenario, ScenarioReport};
use walker3::verify::Verdict;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::ProvedZero => json!({"kind": "proved_zero"}),
        Verdict::NumericallyZero { samples, max_abs } => json!({
            "kind": "numerically_zero",
            "max_abs": max_abs,
            "samples": samples,
        }),
        Verdict::NonZero {
            point,
            params,
            value,
        } => {
            let mut pm = Map::new();
            for (n, x) in params {
                pm.insert(n.clone(), json!(x));
            }
            json!({
                "kind": "non_zero",
                "params": Value::Object(pm),
                "point": point,
                "value": value,
            })
        }
        Verdict::Conditional { residual } => json!({
            "kind": "conditional",
            "residual": format!("{residual}"),
        }),
    }
}

fn overall(components: &[(String, Verdict)]) -> &'static str {
    if components.iter().all(|(_, v)| v.is_zero()) {
        "pass"
    } else if components
        .iter()
        .all(|(_, v)| v.is_zero() || matches!(v, Verdict::Conditional { .. }))
    {
        "conditional"
    } else {
        "fail"
    }
}

pub fn report_json(s: &Scenario, r: &ScenarioReport) -> Value {
    let mut checks = Map::new();
    for c in &r.checks {
        let mut comps = Map::new();
        for (key, v) in &c.components {
            comps.insert(key.clone(), verdict_json(v));
        }
        checks.insert(
            c.check.name().to_string(),
            json!({
                "components": Value::Object(comps),
                "overall": overall(&c.components),
            }),
        );
    }
    json!({
        "checks": Value::Object(checks),
        "name": r.name,
        "sampling": {
            "count": s.sampling.count,
            "range": [s.sampling.range.0, s.sampling.range.1],
            "seed": s.sampling.seed,
            "tol": s.sampling.tol,
        },
        "version": VERSION,
    })
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::ProvedZero => "proved zero".into(),
        Verdict::NumericallyZero { samples, max_abs } => {
            format!("numerically zero ({samples} samples, max |value| {max_abs:.3e})")
        }
        Verdict::NonZero { point, value, .. } => format!(
            "NON-ZERO (value {value:.6e} at ({:.4}, {:.4}, {:.4}))",
            point[0], point[1], point[2]
        ),
        Verdict::Conditional { residual } => format!("conditional on: {residual}"),
    }
}

pub fn report_text(r: &ScenarioReport) -> String {
    let mut out = format!("{}\n", r.name);
    for c in &r.checks {
        out.push_str(&format!(
            "  {} [{}]\n",
            c.check.name(),
            overall(&c.components)
        ));
        for (key, v) in &c.components {
            out.push_str(&format!("    {key}: {}\n", verdict_text(v)));
        }
    }
    out
}
