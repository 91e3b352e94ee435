//! Canonical JSON documents. Object keys are sorted, rationals are lowest-terms
//! strings, polynomials use the canonical text form accepted by the parser.

use serde_json::{json, Value};

use crate::engine::{MultitypeResult, StageTrace};
use crate::normalize::NormalizationReport;
use crate::poly_core::gauss::fmt_rational;
use crate::poly_core::{Jet, Rational};
use crate::transforms::{Direction, HoloMap};
use crate::weights::{Adaptedness, Weight};

pub fn rational(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

pub fn weight(w: &Weight) -> Value {
    Value::Array(w.lambdas().iter().map(rational).collect())
}

pub fn jet(f: &Jet) -> Value {
    Value::String(f.to_string())
}

pub fn map(m: &HoloMap) -> Value {
    let (zs, w) = m.components();
    json!({
        "z": zs.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
        "w": w.to_string(),
    })
}

pub fn chain(steps: &[(HoloMap, Direction)]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|(m, d)| {
                json!({
                    "direction": match d { Direction::Forward => "forward", Direction::Inverse => "inverse" },
                    "map": map(m),
                })
            })
            .collect(),
    )
}

fn stage(t: &StageTrace) -> Value {
    json!({
        "stage": t.stage,
        "weight": weight(&t.weight),
        "leading": jet(&t.leading),
        "eliminated": t.eliminated,
        "elimination_upper_bound": t.elimination_upper_bound,
        "elimination_complete": t.elimination_complete,
        "fixed": t.fixed.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "theta": t.theta.iter().map(|e| json!({
            "key": e.key.to_string(),
            "coeff": e.coeff.to_string(),
            "w": rational(&e.w),
        })).collect::<Vec<_>>(),
        "next_trailing": t.next_trailing.as_ref().map(rational),
        "steps": chain(&t.steps),
    })
}

pub fn multitype(r: &MultitypeResult) -> Value {
    let gs = &r.generating_sequence;
    json!({
        "multitype": r.multitype.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "weight": weight(&r.weight),
        "generating_sequence": {
            "weights": gs.weights.iter().map(weight).collect::<Vec<_>>(),
            "nu": gs.nus,
            "k": gs.ks,
        },
        "stages": r.traces.iter().map(stage).collect::<Vec<_>>(),
        "witness_map": chain(&r.chain),
        "adapted": jet(&r.adapted),
        "model": jet(&r.model),
        "soundness": {
            "bound": r.bound,
            "truncated": r.truncated,
            "elimination_complete": r.elimination_complete,
        },
    })
}

pub fn normalization(report: &NormalizationReport) -> Value {
    json!({
        "chain": report.chain.iter().map(map).collect::<Vec<_>>(),
        "normalized": jet(&report.normalized),
        "leading_terms": report.leading_terms.iter().map(|lt| json!({
            "k": lt.k + 1,
            "gamma": lt.gamma,
            "gamma_hat": lt.gamma_hat,
        })).collect::<Vec<_>>(),
        "residual_scalings": report.residuals.iter().map(|r| json!({
            "k": r.k + 1,
            "coeff": r.coeff.to_string(),
            "p": r.p,
            "q": r.q,
        })).collect::<Vec<_>>(),
        "literal_nonzero": report.literal_nonzero.iter().map(|(k, key, c)| json!({
            "k": k + 1,
            "key": key.to_string(),
            "coeff": c.to_string(),
        })).collect::<Vec<_>>(),
        "clean": report.is_clean(),
    })
}

pub fn adaptedness(a: &Adaptedness) -> Value {
    match a {
        Adaptedness::Yes(p) => json!({ "adapted": true, "leading": jet(p) }),
        Adaptedness::No(why) => json!({
            "adapted": false,
            "below_one": why.below_one.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "invalid_leading": why.invalid_leading.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "empty_leading": why.empty_leading,
        }),
    }
}

/// Pretty, newline-terminated; byte-identical for identical values.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
