//! Structured reports for `analyze`, `cycle` and `abel`.

use std::f64::consts::TAU;

use serde::Serialize;
use serde_json::{json, Map, Value};
use z2n_core::abel::{
    abel_coefficients, classify_infinity, classify_origin, q_2p1_criterion, sign_certificate_a_with,
    sign_certificate_b_with, uniqueness_certificate_with,
};
use z2n_core::equilibria::{all_equilibria_with, count_equilibria_with, quadratic_form, t_plus_minus, Equilibrium};
use z2n_core::field::is_hamiltonian;
use z2n_core::flow::{abel_periodic_solutions, continue_cycle, find_limit_cycles, LimitCycle};
use z2n_core::{Params, Tolerances};

use crate::error::{CliError, CliResult};

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// A computed section, or the error that prevented it.
fn field<T: Serialize>(r: z2n_core::Result<T>) -> Value {
    match r {
        Ok(v) => to_value(&v),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

pub fn params_value(p: &Params) -> Value {
    json!({ "p1": p.p1(), "p2": p.p2(), "s1": p.s1(), "s2": p.s2(), "n": p.n() })
}

fn equilibrium_value(e: &Equilibrium) -> Value {
    let z = e.state.to_cartesian();
    json!({
        "r": e.state.r,
        "theta": e.state.theta,
        "x": z.x,
        "y": z.y,
        "class": e.class.as_str(),
        "stability": to_value(&e.stability),
        "eigenvalues": e.eigenvalues.iter().map(|l| json!([l.re, l.im])).collect::<Vec<_>>(),
        "fundamental": e.fundamental,
    })
}

pub fn cycle_value(c: &LimitCycle) -> Value {
    json!({
        "fixed_r": c.fixed_r,
        "section_angle": c.section_angle,
        "period": c.period,
        "multiplier": c.multiplier,
        "stability": to_value(&c.stability),
        "hyperbolic": c.hyperbolic,
        "enclosed_equilibria": c.enclosed_equilibria,
        "fixed_point_residual": c.fixed_point_residual,
        "avoids_singular_set": c.avoids_singular_set,
        "min_abs_theta_dot": c.min_abs_theta_dot,
    })
}

pub fn analyze_report(p: &Params, tol: &Tolerances, with_cycles: bool) -> Value {
    let q = quadratic_form(p.p1(), p.p2(), p);
    let (tp, tm) = t_plus_minus(p);
    let mut out = Map::new();
    out.insert("params".into(), params_value(p));
    out.insert(
        "warnings".into(),
        Value::Array(p.warnings().iter().map(|w| Value::String(w.message().into())).collect()),
    );
    out.insert("hamiltonian".into(), Value::Bool(is_hamiltonian(p)));
    out.insert(
        "quadratic_forms".into(),
        json!({
            "q": q.value,
            "q_2p1": q_2p1_criterion(p),
            "b_criterion": z2n_core::abel::b_criterion(p),
            "q_zero_band": tol.q_band(q.scale()),
            "t_plus": tp,
            "t_minus": tm,
        }),
    );
    out.insert("equilibrium_count".into(), field(count_equilibria_with(p, tol)));
    out.insert(
        "equilibria".into(),
        match all_equilibria_with(p, tol) {
            Ok(list) => Value::Array(list.iter().map(equilibrium_value).collect()),
            Err(e) => json!({ "error": e.to_string() }),
        },
    );
    out.insert("origin".into(), field(classify_origin(p)));
    out.insert("infinity".into(), to_value(&classify_infinity(p)));
    out.insert(
        "sign_certificates".into(),
        json!({
            "a": field(sign_certificate_a_with(p, tol)),
            "b": field(sign_certificate_b_with(p, tol)),
        }),
    );
    out.insert(
        "uniqueness".into(),
        match uniqueness_certificate_with(p, tol) {
            Ok(Some(c)) => json!({ "certified": true, "conditions": to_value(&c.conditions) }),
            Ok(None) => json!({ "certified": false, "conditions": [] }),
            Err(e) => json!({ "error": e.to_string() }),
        },
    );
    if with_cycles {
        out.insert(
            "cycles".into(),
            match find_limit_cycles(p) {
                Ok(cs) => Value::Array(cs.iter().map(cycle_value).collect()),
                Err(e) => json!({ "error": e.to_string() }),
            },
        );
    }
    Value::Object(out)
}

/// Target `Q` for `--continue`: `+`, `-` or a number.
pub fn parse_continue(s: &str) -> CliResult<f64> {
    match s {
        "+" => Ok(1e-3),
        "-" => Ok(-1e-3),
        v => v
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::Usage(format!("--continue expects +, - or a number, got `{v}`"))),
    }
}

pub fn cycle_report(p: &Params, continue_to: Option<f64>) -> CliResult<Value> {
    let cycles = find_limit_cycles(p).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut out = Map::new();
    out.insert("params".into(), params_value(p));
    out.insert("no_cycle_found".into(), Value::Bool(cycles.is_empty()));
    out.insert("cycles".into(), Value::Array(cycles.iter().map(cycle_value).collect()));
    if let Some(target) = continue_to {
        let value = match cycles.first() {
            None => json!({ "target_q": target, "error": "no cycle to continue" }),
            Some(c) => {
                let cont = continue_cycle(p, c, target).map_err(|e| CliError::Numerical(e.to_string()))?;
                json!({
                    "target_q": target,
                    "params": params_value(&cont.params),
                    "q": cont.q,
                    "equilibrium_count": cont.equilibrium_count,
                    "cycle": cycle_value(&cont.cycle),
                })
            }
        };
        out.insert("continuation".into(), value);
    }
    Ok(Value::Object(out))
}

pub fn abel_report(p: &Params, tol: &Tolerances, samples: usize, grid: usize) -> CliResult<Value> {
    let coeffs = abel_coefficients(p).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<Value> = (0..samples)
        .map(|k| {
            let t = TAU * k as f64 / samples as f64;
            json!({ "theta": t, "a": coeffs.a(t), "b": coeffs.b(t), "b_no_derivative": coeffs.b_no_derivative(t), "c": coeffs.c() })
        })
        .collect();
    let solutions = abel_periodic_solutions(p, grid).map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(json!({
        "params": params_value(p),
        "samples": rows,
        "sign_certificates": {
            "a": field(sign_certificate_a_with(p, tol)),
            "b": field(sign_certificate_b_with(p, tol)),
        },
        "uniqueness": match uniqueness_certificate_with(p, tol) {
            Ok(Some(c)) => json!({ "certified": true, "conditions": to_value(&c.conditions) }),
            Ok(None) => json!({ "certified": false, "conditions": [] }),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "periodic_solutions": to_value(&solutions),
    }))
}
