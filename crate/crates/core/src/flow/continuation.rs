use serde::{Deserialize, Serialize};

use super::cycle::{find_limit_cycle_with, first_return, CycleOptions, LimitCycle};
use crate::equilibria::{count_equilibria, quadratic_form};
use crate::error::{Error, Result};
use crate::field::Params;

/// Moves `p1` (Newton iteration) until `Q(p1, p2) = target_q`.
pub fn perturb_off_stratum(params: &Params, target_q: f64) -> Result<Params> {
    let (p2, s1, s2) = (params.p2, params.s1, params.s2);
    let mut p1 = params.p1;
    for _ in 0..60 {
        let q = quadratic_form(p1, p2, params).value - target_q;
        if q.abs() <= 1e-15 * (1.0 + target_q.abs()) {
            break;
        }
        let dq = 2.0 * p1 - 2.0 * s2 * (p1 * s2 - p2 * s1);
        if dq == 0.0 {
            return Err(Error::Precondition("Q is stationary in p1"));
        }
        let step = q / dq;
        p1 -= step;
        if step.abs() <= 1e-16 * p1.abs().max(1.0) {
            break;
        }
    }
    let out = params.with_p1(p1);
    let q = quadratic_form(p1, p2, &out).value;
    if (q - target_q).abs() > 1e-12 * (1.0 + target_q.abs()) {
        return Err(Error::Precondition("could not reach the requested Q"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuedCycle {
    pub params: Params,
    pub q: f64,
    pub equilibrium_count: usize,
    pub cycle: LimitCycle,
}

/// Re-detects `cycle` after moving the parameters to `Q = target_q`, bracketing
/// outward from the previous fixed point.
pub fn continue_cycle(params: &Params, cycle: &LimitCycle, target_q: f64) -> Result<ContinuedCycle> {
    continue_cycle_with(params, cycle, target_q, &CycleOptions::default())
}

pub fn continue_cycle_with(
    params: &Params,
    cycle: &LimitCycle,
    target_q: f64,
    opts: &CycleOptions,
) -> Result<ContinuedCycle> {
    let moved = perturb_off_stratum(params, target_q)?;
    let section = cycle.section_angle;
    let d = |r: f64| first_return(&moved, r, section, &opts.coarse).map(|ret| ret.r - r);
    let r0 = cycle.fixed_r;
    let d0 = d(r0)?;
    let mut bracket = None;
    if d0 == 0.0 {
        bracket = Some((r0, r0));
    } else {
        let mut f = 1.01;
        while f < 4.0 && bracket.is_none() {
            for r in [r0 * f, r0 / f] {
                if let Ok(dr) = d(r) {
                    if dr.signum() != d0.signum() {
                        bracket = Some(if r > r0 { (r0, r) } else { (r, r0) });
                        break;
                    }
                }
            }
            f *= 1.25;
        }
    }
    let bracket = bracket.ok_or(Error::NoBracket { lo: d0, hi: d0 })?;
    let cycle = find_limit_cycle_with(&moved, bracket, section, opts)?;
    Ok(ContinuedCycle {
        q: quadratic_form(moved.p1, moved.p2, &moved).value,
        equilibrium_count: count_equilibria(&moved)?.count,
        params: moved,
        cycle,
    })
}
