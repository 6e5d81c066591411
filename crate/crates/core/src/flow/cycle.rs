use std::f64::consts::{PI, TAU};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::trajectory::{drive, Driven, FlowOptions, Segment, Termination};
use crate::equilibria::all_equilibria;
use crate::error::{Error, NoReturnReason, Result};
use crate::field::{polar_rates, Params, PolarState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnOptions {
    pub flow: FlowOptions,
    /// Rescaled-time budget for one revolution.
    pub horizon: f64,
    /// Accuracy of the crossing angle.
    pub event_tol: f64,
}

impl Default for ReturnOptions {
    fn default() -> Self {
        ReturnOptions {
            flow: FlowOptions::default(),
            horizon: 1e5,
            event_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstReturn {
    pub r: f64,
    /// Rescaled time of the revolution.
    pub period: f64,
    /// Sign of `theta'` on the section.
    pub direction: f64,
    #[serde(skip)]
    pub orbit: Vec<PolarState>,
}

fn no_return(t: Termination) -> Error {
    Error::NoReturn(match t {
        Termination::BlowUp => NoReturnReason::BlowUp,
        Termination::ConvergedToPoint => NoReturnReason::ConvergedToPoint,
        Termination::TimeLimit | Termination::SectionCrossing => NoReturnReason::TimeLimit,
    })
}

/// Crossing time of `theta = target` inside a step, by Illinois iteration on the dense output.
fn localize(seg: &Segment, target: f64, dir: f64, tol: f64) -> f64 {
    let g = |t: f64| dir * (seg.at(t).1 - target);
    let (mut a, mut b) = (seg.t0(), seg.t1());
    let (mut ga, mut gb) = (g(a), g(b));
    let mut side = 0;
    for _ in 0..200 {
        let mut t = b - gb * (b - a) / (gb - ga);
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let gt = g(t);
        if gt.abs() <= tol || (b - a) <= 1e-15 * b.abs().max(1.0) {
            return t;
        }
        if gt < 0.0 {
            (a, ga) = (t, gt);
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            (b, gb) = (t, gt);
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

fn check_section(params: &Params, r0: f64, section_angle: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Precondition("return map needs r0 > 0"));
    }
    let (_, td) = polar_rates(params, r0, section_angle);
    let scale = params.p2.abs() + r0 * params.c(section_angle).abs();
    if td.abs() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::SectionTangency { r: r0 });
    }
    Ok(td.signum())
}

/// First return to the ray `theta = section_angle` after one full revolution.
pub fn first_return(params: &Params, r0: f64, section_angle: f64, opts: &ReturnOptions) -> Result<FirstReturn> {
    first_return_impl(params, r0, section_angle, opts, false)
}

fn first_return_impl(
    params: &Params,
    r0: f64,
    section_angle: f64,
    opts: &ReturnOptions,
    record: bool,
) -> Result<FirstReturn> {
    let dir = check_section(params, r0, section_angle)?;
    let target = section_angle + dir * TAU;
    let mut orbit = Vec::new();
    if record {
        orbit.push(PolarState {
            r: r0,
            theta: section_angle.rem_euclid(TAU),
        });
    }
    let driven = drive(params, r0, section_angle, opts.horizon, &opts.flow, |seg| {
        let theta1 = seg.at(seg.t1()).1;
        if dir * (theta1 - target) >= 0.0 {
            let t = localize(seg, target, dir, opts.event_tol);
            if record {
                push_dense(&mut orbit, seg, seg.t0(), t);
            }
            return ControlFlow::Break(Some((seg.at(t).0, t)));
        }
        if dir * (theta1 - section_angle) < -TAU {
            return ControlFlow::Break(None);
        }
        if record {
            push_dense(&mut orbit, seg, seg.t0(), seg.t1());
        }
        ControlFlow::Continue(())
    })?;
    match driven {
        Driven::Event(Some((r, t))) => Ok(FirstReturn {
            r,
            period: t,
            direction: dir,
            orbit,
        }),
        Driven::Event(None) => Err(Error::NoReturn(NoReturnReason::Reversed)),
        Driven::Stopped(reason) => Err(no_return(reason)),
    }
}

fn push_dense(orbit: &mut Vec<PolarState>, seg: &Segment, a: f64, b: f64) {
    const SUB: usize = 8;
    for k in 1..=SUB {
        let (r, theta) = seg.at(a + (b - a) * k as f64 / SUB as f64);
        orbit.push(PolarState {
            r,
            theta: theta.rem_euclid(TAU),
        });
    }
}

/// First-return `r` on the ray `theta = section_angle`.
pub fn return_map(params: &Params, r0: f64, section_angle: f64) -> Result<f64> {
    Ok(first_return(params, r0, section_angle, &ReturnOptions::default())?.r)
}

/// `pi/(2n)`, moved when needed so that it stays at least `pi/(8n)` away
/// from every equilibrium angle.
pub fn default_section_angle(params: &Params) -> f64 {
    let sector = params.sector();
    let angles: Vec<f64> = crate::equilibria::solve_fundamental_equilibria(params)
        .map(|v| v.into_iter().map(|s| s.theta).collect())
        .unwrap_or_default();
    let gap = |a: f64| {
        angles
            .iter()
            .map(|&e| {
                let d = (a - e).rem_euclid(sector);
                d.min(sector - d)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let preferred = 0.5 * sector;
    if gap(preferred) >= sector / 8.0 {
        return preferred;
    }
    (0..64)
        .map(|k| sector * k as f64 / 64.0)
        .max_by(|a, b| gap(*a).total_cmp(&gap(*b)))
        .unwrap_or(preferred)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleStability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCycle {
    pub section_angle: f64,
    pub fixed_r: f64,
    /// Rescaled-time period.
    pub period: f64,
    /// Derivative of the return map at the fixed point.
    pub multiplier: f64,
    pub stability: CycleStability,
    /// `|multiplier - 1| > 1e-4`.
    pub hyperbolic: bool,
    /// `|P(r*) - r*|`.
    pub fixed_point_residual: f64,
    /// Equilibria (origin included) with nonzero winding number.
    pub enclosed_equilibria: usize,
    /// `theta'` keeps one sign at every sampled point of the cycle.
    pub avoids_singular_set: bool,
    pub min_abs_theta_dot: f64,
    #[serde(skip)]
    pub orbit: Vec<PolarState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOptions {
    /// Used for bracket scans.
    pub coarse: ReturnOptions,
    /// Used for the fixed point and the multiplier.
    pub fine: ReturnOptions,
    pub fp_tol: f64,
    /// `(min, max, points per decade)` of the geometric scan grid.
    pub grid: (f64, f64, usize),
    pub hyperbolic_band: f64,
}

impl Default for CycleOptions {
    fn default() -> Self {
        let coarse = ReturnOptions::default();
        let mut fine = coarse;
        fine.flow.rtol = 1e-12;
        fine.event_tol = 1e-13;
        CycleOptions {
            coarse,
            fine,
            fp_tol: 1e-9,
            grid: (1e-4, 1e4, 6),
            hyperbolic_band: 1e-4,
        }
    }
}

/// Sign of the displacement `P(r) - r`, or `None` when it is undefined.
fn displacement_sign(params: &Params, r: f64, section: f64, opts: &ReturnOptions) -> Option<f64> {
    match first_return(params, r, section, opts) {
        Ok(ret) => {
            let d = ret.r - r;
            (d != 0.0).then(|| d.signum())
        }
        Err(Error::NoReturn(NoReturnReason::BlowUp)) => Some(1.0),
        Err(Error::NoReturn(NoReturnReason::ConvergedToPoint)) if r < 1e-2 => Some(-1.0),
        Err(_) => None,
    }
}

/// Adjacent grid points on the section with opposite displacement signs.
///
/// The ray is split where `theta' = 0`; each side is scanned separately.
pub fn scan_brackets(params: &Params, section: f64, opts: &CycleOptions) -> Vec<(f64, f64)> {
    let (lo, hi, per_decade) = opts.grid;
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).round() as usize + 1;
    let grid: Vec<f64> = (0..count)
        .map(|k| lo * 10f64.powf(decades * k as f64 / (count - 1) as f64))
        .collect();
    let side = |r: f64| polar_rates(params, r, section).1.signum();
    let signs: Vec<Option<f64>> = grid
        .iter()
        .map(|&r| displacement_sign(params, r, section, &opts.coarse))
        .collect();
    let mut out = Vec::new();
    for k in 0..count - 1 {
        if side(grid[k]) != side(grid[k + 1]) {
            continue;
        }
        if let (Some(a), Some(b)) = (signs[k], signs[k + 1]) {
            if a != b {
                out.push((grid[k], grid[k + 1]));
            }
        }
    }
    out
}

pub fn find_limit_cycle(params: &Params, bracket: (f64, f64), section_angle: f64) -> Result<LimitCycle> {
    find_limit_cycle_with(params, bracket, section_angle, &CycleOptions::default())
}

pub fn find_limit_cycle_with(
    params: &Params,
    bracket: (f64, f64),
    section_angle: f64,
    opts: &CycleOptions,
) -> Result<LimitCycle> {
    let d = |r: f64| -> Result<f64> { Ok(first_return(params, r, section_angle, &opts.fine)?.r - r) };
    let (mut a, mut b) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let (mut da, mut db) = (d(a)?, d(b)?);
    if da == 0.0 {
        b = a;
        db = 0.0;
    } else if db == 0.0 {
        a = b;
        da = 0.0;
    } else if da.signum() == db.signum() {
        return Err(Error::NoBracket { lo: da, hi: db });
    }
    // geometric bisection while the bracket spans a wide range
    while a > 0.0 && b / a > 1.5 && da != 0.0 {
        let m = (a * b).sqrt();
        let dm = d(m)?;
        if dm == 0.0 || dm.signum() == da.signum() {
            (a, da) = (m, dm);
        } else {
            (b, db) = (m, dm);
        }
    }
    let mut side = 0;
    let mut root = if da.abs() < db.abs() { (a, da) } else { (b, db) };
    for _ in 0..200 {
        if root.1.abs() <= 0.01 * opts.fp_tol || (b - a) <= 4.0 * f64::EPSILON * b {
            break;
        }
        let mut m = b - db * (b - a) / (db - da);
        if !(m > a && m < b) {
            m = 0.5 * (a + b);
        }
        let dm = d(m)?;
        if dm.abs() < root.1.abs() {
            root = (m, dm);
        }
        if dm == 0.0 {
            break;
        }
        if dm.signum() == da.signum() {
            (a, da) = (m, dm);
            if side == -1 {
                db *= 0.5;
            }
            side = -1;
        } else {
            (b, db) = (m, dm);
            if side == 1 {
                da *= 0.5;
            }
            side = 1;
        }
    }
    let r_star = root.0;
    let ret = first_return_impl(params, r_star, section_angle, &opts.fine, true)?;
    let h = 1e-6 * r_star;
    let plus = first_return(params, r_star + h, section_angle, &opts.fine)?.r;
    let minus = first_return(params, r_star - h, section_angle, &opts.fine)?.r;
    let multiplier = (plus - minus) / (2.0 * h);
    let enclosed_equilibria = count_enclosed(params, &ret.orbit)?;
    let theta_dots: Vec<f64> = ret.orbit.iter().map(|s| polar_rates(params, s.r, s.theta).1).collect();
    let min_abs_theta_dot = theta_dots.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let avoids_singular_set = theta_dots.iter().all(|v| v.signum() == ret.direction && *v != 0.0);
    Ok(LimitCycle {
        section_angle,
        fixed_r: r_star,
        period: ret.period,
        multiplier,
        stability: if multiplier < 1.0 {
            CycleStability::Stable
        } else {
            CycleStability::Unstable
        },
        hyperbolic: (multiplier - 1.0).abs() > opts.hyperbolic_band,
        fixed_point_residual: (ret.r - r_star).abs(),
        enclosed_equilibria,
        avoids_singular_set,
        min_abs_theta_dot,
        orbit: ret.orbit,
    })
}

/// Winding number of a closed polar curve around a Cartesian point.
pub fn winding_number(curve: &[PolarState], point: PolarState) -> i64 {
    let p = point.to_cartesian();
    let mut total = 0.0;
    let angle = |s: &PolarState| {
        let c = s.to_cartesian();
        (c.y - p.y).atan2(c.x - p.x)
    };
    for k in 0..curve.len() {
        let a = angle(&curve[k]);
        let b = angle(&curve[(k + 1) % curve.len()]);
        total += (b - a + PI).rem_euclid(TAU) - PI;
    }
    (total / TAU).round() as i64
}

fn count_enclosed(params: &Params, orbit: &[PolarState]) -> Result<usize> {
    let eqs = all_equilibria(params)?;
    Ok(eqs.iter().filter(|e| winding_number(orbit, e.state) != 0).count())
}

/// Scans the default section and polishes every bracket found.
pub fn find_limit_cycles(params: &Params) -> Result<Vec<LimitCycle>> {
    find_limit_cycles_with(params, &CycleOptions::default())
}

pub fn find_limit_cycles_with(params: &Params, opts: &CycleOptions) -> Result<Vec<LimitCycle>> {
    let section = default_section_angle(params);
    let mut out: Vec<LimitCycle> = Vec::new();
    for bracket in scan_brackets(params, section, opts) {
        match find_limit_cycle_with(params, bracket, section, opts) {
            Ok(c) => {
                if !out.iter().any(|o| (o.fixed_r - c.fixed_r).abs() <= 1e-7 * c.fixed_r) {
                    out.push(c);
                }
            }
            Err(Error::NoBracket { .. }) | Err(Error::NoReturn(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
