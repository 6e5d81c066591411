use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::dopri::Dopri5;
use crate::abel::{abel_coefficients, inverse_cherkas, AbelCoefficients};
use crate::error::Result;
use crate::field::Params;

/// `|x|` beyond which a shot counts as divergent.
pub const ABEL_DIVERGENCE: f64 = 1e8;

fn shoot(coeffs: &AbelCoefficients, x0: f64, rtol: f64) -> f64 {
    shoot_dir(coeffs, x0, rtol, 1.0)
}

fn shoot_dir(coeffs: &AbelCoefficients, x0: f64, rtol: f64, dir: f64) -> f64 {
    let f = |t: f64, x: &[f64; 1]| [dir * coeffs.rhs(dir * t, x[0])];
    let scale = |a: &[f64; 1], b: &[f64; 1]| [1e-14 + rtol * a[0].abs().max(b[0].abs())];
    let mut d = Dopri5::new(&f, &scale, 0.0, [x0], 0.0, 0.05);
    while d.t < TAU {
        if d.step(&f, &scale, TAU).is_err() || !d.y[0].is_finite() || d.y[0].abs() > ABEL_DIVERGENCE {
            return f64::INFINITY.copysign(if d.y[0].is_nan() { x0 } else { d.y[0] });
        }
    }
    d.y[0]
}

/// `x(2 pi)` for the Abel equation started at `x(0) = x0`; a divergent shot
/// returns an infinity carrying the direction of escape.
pub fn abel_shoot(params: &Params, x0: f64) -> Result<f64> {
    let coeffs = abel_coefficients(params)?;
    Ok(shoot(&coeffs, x0, 1e-12))
}

/// `x(-2 pi)` for the Abel equation started at `x(0) = x0`.
pub fn abel_shoot_backward(params: &Params, x0: f64) -> Result<f64> {
    let coeffs = abel_coefficients(params)?;
    Ok(shoot_dir(&coeffs, x0, 1e-12, -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelSolutionKind {
    /// `x = 0`, the origin.
    Origin,
    /// `x = 1/c(theta)`, infinity.
    Infinity,
    /// Any other periodic solution; a limit cycle when it lies between the two.
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelPeriodicSolution {
    pub x0: f64,
    pub kind: AbelSolutionKind,
    /// `|x(2 pi) - x0|`.
    pub residual: f64,
    /// `r` at `theta = 0` under the inverse Cherkas map.
    pub r0: Option<f64>,
}

/// Periodic solutions found by shooting from an `x0` grid that contains `0`
/// and `1/c(0)` and extends half a unit of `|1/c(0)|` past both.
pub fn abel_periodic_solutions(params: &Params, grid_points: usize) -> Result<Vec<AbelPeriodicSolution>> {
    let coeffs = abel_coefficients(params)?;
    let inf = 1.0 / params.c(0.0);
    let span = inf.abs();
    let lo = 0f64.min(inf) - 0.5 * span;
    let hi = 0f64.max(inf) + 0.5 * span;
    let m = grid_points.max(16);
    let mut grid: Vec<f64> = (0..m).map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64).collect();
    grid.extend([0.0, inf]);
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * span);

    let zero_tol = 1e-8;
    let disp: Vec<f64> = grid.iter().map(|&x| shoot(&coeffs, x, 1e-12) - x).collect();
    let sign = |v: f64| if v.abs() <= zero_tol { 0.0 } else { v.signum() };
    let mut roots = Vec::new();
    for (k, (&x, &dx)) in grid.iter().zip(&disp).enumerate() {
        if sign(dx) == 0.0 {
            roots.push(x);
            continue;
        }
        if k + 1 < grid.len() {
            let (x1, d1) = (grid[k + 1], disp[k + 1]);
            if sign(d1) != 0.0 && sign(d1) != sign(dx) {
                roots.push(refine(&coeffs, (x, dx), (x1, d1)));
            }
        }
    }
    Ok(roots
        .into_iter()
        .map(|x0| {
            let kind = if x0.abs() <= 1e-10 * span.max(1.0) {
                AbelSolutionKind::Origin
            } else if (x0 - inf).abs() <= 1e-10 * span.max(1.0) {
                AbelSolutionKind::Infinity
            } else {
                AbelSolutionKind::Cycle
            };
            AbelPeriodicSolution {
                x0,
                kind,
                residual: (shoot(&coeffs, x0, 1e-12) - x0).abs(),
                r0: inverse_cherkas(params, x0, 0.0).ok(),
            }
        })
        .collect())
}

/// Bisection on the displacement; divergent shots keep their sign.
fn refine(coeffs: &AbelCoefficients, a: (f64, f64), b: (f64, f64)) -> f64 {
    let (mut a, mut b) = (a, b);
    for _ in 0..100 {
        let m = 0.5 * (a.0 + b.0);
        if m <= a.0 || m >= b.0 {
            break;
        }
        let dm = shoot(coeffs, m, 1e-13) - m;
        if dm == 0.0 {
            return m;
        }
        if dm.signum() == a.1.signum() {
            a = (m, dm);
        } else {
            b = (m, dm);
        }
    }
    if a.1.abs() < b.1.abs() {
        a.0
    } else {
        b.0
    }
}
