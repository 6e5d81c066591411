//! Brute-force counterparts of the closed-form results.
//!
//! Nothing here uses the quadratic-form machinery: equilibria come from
//! grid-seeded Newton iteration on the raw residuals, sign questions from
//! dense sampling, and the infinity integral from adaptive quadrature.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Params, PolarState};
use crate::linalg::{self, Mat2};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// `(min, max, count)`; seeds are geometrically spaced.
    pub grid_r: (f64, f64, usize),
    pub grid_theta: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub dedup_radius: f64,
}

impl OracleConfig {
    /// 64 x 64 seeds over `r in [1e-3, 10 max(1, |p2|/(|s2|-1))]`. Every
    /// nontrivial equilibrium has `r = -p2/(s2 + sin 2n theta) <= |p2|/(|s2|-1)`.
    pub fn for_params(params: &Params) -> Self {
        let bound = if params.s2.abs() > 1.0 {
            (params.p2 / (params.s2.abs() - 1.0)).abs()
        } else {
            1e3
        };
        OracleConfig {
            grid_r: (1e-3, 10.0 * bound.max(1.0), 64),
            grid_theta: 64,
            newton_tol: 1e-13,
            newton_max_iter: 60,
            dedup_radius: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi, count) = self.grid_r;
        if count < 16 || self.grid_theta < 16 {
            return Err(Error::InvalidParams("oracle grids need at least 16 points per axis".into()));
        }
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidParams("oracle r-grid must satisfy 0 < min < max".into()));
        }
        if !(self.newton_tol > 0.0 && self.dedup_radius > 0.0) {
            return Err(Error::InvalidParams("oracle tolerances must be positive".into()));
        }
        Ok(())
    }
}

fn residual(params: &Params, r: f64, theta: f64) -> [f64; 2] {
    let (sn, cs) = (2.0 * params.n as f64 * theta).sin_cos();
    [params.p1 + r * (params.s1 - cs), params.p2 + r * (params.s2 + sn)]
}

fn residual_jacobian(params: &Params, r: f64, theta: f64) -> Mat2 {
    let two_n = 2.0 * params.n as f64;
    let (sn, cs) = (two_n * theta).sin_cos();
    [[params.s1 - cs, two_n * r * sn], [params.s2 + sn, two_n * r * cs]]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

struct Root {
    r: f64,
    theta: f64,
    residual: f64,
}

fn newton(params: &Params, cfg: &OracleConfig, mut r: f64, mut theta: f64) -> Option<Root> {
    let scale = 1.0 + params.p1.abs().max(params.p2.abs());
    let mut f = norm(residual(params, r, theta));
    for _ in 0..cfg.newton_max_iter {
        if f <= cfg.newton_tol * scale {
            break;
        }
        let res = residual(params, r, theta);
        let step = linalg::solve(&residual_jacobian(params, r, theta), [-res[0], -res[1]])?;
        // the doubled step recovers fast convergence at double roots
        let mut best: Option<(f64, f64, f64)> = None;
        for lambda in [2.0, 1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125] {
            let (rn, tn) = (r + lambda * step[0], theta + lambda * step[1]);
            if rn <= 0.0 {
                continue;
            }
            let fnew = norm(residual(params, rn, tn));
            if fnew < best.map_or(f, |b| b.2) {
                best = Some((rn, tn, fnew));
            }
            if lambda <= 1.0 && best.is_some() {
                break;
            }
        }
        let (rn, tn, fnew) = best?;
        let moved = (rn - r).abs() / (1.0 + r) + (tn - theta).abs();
        (r, theta, f) = (rn, tn, fnew);
        if moved <= 1e-16 {
            break;
        }
    }
    let accept = 1e-9 * scale;
    (f <= accept && r > 0.0 && r.is_finite()).then(|| Root {
        r,
        theta: theta.rem_euclid(TAU),
        residual: f,
    })
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// All equilibria found from the seed grid, sorted by angle, with the origin last.
pub fn oracle_equilibria(params: &Params, config: &OracleConfig) -> Result<Vec<PolarState>> {
    config.validate()?;
    let (lo, hi, nr) = config.grid_r;
    let nt = config.grid_theta;
    let ratio = (hi / lo).powf(1.0 / (nr - 1) as f64);
    let seeds: Vec<(f64, f64)> = (0..nr)
        .flat_map(|i| (0..nt).map(move |j| (lo * ratio.powi(i as i32), TAU * (j as f64 + 0.5) / nt as f64)))
        .collect();
    let found: Vec<Root> = seeds
        .par_iter()
        .filter_map(|&(r, t)| newton(params, config, r, t))
        .collect();
    let mut unique: Vec<Root> = Vec::new();
    for root in found {
        let dup = unique.iter_mut().find(|u| {
            let dr = (u.r - root.r).abs() / (1.0 + u.r);
            dr.hypot(angular_gap(u.theta, root.theta)) <= config.dedup_radius
        });
        match dup {
            Some(u) if root.residual < u.residual => *u = root,
            Some(_) => {}
            None => unique.push(root),
        }
    }
    unique.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<PolarState> = unique
        .into_iter()
        .map(|u| PolarState { r: u.r, theta: u.theta })
        .collect();
    out.push(PolarState::origin());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignChange {
    pub changes: bool,
    /// Adjacent sample angles with strictly opposite signs.
    pub witness: Option<(f64, f64)>,
    /// Zero located by bisection inside the witness bracket.
    pub crossing: Option<f64>,
}

/// Samples `f` at `samples` equally spaced angles on `[0, 2 pi)`. Values below
/// `1e-12 max |f|` count as zero and never witness a sign.
pub fn oracle_sign_change<F: Fn(f64) -> f64>(f: F, samples: usize) -> SignChange {
    let m = samples.max(1000);
    let thetas: Vec<f64> = (0..m).map(|k| TAU * k as f64 / m as f64).collect();
    let values: Vec<f64> = thetas.iter().map(|&t| f(t)).collect();
    let floor = 1e-12 * values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut prev: Option<usize> = None;
    for k in 0..m {
        if values[k].abs() <= floor {
            continue;
        }
        if let Some(i) = prev {
            if values[i].signum() != values[k].signum() {
                let (mut a, mut b) = (thetas[i], thetas[k]);
                let sa = values[i].signum();
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    if f(mid).signum() == sa {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return SignChange {
                    changes: true,
                    witness: Some((thetas[i], thetas[k])),
                    crossing: Some(0.5 * (a + b)),
                };
            }
        }
        prev = Some(k);
    }
    SignChange {
        changes: false,
        witness: None,
        crossing: None,
    }
}

/// `int_0^{2 pi} -2 (s1 - cos 2n theta) / (s2 + sin 2n theta) dtheta`.
pub fn oracle_infinity_integral(params: &Params) -> Result<f64> {
    params.require_s2()?;
    let two_n = 2.0 * params.n as f64;
    let integrand = |t: f64| {
        let (sn, cs) = (two_n * t).sin_cos();
        -2.0 * (params.s1 - cs) / (params.s2 + sn)
    };
    let panels = 4 * params.n as usize;
    Ok(quadrature::integrate(integrand, 0.0, TAU, 1e-10, panels).value)
}
