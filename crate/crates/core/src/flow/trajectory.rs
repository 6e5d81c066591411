use std::f64::consts::{PI, TAU};
use std::ops::ControlFlow;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dopri::{Dense, Dopri5, StepError};
use crate::error::{Error, Result};
use crate::field::{polar_rates, Params, PolarState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    /// Local relative error per step.
    pub rtol: f64,
    /// Integration stops once `|z|` exceeds this radius.
    pub blow_up_radius: f64,
    pub max_steps: usize,
    /// Below this `r = |z|^2` the Cartesian chart is used.
    pub chart_switch_r: f64,
    /// `r` below which a trajectory counts as having reached the origin.
    pub origin_r: f64,
    /// `|z'|/|z|` below which a trajectory counts as having stopped.
    pub stall_speed: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            rtol: 1e-10,
            blow_up_radius: 1e5,
            max_steps: 2_000_000,
            chart_switch_r: 1e-8,
            origin_r: 1e-30,
            stall_speed: 1e-10,
        }
    }
}

impl FlowOptions {
    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    TimeLimit,
    BlowUp,
    ConvergedToPoint,
    SectionCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    /// Rescaled time.
    pub t: f64,
    pub r: f64,
    /// Unwrapped angle.
    pub theta: f64,
}

impl TrajectorySample {
    pub fn state(&self) -> PolarState {
        PolarState {
            r: self.r,
            theta: self.theta.rem_euclid(TAU),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> TrajectorySample {
        *self.samples.last().expect("trajectory has its initial sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chart {
    Polar,
    Cartesian,
}

/// One accepted step in either chart.
pub(crate) struct Segment {
    chart: Chart,
    dense: Dense<2>,
    theta_ref: f64,
}

fn wrap_pi(a: f64) -> f64 {
    (a + PI).rem_euclid(TAU) - PI
}

impl Segment {
    pub(crate) fn t0(&self) -> f64 {
        self.dense.t0
    }

    pub(crate) fn t1(&self) -> f64 {
        self.dense.t1
    }

    /// `(r, unwrapped theta)` at time `t` inside the step.
    pub(crate) fn at(&self, t: f64) -> (f64, f64) {
        let y = self.dense.eval(t);
        self.decode(y)
    }

    fn decode(&self, y: [f64; 2]) -> (f64, f64) {
        match self.chart {
            Chart::Polar => (y[0], y[1]),
            Chart::Cartesian => {
                let r = y[0] * y[0] + y[1] * y[1];
                let a = y[1].atan2(y[0]);
                (r, self.theta_ref + wrap_pi(a - self.theta_ref))
            }
        }
    }
}

pub(crate) fn cartesian_rhs(params: &Params, w: &[f64; 2]) -> [f64; 2] {
    let z = Complex64::new(w[0], w[1]);
    let m = z.norm();
    if m == 0.0 {
        return [0.0, 0.0];
    }
    let r = m * m;
    let u = z.conj() / m;
    let g = z * (params.p() + params.s() * r - r * u.powu(2 * params.n));
    [g.re, g.im]
}

struct Cursor {
    chart: Chart,
    dop: Dopri5<2>,
    /// Unwrapped angle at the current point of the Cartesian chart.
    theta: f64,
}

pub(crate) enum Driven<T> {
    Event(T),
    Stopped(Termination),
}

/// Runs the flow from `(r0, theta0)` up to rescaled time `horizon`, offering
/// every accepted step to `on_step`.
pub(crate) fn drive<T>(
    params: &Params,
    r0: f64,
    theta0: f64,
    horizon: f64,
    opts: &FlowOptions,
    mut on_step: impl FnMut(&Segment) -> ControlFlow<T>,
) -> Result<Driven<T>> {
    if !(opts.rtol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive"));
    }
    let rtol = opts.rtol;
    let polar = |_: f64, y: &[f64; 2]| -> [f64; 2] {
        let (a, b) = polar_rates(params, y[0], y[1]);
        [a, b]
    };
    let polar_scale = |a: &[f64; 2], b: &[f64; 2]| -> [f64; 2] {
        [rtol * a[0].abs().max(b[0].abs()).max(1e-300), rtol]
    };
    let cart = |_: f64, w: &[f64; 2]| cartesian_rhs(params, w);
    let cart_scale = |a: &[f64; 2], b: &[f64; 2]| -> [f64; 2] {
        let m = a[0].hypot(a[1]).max(b[0].hypot(b[1])).max(1e-300);
        [rtol * m, rtol * m]
    };
    let r_blow = opts.blow_up_radius * opts.blow_up_radius;
    let h_max = horizon.max(1e-12) / 8.0;

    let open = |chart: Chart, t: f64, r: f64, theta: f64, h: f64| -> Cursor {
        match chart {
            Chart::Polar => Cursor {
                chart,
                dop: Dopri5::new(&polar, &polar_scale, t, [r, theta], h, h_max),
                theta,
            },
            Chart::Cartesian => {
                let m = r.sqrt();
                let w = [m * theta.cos(), m * theta.sin()];
                Cursor {
                    chart,
                    dop: Dopri5::new(&cart, &cart_scale, t, w, h, h_max),
                    theta,
                }
            }
        }
    };
    let chart0 = if r0 < opts.chart_switch_r { Chart::Cartesian } else { Chart::Polar };
    let mut cur = open(chart0, 0.0, r0, theta0, 0.0);
    let mut last = TrajectorySample { t: 0.0, r: r0, theta: theta0 };

    for _ in 0..opts.max_steps {
        if last.r > r_blow {
            return Ok(Driven::Stopped(Termination::BlowUp));
        }
        if last.r <= opts.origin_r {
            return Ok(Driven::Stopped(Termination::ConvergedToPoint));
        }
        let speed = match cur.chart {
            Chart::Polar => {
                let d = cur.dop.derivative();
                (0.5 * d[0] / last.r).hypot(d[1])
            }
            Chart::Cartesian => {
                let d = cur.dop.derivative();
                d[0].hypot(d[1]) / last.r.sqrt()
            }
        };
        if speed < opts.stall_speed {
            return Ok(Driven::Stopped(Termination::ConvergedToPoint));
        }
        if last.t >= horizon {
            return Ok(Driven::Stopped(Termination::TimeLimit));
        }
        let step = match cur.chart {
            Chart::Polar => cur.dop.step(&polar, &polar_scale, horizon),
            Chart::Cartesian => cur.dop.step(&cart, &cart_scale, horizon),
        };
        let dense = match step {
            Ok(d) => d,
            Err(StepError::Underflow { t }) => {
                // finite-time escape shows up as step collapse at large r
                if last.r > 1e-3 * r_blow.sqrt() {
                    return Ok(Driven::Stopped(Termination::BlowUp));
                }
                return Err(Error::StepFailure { s: t });
            }
        };
        let seg = Segment {
            chart: cur.chart,
            dense,
            theta_ref: cur.theta,
        };
        if let ControlFlow::Break(v) = on_step(&seg) {
            return Ok(Driven::Event(v));
        }
        let (r, theta) = seg.decode(seg.dense.end());
        last = TrajectorySample { t: seg.t1(), r, theta };
        cur.theta = theta;
        let switch = match cur.chart {
            Chart::Polar if r < opts.chart_switch_r => Some(Chart::Cartesian),
            Chart::Cartesian if r > 2.0 * opts.chart_switch_r => Some(Chart::Polar),
            _ => None,
        };
        if let Some(chart) = switch {
            cur = open(chart, last.t, r, theta, cur.dop.h);
        }
    }
    Ok(Driven::Stopped(Termination::TimeLimit))
}

/// Integrates the time-rescaled polar system from `start` for rescaled time `horizon`.
pub fn integrate(params: &Params, start: PolarState, horizon: f64, tol: f64) -> Result<Trajectory> {
    integrate_with(params, start, horizon, &FlowOptions::default().with_rtol(tol))
}

pub fn integrate_with(params: &Params, start: PolarState, horizon: f64, opts: &FlowOptions) -> Result<Trajectory> {
    let mut samples = vec![TrajectorySample {
        t: 0.0,
        r: start.r,
        theta: start.theta,
    }];
    let driven = drive::<()>(params, start.r, start.theta, horizon, opts, |seg| {
        let (r, theta) = seg.at(seg.t1());
        samples.push(TrajectorySample { t: seg.t1(), r, theta });
        ControlFlow::Continue(())
    })?;
    let termination = match driven {
        Driven::Stopped(reason) => reason,
        Driven::Event(()) => unreachable!(),
    };
    Ok(Trajectory { samples, termination })
}
