use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trajectory::cartesian_rhs;
use crate::equilibria::{cartesian_jacobian, quadratic_form, solve_fundamental_equilibria};
use crate::error::{Error, Result};
use crate::field::{CartesianPoint, Params, PolarState};
use crate::linalg::{eigenvalues, eigenvector};
use crate::tol::Tolerances;

/// Interior sample points per segment.
pub const SEGMENT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolygonVariant {
    /// Origin to the ray/eigenline intersection, then to the saddle-node.
    TwoSegment,
    /// Origin along the ray, across to the eigenline, then to the saddle-node.
    ThreeSegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonSegment {
    pub from: PolarState,
    pub to: PolarState,
    /// Minimum over interior samples of the outward component of the
    /// (rescaled) field.
    pub margin: f64,
}

/// A polyline from the origin to the fundamental saddle-node across which
/// the flow moves away from the saddle-node; its `2n` rotations close the polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalPolygon {
    pub vertices: Vec<PolarState>,
    pub segments: Vec<PolygonSegment>,
    pub variant: PolygonVariant,
    /// Angle of the radial first segment.
    pub ray_angle: f64,
    /// The ray is `theta = -pi/(4n)`.
    pub base_ray: bool,
    /// Saddle-node with angle in `(-pi/n, 0]`.
    pub saddle_node: PolarState,
    /// `theta_*` in `(-pi/n, 0]`.
    pub saddle_node_angle: f64,
    /// First `x > 0` where the eigenline `z_* + x v` stops being transverse, if any.
    pub eigenline_limit: Option<f64>,
}

impl TransversalPolygon {
    pub fn min_margin(&self) -> f64 {
        self.segments.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min)
    }

    /// The polyline and its rotations by `k pi/n`.
    pub fn polylines(&self, n: u32) -> Vec<Vec<PolarState>> {
        (0..2 * n)
            .map(|k| self.vertices.iter().map(|v| v.rotated(k, n)).collect())
            .collect()
    }
}

fn field(params: &Params, z: Complex64) -> Complex64 {
    let g = cartesian_rhs(params, &[z.re, z.im]);
    Complex64::new(g[0], g[1])
}

fn to_polar(z: Complex64) -> PolarState {
    CartesianPoint::from_complex(z).to_polar()
}

/// Outward component along the oriented segment `a -> b`; outward is the
/// right-hand side when `orient = 1`.
fn segment_margin(params: &Params, a: Complex64, b: Complex64, orient: f64) -> f64 {
    let d = b - a;
    let normal = d * Complex64::new(0.0, -orient) / d.norm();
    (1..=SEGMENT_SAMPLES)
        .map(|k| {
            let z = a + d * (k as f64 / (SEGMENT_SAMPLES + 1) as f64);
            let f = field(params, z);
            f.re * normal.re + f.im * normal.im
        })
        .fold(f64::INFINITY, f64::min)
}

struct Setup {
    zs: Complex64,
    theta_s: f64,
    v: Complex64,
    orient: f64,
    x_limit: Option<f64>,
}

fn candidate(params: &Params, setup: &Setup, pts: &[Complex64]) -> Option<Vec<PolygonSegment>> {
    let mut segs = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        let margin = segment_margin(params, w[0], w[1], setup.orient);
        if !(margin > 0.0) {
            return None;
        }
        segs.push(PolygonSegment {
            from: to_polar(w[0]),
            to: to_polar(w[1]),
            margin,
        });
    }
    Some(segs)
}

/// `theta' < 0` on the ray for `r < r0(alpha)` when `p2 < 0` (mirrored for `p2 > 0`).
fn ray_limit(params: &Params, alpha: f64) -> Option<f64> {
    let c = params.c(alpha);
    let r0 = -params.p2 / c;
    (r0 > 0.0).then_some(r0)
}

fn try_ray(params: &Params, setup: &Setup, alpha: f64) -> Option<(PolygonVariant, Vec<Complex64>, Vec<PolygonSegment>)> {
    let r0 = ray_limit(params, alpha)?;
    let e = Complex64::from_polar(1.0, alpha);
    let origin = Complex64::new(0.0, 0.0);
    let x_max = setup.x_limit.unwrap_or(f64::INFINITY);
    // zs + x v = t e
    let det = setup.v.re * (-e.im) - setup.v.im * (-e.re);
    if det.abs() > 1e-14 {
        let (bx, by) = (-setup.zs.re, -setup.zs.im);
        let x = (bx * (-e.im) - by * (-e.re)) / det;
        let t = (setup.v.re * by - setup.v.im * bx) / det;
        if t > 0.0 && t * t < r0 && x > 0.0 && x < x_max {
            let q = setup.zs + setup.v * x;
            let pts = vec![origin, q, setup.zs];
            if let Some(segs) = candidate(params, setup, &pts) {
                return Some((PolygonVariant::TwoSegment, pts, segs));
            }
        }
    }
    let scale = setup.zs.norm();
    for frac in [0.9, 0.75, 0.5, 0.3, 0.2, 0.1, 0.05] {
        let z2 = e * (frac * r0).sqrt();
        for xf in [0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005] {
            let x1 = xf * scale;
            if x1 >= x_max {
                continue;
            }
            let z1 = setup.zs + setup.v * x1;
            let pts = vec![origin, z2, z1, setup.zs];
            if let Some(segs) = candidate(params, setup, &pts) {
                return Some((PolygonVariant::ThreeSegment, pts, segs));
            }
        }
    }
    None
}

pub fn build_transversal_polygon(params: &Params) -> Result<TransversalPolygon> {
    build_transversal_polygon_with(params, &Tolerances::default())
}

pub fn build_transversal_polygon_with(params: &Params, tol: &Tolerances) -> Result<TransversalPolygon> {
    params.require_s2()?;
    let q = quadratic_form(params.p1, params.p2, params);
    if q.value.abs() > tol.q_band(q.scale()) {
        return Err(Error::NotOnStratum { q: q.value });
    }
    if params.p2 * params.s2 >= 0.0 {
        return Err(Error::Precondition("transversal polygon needs p2 s2 < 0"));
    }
    let n = params.n as f64;
    let sector = params.sector();
    let fundamental = solve_fundamental_equilibria(params)?;
    let sn = *fundamental.first().ok_or(Error::NotOnStratum { q: q.value })?;
    let theta_s = if sn.theta > 0.0 { sn.theta - sector } else { sn.theta };
    let saddle_node = PolarState::new(sn.r, theta_s)?;
    let zs = Complex64::from_polar(sn.r.sqrt(), theta_s);

    let jac = cartesian_jacobian(params, saddle_node);
    let eig = eigenvalues(&jac);
    let ev = eigenvector(&jac, eig[1].re);
    // orient = 1: theta' < 0 near the origin, the ray sits clockwise of z_*
    let orient = -params.p2.signum();
    let mut v = Complex64::new(ev[0], ev[1]);
    if (v * Complex64::from_polar(1.0, -theta_s)).im * orient > 0.0 {
        v = -v;
    }
    let mut setup = Setup {
        zs,
        theta_s,
        v,
        orient,
        x_limit: None,
    };
    setup.x_limit = eigenline_limit(params, &setup);

    let base = -orient * PI / (4.0 * n);
    let mut rays = vec![base];
    let (lo, hi) = if orient > 0.0 {
        (base.max(theta_s - 0.5 * sector), theta_s)
    } else {
        (theta_s, base.min(theta_s + 0.5 * sector))
    };
    rays.extend((1..40).map(|k| lo + (hi - lo) * k as f64 / 40.0));
    for alpha in rays {
        let clockwise_of = orient * (setup.theta_s - alpha) > 0.0;
        if !clockwise_of {
            continue;
        }
        if let Some((variant, pts, segments)) = try_ray(params, &setup, alpha) {
            return Ok(TransversalPolygon {
                vertices: pts.iter().map(|&z| to_polar(z)).collect(),
                segments,
                variant,
                ray_angle: alpha,
                base_ray: alpha == base,
                saddle_node,
                saddle_node_angle: setup.theta_s,
                eigenline_limit: setup.x_limit,
            });
        }
    }
    Err(Error::TransversalityFailed)
}

fn eigenline_limit(params: &Params, setup: &Setup) -> Option<f64> {
    let scale = setup.zs.norm();
    let normal = setup.v * Complex64::new(0.0, setup.orient);
    (1..=4000)
        .map(|k| 4.0 * scale * k as f64 / 4000.0)
        .find(|&x| {
            let f = field(params, setup.zs + setup.v * x);
            f.re * normal.re + f.im * normal.im <= 0.0
        })
}
