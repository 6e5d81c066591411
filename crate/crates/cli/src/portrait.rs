//! Phase portraits as SVG.

use std::f64::consts::TAU;

use z2n_core::equilibria::{all_equilibria_with, quadratic_form, EquilibriumClass, Stability};
use z2n_core::flow::{build_transversal_polygon_with, find_limit_cycles, integrate_with, FlowOptions};
use z2n_core::{Params, PolarState, Tolerances};

use crate::format::num;
use crate::svg::Svg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitOptions {
    /// View radius in `|z|`; trajectories stop when they leave it. `None` picks one.
    pub radius: Option<f64>,
    pub trajectories: usize,
    /// Rescaled integration time per trajectory.
    pub horizon: f64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            radius: None,
            trajectories: 24,
            horizon: 40.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub svg: String,
    pub radius: f64,
    pub equilibria: usize,
    pub cycles: usize,
    pub polygon: bool,
    pub trajectories: usize,
}

fn marker(class: EquilibriumClass, stability: Stability) -> (&'static str, &'static str) {
    match (class, stability) {
        (EquilibriumClass::Saddle, _) => ("#000000", "saddle"),
        (EquilibriumClass::SaddleNode, _) => ("#6a3d9a", "saddle-node"),
        (EquilibriumClass::CenterCandidate, _) => ("#33a02c", "center-candidate"),
        (EquilibriumClass::Degenerate, _) => ("#b15928", "degenerate"),
        (_, Stability::Stable) => ("#1f78b4", "stable"),
        (_, Stability::Unstable) => ("#e31a1c", "unstable"),
        (_, Stability::Neutral) => ("#33a02c", "neutral"),
    }
}

pub fn render_portrait(params: &Params, tol: &Tolerances, opts: &PortraitOptions) -> Portrait {
    let equilibria = all_equilibria_with(params, tol).unwrap_or_default();
    let cycles = find_limit_cycles(params).unwrap_or_default();
    let reach = equilibria
        .iter()
        .map(|e| e.state.modulus())
        .chain(cycles.iter().flat_map(|c| c.orbit.iter().map(|s| s.modulus())))
        .fold(1.0f64, f64::max);
    let radius = opts.radius.unwrap_or(1.3 * reach);

    let (size, half) = (640.0, 300.0);
    let center = size / 2.0;
    let px = |s: &PolarState| {
        let z = s.to_cartesian();
        (center + z.x / radius * half, center - z.y / radius * half)
    };
    let mut svg = Svg::new(size, size + 40.0);
    svg.line((center - half, center), (center + half, center), "#bbbbbb", 0.5);
    svg.line((center, center - half), (center, center + half), "#bbbbbb", 0.5);
    svg.rect(center - half, center - half, 2.0 * half, 2.0 * half, "none", r##" stroke="#000000""##);

    // theta' = 0: r = -p2 / (s2 + sin 2n theta)
    let mut piece: Vec<(f64, f64)> = Vec::new();
    let steps = 4000;
    for k in 0..=steps {
        let theta = TAU * k as f64 / steps as f64;
        let r = -params.p2() / params.c(theta);
        if r > 0.0 && r.sqrt() <= radius {
            piece.push(px(&PolarState { r, theta }));
        } else {
            svg.polyline(&piece, "#ff7f00", 1.0, r#" stroke-dasharray="4 3""#);
            piece.clear();
        }
    }
    svg.polyline(&piece, "#ff7f00", 1.0, r#" stroke-dasharray="4 3""#);

    let flow = FlowOptions {
        blow_up_radius: radius,
        max_steps: 20_000,
        ..FlowOptions::default()
    }
    .with_rtol(1e-8);
    let m = opts.trajectories;
    let mut drawn = 0;
    for k in 0..m {
        let ring = [0.25, 0.6, 0.95][k % 3];
        let theta = TAU * k as f64 / m as f64 + 0.1;
        let Ok(start) = PolarState::new((ring * radius).powi(2), theta) else {
            continue;
        };
        let Ok(tr) = integrate_with(params, start, opts.horizon, &flow) else {
            continue;
        };
        let pts: Vec<(f64, f64)> = tr
            .samples
            .iter()
            .filter(|s| s.r.sqrt() <= radius)
            .map(|s| px(&s.state()))
            .collect();
        svg.polyline(&pts, "#7f7f7f", 0.7, "");
        if let Some(&p) = pts.first() {
            svg.circle(p, 1.5, "#7f7f7f", "none");
        }
        drawn += 1;
    }

    for c in &cycles {
        let mut pts: Vec<(f64, f64)> = c.orbit.iter().map(px).collect();
        if let Some(&first) = pts.first() {
            pts.push(first);
        }
        svg.polyline(&pts, "#e31a1c", 2.2, "");
    }

    let q = quadratic_form(params.p1(), params.p2(), params);
    let mut polygon = false;
    if q.value.abs() <= tol.q_band(q.scale()) {
        if let Ok(poly) = build_transversal_polygon_with(params, tol) {
            for line in poly.polylines(params.n()) {
                let pts: Vec<(f64, f64)> = line.iter().map(px).collect();
                svg.polyline(&pts, "#1f78b4", 1.4, "");
            }
            svg.text((12.0, size + 28.0), 12.0, "start", &format!("polygon min margin = {}", num(poly.min_margin())));
            polygon = true;
        }
    }

    for e in &equilibria {
        let (color, _) = marker(e.class, e.stability);
        svg.circle(px(&e.state), 4.0, color, "#000000");
    }
    let title = format!(
        "p = ({}, {}), s = ({}, {}), n = {}, view |z| <= {:.3}",
        params.p1(),
        params.p2(),
        params.s1(),
        params.s2(),
        params.n(),
        radius
    );
    svg.text((12.0, 14.0), 12.0, "start", &title);
    Portrait {
        svg: svg.finish(),
        radius,
        equilibria: equilibria.len(),
        cycles: cycles.len(),
        polygon,
        trajectories: drawn,
    }
}
