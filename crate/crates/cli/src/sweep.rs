//! Parameter-plane sweeps: one labelled row per grid point.

use std::f64::consts::TAU;
use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use z2n_core::equilibria::all_equilibria_with;
use z2n_core::oracle::{oracle_equilibria, OracleConfig};
use z2n_core::{Params, PolarState, Tolerances};

use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::region::{region_label, region_values, BForm, RegionColor, RegionLabel, RegionValues};
use crate::svg::Svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    P1,
    P2,
    S1,
    S2,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::P1 => "p1",
            Axis::P2 => "p2",
            Axis::S1 => "s1",
            Axis::S2 => "s2",
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "p1" => Ok(Axis::P1),
            "p2" => Ok(Axis::P2),
            "s1" => Ok(Axis::S1),
            "s2" => Ok(Axis::S2),
            _ => Err(format!("unknown axis `{s}` (expected p1, p2, s1 or s2)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub x: Axis,
    pub y: Axis,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// Values of `(p1, p2, s1, s2)`; the two axis entries are ignored.
    pub base: [f64; 4],
    pub n: u32,
    pub tol: Tolerances,
    pub b_form: BForm,
    /// Number of rows checked against the oracle.
    pub verify: usize,
    pub seed: u64,
}

impl SweepPlan {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Usage(m));
        if self.x == self.y {
            return bad("sweep axes must differ".into());
        }
        if self.nx == 0 || self.ny == 0 {
            return bad("sweep resolution must be at least 1 per axis".into());
        }
        for (name, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return bad(format!("{name} range must be finite with min <= max"));
            }
        }
        if !self.base.iter().all(|v| v.is_finite()) {
            return bad("fixed parameter values must be finite".into());
        }
        Params::new(0.0, 0.0, 0.0, 0.0, self.n).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }

    fn coord(range: (f64, f64), count: usize, k: usize) -> f64 {
        if count == 1 {
            range.0
        } else {
            range.0 + (range.1 - range.0) * k as f64 / (count - 1) as f64
        }
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64, Params) {
        let x = Self::coord(self.x_range, self.nx, i);
        let y = Self::coord(self.y_range, self.ny, j);
        let mut v = self.base;
        v[self.x.index()] = x;
        v[self.y.index()] = y;
        let p = Params::new(v[0], v[1], v[2], v[3], self.n).expect("validated plan");
        (x, y, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub oracle_count: usize,
    pub agree: bool,
    /// Largest distance from a closed-form equilibrium to its nearest oracle point.
    pub max_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub params: Params,
    pub values: RegionValues,
    pub label: RegionLabel,
    pub verification: Option<Verification>,
}

/// Rows ordered with `x` varying fastest.
pub fn run_sweep(plan: &SweepPlan) -> CliResult<Vec<SweepRow>> {
    plan.validate()?;
    let total = plan.nx * plan.ny;
    let checked: Vec<bool> = {
        let mut mask = vec![false; total];
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        for k in sample(&mut rng, total, plan.verify.min(total)) {
            mask[k] = true;
        }
        mask
    };
    (0..total)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % plan.nx, k / plan.nx);
            let (x, y, params) = plan.point(i, j);
            let label = region_label(&params, &plan.tol, plan.b_form);
            let verification = if checked[k] { verify_point(&params, &plan.tol, &label)? } else { None };
            Ok(SweepRow {
                i,
                j,
                x,
                y,
                params,
                values: region_values(&params),
                label,
                verification,
            })
        })
        .collect()
}

fn distance(a: &PolarState, b: &PolarState) -> f64 {
    let (u, v) = (a.to_cartesian(), b.to_cartesian());
    (u.x - v.x).hypot(u.y - v.y)
}

fn verify_point(params: &Params, tol: &Tolerances, label: &RegionLabel) -> CliResult<Option<Verification>> {
    let Some(count) = label.count else {
        return Ok(None);
    };
    let oracle = oracle_equilibria(params, &OracleConfig::for_params(params))
        .map_err(|e| CliError::Numerical(format!("oracle at {params:?}: {e}")))?;
    let closed = all_equilibria_with(params, tol).map_err(|e| CliError::Numerical(e.to_string()))?;
    let max_distance = closed
        .iter()
        .map(|e| oracle.iter().map(|o| distance(&e.state, o)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(Some(Verification {
        oracle_count: oracle.len(),
        agree: oracle.len() == count && max_distance < 1e-7,
        max_distance,
    }))
}

pub const CSV_HEADER: [&str; 23] = [
    "i",
    "j",
    "x",
    "y",
    "p1",
    "p2",
    "s1",
    "s2",
    "n",
    "q",
    "q_2p1",
    "b_criterion",
    "q_class",
    "b_class",
    "p2s2_class",
    "label",
    "count",
    "uniqueness",
    "color",
    "verified",
    "oracle_count",
    "oracle_agree",
    "oracle_max_distance",
];

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let p = &r.params;
        let l = &r.label;
        let v = r.verification;
        w.write_record([
            r.i.to_string(),
            r.j.to_string(),
            num(r.x),
            num(r.y),
            num(p.p1()),
            num(p.p2()),
            num(p.s1()),
            num(p.s2()),
            p.n().to_string(),
            num(r.values.q),
            num(r.values.q_2p1),
            num(r.values.b_criterion),
            l.q.as_str().into(),
            l.b.as_str().into(),
            l.p2s2.as_str().into(),
            l.tag(),
            l.count.map(|c| c.to_string()).unwrap_or_default(),
            l.uniqueness_str().into(),
            l.color().as_str().into(),
            v.is_some().to_string(),
            v.map(|v| v.oracle_count.to_string()).unwrap_or_default(),
            v.map(|v| v.agree.to_string()).unwrap_or_default(),
            v.map(|v| num(v.max_distance)).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Region image: one cell per grid point, `y` increasing upward.
pub fn render_svg(plan: &SweepPlan, rows: &[SweepRow]) -> String {
    let (plot, margin) = (600.0, 60.0);
    let legend = 170.0;
    let mut svg = Svg::new(plot + 2.0 * margin + legend, plot + 2.0 * margin);
    let (cw, ch) = (plot / plan.nx as f64, plot / plan.ny as f64);
    for j in 0..plan.ny {
        let row = &rows[j * plan.nx..(j + 1) * plan.nx];
        let y = margin + plot - (j + 1) as f64 * ch;
        let mut start = 0;
        while start < row.len() {
            let color = row[start].label.color();
            let mut end = start + 1;
            while end < row.len() && row[end].label.color() == color {
                end += 1;
            }
            if color != RegionColor::White {
                svg.rect(margin + start as f64 * cw, y, (end - start) as f64 * cw, ch, color.hex(), "");
            }
            start = end;
        }
    }
    for r in rows.iter().filter(|r| r.verification.is_some()) {
        let at = (margin + (r.i as f64 + 0.5) * cw, margin + plot - (r.j as f64 + 0.5) * ch);
        let ok = r.verification.is_some_and(|v| v.agree);
        svg.circle(at, 2.5, if ok { "#000000" } else { "#e31a1c" }, "none");
    }
    svg.rect(margin, margin, plot, plot, "none", r##" stroke="#000000""##);
    let to_px = |range: (f64, f64), v: f64| if range.1 > range.0 { (v - range.0) / (range.1 - range.0) * plot } else { 0.0 };
    if plan.x_range.0 < 0.0 && plan.x_range.1 > 0.0 {
        let x = margin + to_px(plan.x_range, 0.0);
        svg.line((x, margin), (x, margin + plot), "#555555", 0.5);
    }
    if plan.y_range.0 < 0.0 && plan.y_range.1 > 0.0 {
        let y = margin + plot - to_px(plan.y_range, 0.0);
        svg.line((margin, y), (margin + plot, y), "#555555", 0.5);
    }
    let label = |r: (f64, f64)| (format!("{:.3}", r.0), format!("{:.3}", r.1));
    let (x0, x1) = label(plan.x_range);
    let (y0, y1) = label(plan.y_range);
    svg.text((margin, margin + plot + 18.0), 12.0, "start", &x0);
    svg.text((margin + plot, margin + plot + 18.0), 12.0, "end", &x1);
    svg.text((margin + plot / 2.0, margin + plot + 40.0), 14.0, "middle", plan.x.as_str());
    svg.text((margin - 6.0, margin + plot), 12.0, "end", &y0);
    svg.text((margin - 6.0, margin + 12.0), 12.0, "end", &y1);
    svg.text((margin - 30.0, margin + plot / 2.0), 14.0, "middle", plan.y.as_str());
    let fixed: Vec<String> = [Axis::P1, Axis::P2, Axis::S1, Axis::S2]
        .iter()
        .filter(|a| **a != plan.x && **a != plan.y)
        .map(|a| format!("{} = {}", a.as_str(), plan.base[a.index()]))
        .chain([format!("n = {}", plan.n)])
        .collect();
    svg.text((margin, margin - 20.0), 14.0, "start", &fixed.join(", "));
    let entries = [
        (RegionColor::Blue, "Q(p1,p2) >= 0"),
        (RegionColor::Yellow, "B changes sign"),
        (RegionColor::Green, "both"),
        (RegionColor::DarkBlue, "blue, p2 s2 < 0"),
        (RegionColor::DarkGreen, "green, p2 s2 < 0"),
        (RegionColor::Excluded, "|s2| <= 1"),
    ];
    let lx = margin + plot + 20.0;
    for (k, (color, text)) in entries.iter().enumerate() {
        let y = margin + 10.0 + 24.0 * k as f64;
        svg.rect(lx, y, 16.0, 16.0, color.hex(), r##" stroke="#000000""##);
        svg.text((lx + 22.0, y + 13.0), 12.0, "start", text);
    }
    svg.finish()
}

/// Number of maximal runs of `true` around a closed cyclic sequence.
pub fn cyclic_runs(flags: &[bool]) -> usize {
    let m = flags.len();
    (0..m).filter(|&k| flags[k] && !flags[(k + m - 1) % m]).count()
}

/// Angle of a point measured in the sweep plane.
pub fn plane_angle(x: f64, y: f64) -> f64 {
    y.atan2(x).rem_euclid(TAU)
}
