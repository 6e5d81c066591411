//! Closed-form equilibria, their count and their linear type.
//!
//! Nontrivial equilibria solve, in the variable `phi = n theta`,
//!
//! ```text
//! p1 + r (s1 - cos 2phi) = 0,      p2 + r (s2 + sin 2phi) = 0.
//! ```
//!
//! Eliminating `r` and writing `t = tan phi` gives `T+ t^2 - 2 p1 t - T- = 0`
//! with discriminant `Q(p1, p2)`; the substitution `tau = cot phi` gives
//! `T- tau^2 + 2 p1 tau - T+ = 0`. The two branches cover `(-pi/2, pi/2)`
//! and `(0, pi)` respectively, so their union covers every angle.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::abel::{classify_origin, OriginStability};
use crate::error::{Error, Result};
use crate::field::{eval_polar, is_hamiltonian, Params, PolarState};
use crate::linalg::{eigenvalues, Mat2};
use crate::tol::Tolerances;

/// A value of `Q(a, b) = a^2 + b^2 - (a s2 - b s1)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormValue {
    pub value: f64,
    pub a: f64,
    pub b: f64,
}

impl QuadraticFormValue {
    /// Scale used for the zero band: `max(a^2 + b^2, 1)`.
    pub fn scale(&self) -> f64 {
        (self.a * self.a + self.b * self.b).max(1.0)
    }
}

pub fn quadratic_form(a: f64, b: f64, params: &Params) -> QuadraticFormValue {
    let k = a * params.s2 - b * params.s1;
    QuadraticFormValue {
        value: a * a + b * b - k * k,
        a,
        b,
    }
}

/// The expanded form `(1 - s2^2) a^2 + (1 - s1^2) b^2 + 2 s1 s2 a b`.
pub fn quadratic_form_expanded(a: f64, b: f64, params: &Params) -> f64 {
    let (s1, s2) = (params.s1, params.s2);
    (1.0 - s2 * s2) * a * a + (1.0 - s1 * s1) * b * b + 2.0 * s1 * s2 * a * b
}

/// `(T+, T-) = (p2 - p1 s2 + p2 s1, p2 + p1 s2 - p2 s1)`.
pub fn t_plus_minus(params: &Params) -> (f64, f64) {
    let k = params.p1 * params.s2 - params.p2 * params.s1;
    (params.p2 - k, params.p2 + k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumClass {
    OriginFocus,
    Node,
    Focus,
    Saddle,
    SaddleNode,
    CenterCandidate,
    Degenerate,
}

impl EquilibriumClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            EquilibriumClass::OriginFocus => "origin-focus",
            EquilibriumClass::Node => "node",
            EquilibriumClass::Focus => "focus",
            EquilibriumClass::Saddle => "saddle",
            EquilibriumClass::SaddleNode => "saddle-node",
            EquilibriumClass::CenterCandidate => "center-candidate",
            EquilibriumClass::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    /// Neither attracting nor repelling at linear order (saddles, centers).
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub state: PolarState,
    /// Eigenvalues of the polar Jacobian, ordered by increasing modulus.
    /// At the origin the polar chart is singular and these are `(2 p1, 0)`.
    pub eigenvalues: [Complex64; 2],
    pub class: EquilibriumClass,
    pub stability: Stability,
    /// Lies in the fundamental sector `0 <= theta < pi/n`.
    pub fundamental: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    QNegative,
    QZero,
    QPositive,
    P2s2Nonneg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCount {
    pub count: usize,
    pub regime: Regime,
    /// `s1 = 0` lies outside the hypotheses of the counting theorem.
    pub outside_hypotheses: bool,
}

/// A fundamental equilibrium as produced by the closed-form branches.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BranchRoot {
    /// `phi` in `[0, pi)`.
    phi: f64,
    double: bool,
}

fn sgn(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn discriminant(params: &Params, tol: &Tolerances) -> (f64, bool) {
    let q = quadratic_form(params.p1, params.p2, params);
    let band = tol.q_band(q.scale());
    (q.value, q.value.abs() <= band)
}

/// Roots `t = tan phi` of `T+ t^2 - 2 p1 t - T- = 0`, as angles in `(-pi/2, pi/2)`.
///
/// With `T+ = 0` the equation is linear and the single root is `t = -T-/(2 p1)`.
pub fn tan_branch_angles(params: &Params, tol: &Tolerances) -> Vec<f64> {
    branch_roots(params, tol, true).into_iter().map(|(phi, _)| phi).collect()
}

/// Roots `tau = cot phi` of `T- tau^2 + 2 p1 tau - T+ = 0`, as angles in `(0, pi)`.
pub fn cot_branch_angles(params: &Params, tol: &Tolerances) -> Vec<f64> {
    branch_roots(params, tol, false).into_iter().map(|(phi, _)| phi).collect()
}

fn branch_roots(params: &Params, tol: &Tolerances, tan_branch: bool) -> Vec<(f64, bool)> {
    let (delta, on_band) = discriminant(params, tol);
    if delta < 0.0 && !on_band {
        return Vec::new();
    }
    let (tp, tm) = t_plus_minus(params);
    let p1 = params.p1;
    // both branches reduce to  lead * u^2 - 2 b u - tail = 0
    let (lead, b, tail) = if tan_branch { (tp, p1, tm) } else { (tm, -p1, tp) };
    let to_angle = |u: f64| if tan_branch { u.atan() } else { 1.0f64.atan2(u) };
    let in_range = |phi: f64| {
        if tan_branch {
            phi.abs() < FRAC_PI_2
        } else {
            phi > 0.0 && phi < PI
        }
    };
    let mut out = Vec::new();
    if on_band {
        // double root u = b / lead = -tail / b
        let u = if lead.abs() >= b.abs() && lead != 0.0 {
            b / lead
        } else if b != 0.0 {
            -tail / b
        } else {
            return out;
        };
        let phi = to_angle(u);
        if in_range(phi) {
            out.push((phi, true));
        }
        return out;
    }
    let q = b + sgn(b) * delta.sqrt();
    let mut candidates = Vec::with_capacity(2);
    if lead != 0.0 {
        candidates.push(q / lead);
    }
    if q != 0.0 {
        candidates.push(-tail / q);
    }
    for u in candidates {
        let phi = to_angle(u);
        if u.is_finite() && in_range(phi) {
            out.push((phi, false));
        }
    }
    out
}

fn angular_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn fundamental_roots(params: &Params, tol: &Tolerances) -> Result<Vec<(PolarState, bool)>> {
    params.require_s2()?;
    params.require_p()?;
    let mut roots: Vec<BranchRoot> = Vec::new();
    let all = branch_roots(params, tol, true)
        .into_iter()
        .chain(branch_roots(params, tol, false));
    for (phi, double) in all {
        let phi = phi.rem_euclid(PI);
        if let Some(existing) = roots
            .iter_mut()
            .find(|r| angular_distance(r.phi, phi, PI) < 1e-9)
        {
            existing.double |= double;
        } else {
            roots.push(BranchRoot { phi, double });
        }
    }
    let n = params.n as f64;
    let mut out = Vec::new();
    for root in roots {
        let r = -params.p2 / (params.s2 + (2.0 * root.phi).sin());
        if !(r > 0.0) {
            continue;
        }
        let (r, phi) = if root.double { (r, root.phi) } else { polish(params, r, root.phi) };
        out.push((
            PolarState {
                r,
                theta: phi.rem_euclid(PI) / n,
            },
            root.double,
        ));
    }
    out.sort_by(|a, b| a.0.theta.total_cmp(&b.0.theta));
    Ok(out)
}

/// Two Newton steps on the `(r, phi)` equilibrium equations; a step is kept
/// only if it reduces the residual.
fn polish(params: &Params, mut r: f64, mut phi: f64) -> (f64, f64) {
    let residual = |r: f64, phi: f64| {
        let (sn, cs) = (2.0 * phi).sin_cos();
        [
            params.p1 + r * (params.s1 - cs),
            params.p2 + r * (params.s2 + sn),
        ]
    };
    for _ in 0..2 {
        let g = residual(r, phi);
        let (sn, cs) = (2.0 * phi).sin_cos();
        let jac: Mat2 = [[params.s1 - cs, 2.0 * r * sn], [params.s2 + sn, 2.0 * r * cs]];
        let Some(step) = crate::linalg::solve(&jac, g) else {
            break;
        };
        let (nr, nphi) = (r - step[0], phi - step[1]);
        let ng = residual(nr, nphi);
        if nr > 0.0 && ng[0].hypot(ng[1]) < g[0].hypot(g[1]) {
            r = nr;
            phi = nphi;
        } else {
            break;
        }
    }
    (r, phi)
}

/// Equilibria with `r > 0` and `theta = phi / n` in `[0, pi/n)`.
pub fn solve_fundamental_equilibria(params: &Params) -> Result<Vec<PolarState>> {
    solve_fundamental_equilibria_with(params, &Tolerances::default())
}

pub fn solve_fundamental_equilibria_with(params: &Params, tol: &Tolerances) -> Result<Vec<PolarState>> {
    Ok(fundamental_roots(params, tol)?.into_iter().map(|(s, _)| s).collect())
}

/// Jacobian of the time-rescaled polar field with respect to `(r, theta)`.
pub fn jacobian(params: &Params, state: PolarState) -> Mat2 {
    let n = params.n as f64;
    let r = state.r;
    let (sn, cs) = (2.0 * n * state.theta).sin_cos();
    [
        [2.0 * params.p1 + 4.0 * r * (params.s1 - cs), 4.0 * n * r * r * sn],
        [params.s2 + sn, 2.0 * n * r * cs],
    ]
}

fn origin_equilibrium(params: &Params) -> Equilibrium {
    let eig = eigenvalues(&jacobian(params, PolarState::origin()));
    let (class, stability) = if params.p2 == 0.0 {
        (EquilibriumClass::Degenerate, Stability::Neutral)
    } else {
        match classify_origin(params) {
            Ok(report) => match report.stability {
                OriginStability::Center => (EquilibriumClass::CenterCandidate, Stability::Neutral),
                OriginStability::Stable => (EquilibriumClass::OriginFocus, Stability::Stable),
                OriginStability::Unstable => (EquilibriumClass::OriginFocus, Stability::Unstable),
            },
            Err(_) => (EquilibriumClass::Degenerate, Stability::Neutral),
        }
    };
    Equilibrium {
        state: PolarState::origin(),
        eigenvalues: eig,
        class,
        stability,
        fundamental: true,
    }
}

/// Linear type of an equilibrium from its eigenvalues.
pub fn classify_eigenvalues(eig: &[Complex64; 2], tol: &Tolerances) -> (EquilibriumClass, Stability) {
    let [small, big] = *eig;
    if small.im != 0.0 {
        let re = small.re;
        if re.abs() < tol.sn {
            return (EquilibriumClass::CenterCandidate, Stability::Neutral);
        }
        let stab = if re < 0.0 { Stability::Stable } else { Stability::Unstable };
        return (EquilibriumClass::Focus, stab);
    }
    let (a, b) = (small.re, big.re);
    if b.abs() < tol.sn {
        return (EquilibriumClass::Degenerate, Stability::Neutral);
    }
    if a.abs() < tol.sn {
        let stab = if b < 0.0 { Stability::Stable } else { Stability::Unstable };
        return (EquilibriumClass::SaddleNode, stab);
    }
    if a * b < 0.0 {
        return (EquilibriumClass::Saddle, Stability::Neutral);
    }
    let stab = if b < 0.0 { Stability::Stable } else { Stability::Unstable };
    (EquilibriumClass::Node, stab)
}

pub fn classify_equilibrium(params: &Params, state: PolarState) -> Result<Equilibrium> {
    classify_equilibrium_with(params, state, &Tolerances::default())
}

pub fn classify_equilibrium_with(params: &Params, state: PolarState, tol: &Tolerances) -> Result<Equilibrium> {
    if state.r == 0.0 {
        return Ok(origin_equilibrium(params));
    }
    let (rd, td) = eval_polar(params, state);
    let residual = rd.hypot(td);
    if residual >= tol.eq * (1.0 + state.r).powi(2) {
        return Err(Error::NotAnEquilibrium {
            r: state.r,
            theta: state.theta,
            residual,
        });
    }
    let eig = eigenvalues(&jacobian(params, state));
    let (class, stability) = classify_eigenvalues(&eig, tol);
    Ok(Equilibrium {
        state,
        eigenvalues: eig,
        class,
        stability,
        fundamental: state.theta < params.sector(),
    })
}

/// The origin and all `2n` symmetric copies of every fundamental equilibrium.
pub fn all_equilibria(params: &Params) -> Result<Vec<Equilibrium>> {
    all_equilibria_with(params, &Tolerances::default())
}

pub fn all_equilibria_with(params: &Params, tol: &Tolerances) -> Result<Vec<Equilibrium>> {
    let fundamental = fundamental_roots(params, tol)?;
    let mut out = vec![origin_equilibrium(params)];
    for (state, _) in fundamental {
        for k in 0..2 * params.n {
            let mut eq = classify_equilibrium_with(params, state.rotated(k, params.n), tol)?;
            eq.fundamental = k == 0;
            out.push(eq);
        }
    }
    Ok(out)
}

pub fn count_equilibria(params: &Params) -> Result<EquilibriumCount> {
    count_equilibria_with(params, &Tolerances::default())
}

pub fn count_equilibria_with(params: &Params, tol: &Tolerances) -> Result<EquilibriumCount> {
    params.require_s2()?;
    params.require_p()?;
    let n = params.n as usize;
    let outside_hypotheses = params.s1 == 0.0;
    if params.p2 * params.s2 >= 0.0 {
        return Ok(EquilibriumCount {
            count: 1,
            regime: Regime::P2s2Nonneg,
            outside_hypotheses,
        });
    }
    let q = quadratic_form(params.p1, params.p2, params);
    let band = tol.q_band(q.scale());
    let (count, regime) = if q.value < -band {
        (1, Regime::QNegative)
    } else if q.value <= band {
        (2 * n + 1, Regime::QZero)
    } else {
        (4 * n + 1, Regime::QPositive)
    };
    Ok(EquilibriumCount {
        count,
        regime,
        outside_hypotheses,
    })
}

/// The nonzero eigenvalue at a saddle-node on the `Q = 0` stratum, three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleNodeEigenvalue {
    /// Trace of the Jacobian at the saddle-node.
    pub from_jacobian: f64,
    /// `-2 p1 + 2 n p2 (p1^2 - T+^2) / (s2 T+^2 + 2 p1 T+ + p1^2 s2)`.
    pub closed_form: f64,
    /// `2 p1 - 2 p2 ((2 s1 - n + 2) T+^2 + p1^2 (2 s1 + n - 2)) / (s2 T+^2 + 2 p1 T+ + p1 s2)`
    /// as it appears in the literature.
    pub literature_form: f64,
    /// `literature_form` agrees with `from_jacobian` to `1e-6` relative.
    pub literature_agrees: bool,
}

/// Compares closed forms of the nonzero saddle-node eigenvalue with the
/// Jacobian. Requires the parameters to lie on the `Q = 0` stratum.
pub fn saddle_node_eigenvalue(params: &Params, tol: &Tolerances) -> Result<SaddleNodeEigenvalue> {
    let roots = fundamental_roots(params, tol)?;
    let Some((state, _)) = roots.iter().find(|(_, double)| *double) else {
        let q = quadratic_form(params.p1, params.p2, params);
        return Err(Error::NotOnStratum { q: q.value });
    };
    let from_jacobian = crate::linalg::trace(&jacobian(params, *state));
    let (tp, _) = t_plus_minus(params);
    let (p1, p2, s1, s2) = (params.p1, params.p2, params.s1, params.s2);
    let n = params.n as f64;
    let closed_form =
        -2.0 * p1 + 2.0 * n * p2 * (p1 * p1 - tp * tp) / (s2 * tp * tp + 2.0 * p1 * tp + p1 * p1 * s2);
    let literature_form = 2.0 * p1
        - 2.0 * p2 * ((2.0 * s1 - n + 2.0) * tp * tp + p1 * p1 * (2.0 * s1 + n - 2.0))
            / (s2 * tp * tp + 2.0 * p1 * tp + p1 * s2);
    let literature_agrees = (literature_form - from_jacobian).abs() <= 1e-6 * from_jacobian.abs().max(1e-300);
    Ok(SaddleNodeEigenvalue {
        from_jacobian,
        closed_form,
        literature_form,
        literature_agrees,
    })
}

/// The Hamiltonian case has divergence-free linearizations.
pub fn hamiltonian_trace_bound(params: &Params) -> Option<f64> {
    if !is_hamiltonian(params) {
        return None;
    }
    let eqs = all_equilibria(params).ok()?;
    Some(
        eqs.iter()
            .filter(|e| e.state.r > 0.0)
            .map(|e| crate::linalg::trace(&cartesian_jacobian(params, e.state)).abs())
            .fold(0.0, f64::max),
    )
}

/// Central-difference Jacobian of the planar field at a polar state.
pub fn cartesian_jacobian(params: &Params, state: PolarState) -> Mat2 {
    use crate::field::{eval_field, CartesianPoint};
    let z = state.to_cartesian();
    let h = 1e-6 * (1.0 + z.norm());
    let fx = |dx: f64, dy: f64| eval_field(params, CartesianPoint::new(z.x + dx, z.y + dy));
    let (xp, xm, yp, ym) = (fx(h, 0.0), fx(-h, 0.0), fx(0.0, h), fx(0.0, -h));
    [
        [(xp.x - xm.x) / (2.0 * h), (yp.x - ym.x) / (2.0 * h)],
        [(xp.y - xm.y) / (2.0 * h), (yp.y - ym.y) / (2.0 * h)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn focus_example() -> Params {
        Params::new(1.0, 1.0, -0.5, 2.0, 2).unwrap()
    }

    pub(crate) fn saddle_node_example(n: u32) -> Params {
        Params::new((2.0 + 13f64.sqrt()) / 6.0, -1.0, -0.5, 2.0, n).unwrap()
    }

    #[test]
    fn quadratic_form_examples() {
        let q = focus_example();
        assert_eq!(quadratic_form(1.0, 1.0, &q).value, -17.0 / 4.0);
        let c = saddle_node_example(3);
        assert!(quadratic_form(c.p1, -1.0, &c).value.abs() < 1e-14);
        let q0 = quadratic_form(0.7, 0.0, &q).value;
        assert_relative_eq!(q0, (1.0 - 4.0) * 0.49, max_relative = 1e-15);
        for &(a, b) in &[(0.3, -1.7), (2.0, 5.0), (-1.1, 0.2)] {
            let direct = quadratic_form(a, b, &c).value;
            assert_relative_eq!(direct, quadratic_form_expanded(a, b, &c), max_relative = 1e-12);
        }
    }

    #[test]
    fn t_values() {
        let q = Params::new(0.0, 1.0, 0.0, 2.0, 3).unwrap();
        assert_eq!(t_plus_minus(&q), (1.0, 1.0));
        let (tp, tm) = t_plus_minus(&saddle_node_example(2));
        assert_relative_eq!(tp, -(7.0 + 2.0 * 13f64.sqrt()) / 6.0, max_relative = 1e-15);
        assert_relative_eq!(tp + tm, -2.0, max_relative = 1e-15);
    }

    #[test]
    fn fundamental_examples() {
        // p2 s2 > 0: origin only
        let q = Params::new(0.3, 1.0, 0.5, 2.0, 4).unwrap();
        assert!(solve_fundamental_equilibria(&q).unwrap().is_empty());
        assert!(solve_fundamental_equilibria(&focus_example()).unwrap().is_empty());

        let c = saddle_node_example(5);
        let sols = solve_fundamental_equilibria(&c).unwrap();
        assert_eq!(sols.len(), 1);
        let phi = sols[0].theta * 5.0;
        assert!((phi.tan() - (13f64.sqrt() - 4.0)).abs() < 1e-12);
        assert!((sols[0].r - 0.759_116_699_370_871_6).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let bad = Params::new(1.0, 1.0, 0.5, 0.5, 3).unwrap();
        assert_eq!(solve_fundamental_equilibria(&bad), Err(Error::RequiresS2 { s2: 0.5 }));
        let zero = Params::new(0.0, 0.0, 0.5, 2.0, 3).unwrap();
        assert_eq!(solve_fundamental_equilibria(&zero), Err(Error::ZeroP));
        let not_eq = classify_equilibrium(&focus_example(), PolarState::new(1.0, 0.0).unwrap());
        assert!(matches!(not_eq, Err(Error::NotAnEquilibrium { .. })));
    }

    #[test]
    fn linear_root_branch() {
        // T+ = 0: p2 = p1 s2 - p2 s1  => p2 (1 + s1) = p1 s2
        let (s1, s2, p1) = (0.5, -3.0, -1.0);
        let p2 = p1 * s2 / (1.0 + s1);
        let q = Params::new(p1, p2, s1, s2, 3).unwrap();
        let (tp, tm) = t_plus_minus(&q);
        assert!(tp.abs() < 1e-15);
        let tan = tan_branch_angles(&q, &Tolerances::default());
        assert_eq!(tan.len(), 1);
        assert!((tan[0].tan() + tm / (2.0 * p1)).abs() < 1e-12);
        // phi = pi/2 is picked up by the cot branch
        let cot = cot_branch_angles(&q, &Tolerances::default());
        assert!(cot.iter().any(|phi| (phi - FRAC_PI_2).abs() < 1e-12));
        let sols = solve_fundamental_equilibria(&q).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            let (rd, td) = eval_polar(&q, s);
            assert!(rd.abs() < 1e-12 && td.abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_phi_zero() {
        // T- = 0 puts an equilibrium on phi = 0 at r = -p2/s2
        let (s1, s2, p2) = (0.25, 2.5, -1.0);
        let p1 = p2 * (s1 - 1.0) / s2;
        let q = Params::new(p1, p2, s1, s2, 2).unwrap();
        let sols = solve_fundamental_equilibria(&q).unwrap();
        assert!(sols.iter().any(|s| s.theta.abs() < 1e-12 && (s.r + p2 / s2).abs() < 1e-12));
    }

    #[test]
    fn origin_classification() {
        let eqs = all_equilibria(&focus_example()).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].class, EquilibriumClass::OriginFocus);
        assert_eq!(eqs[0].stability, Stability::Unstable);
        let ham = Params::new(0.0, 1.0, 0.0, 2.0, 3).unwrap();
        let o = classify_equilibrium(&ham, PolarState::origin()).unwrap();
        assert_eq!(o.class, EquilibriumClass::CenterCandidate);
    }

    #[test]
    fn saddle_nodes_on_stratum() {
        for n in [2, 3, 7] {
            let c = saddle_node_example(n);
            let eqs = all_equilibria(&c).unwrap();
            assert_eq!(eqs.len(), 2 * n as usize + 1);
            for e in &eqs[1..] {
                assert_eq!(e.class, EquilibriumClass::SaddleNode);
                assert!(e.eigenvalues[0].norm() < 1e-8);
            }
            let lam = saddle_node_eigenvalue(&c, &Tolerances::default()).unwrap();
            assert_relative_eq!(lam.closed_form, lam.from_jacobian, max_relative = 1e-9);
            assert_relative_eq!(eqs[1].eigenvalues[1].re, lam.from_jacobian, max_relative = 1e-9);
        }
        // the literature form only agrees at n = 2
        assert!(!saddle_node_eigenvalue(&saddle_node_example(3), &Tolerances::default()).unwrap().literature_agrees);
        assert!(!saddle_node_eigenvalue(&saddle_node_example(7), &Tolerances::default()).unwrap().literature_agrees);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let q = Params::new(0.8, -1.3, 0.6, -2.2, 3).unwrap();
        for k in 0..20 {
            let s = PolarState::new(0.1 + 0.2 * k as f64, 0.37 * k as f64).unwrap();
            let j = jacobian(&q, s);
            let h = 1e-6;
            let f = |r: f64, t: f64| eval_polar(&q, PolarState { r, theta: t });
            let (a, b) = (f(s.r + h, s.theta), f(s.r - h, s.theta));
            let (c, d) = (f(s.r, s.theta + h), f(s.r, s.theta - h));
            let fd = [
                [(a.0 - b.0) / (2.0 * h), (c.0 - d.0) / (2.0 * h)],
                [(a.1 - b.1) / (2.0 * h), (c.1 - d.1) / (2.0 * h)],
            ];
            for i in 0..2 {
                for l in 0..2 {
                    assert!((j[i][l] - fd[i][l]).abs() <= 1e-6 * (1.0 + j[i][l].abs()));
                }
            }
        }
        let o = jacobian(&q, PolarState::new(0.0, 0.3).unwrap());
        assert_eq!(o[0], [1.6, 0.0]);
        assert_eq!(o[1][1], 0.0);
    }

    #[test]
    fn hamiltonian_equilibria_trace_free() {
        // p2 s2 < 0 gives saddles and centers
        let q = Params::new(0.0, -1.0, 0.0, 2.0, 3).unwrap();
        let eqs = all_equilibria(&q).unwrap();
        assert_eq!(eqs.len(), 13);
        for e in &eqs[1..] {
            assert!(crate::linalg::trace(&jacobian(&q, e.state)).abs() < 1e-12);
        }
        assert!(hamiltonian_trace_bound(&q).unwrap() < 1e-6);
    }

    #[test]
    fn count_examples() {
        let c = count_equilibria(&focus_example()).unwrap();
        assert_eq!((c.count, c.regime), (1, Regime::P2s2Nonneg));
        let flipped = Params::new(1.0, -1.0, -0.5, 2.0, 2).unwrap();
        let c = count_equilibria(&flipped).unwrap();
        assert_eq!((c.count, c.regime), (1, Regime::QNegative));
        let c = count_equilibria(&saddle_node_example(4)).unwrap();
        assert_eq!((c.count, c.regime), (9, Regime::QZero));
        let q = Params::new(0.1, -1.0, 6.0, 4.0, 3).unwrap();
        assert_eq!(count_equilibria(&q).unwrap().count, 1);
        let s1zero = Params::new(0.1, -1.0, 0.0, 4.0, 3).unwrap();
        assert!(count_equilibria(&s1zero).unwrap().outside_hypotheses);
    }
}
