//! Abel-equation reduction and the certificates built on it.
//!
//! Away from the curve `theta' = 0`, the substitution
//! `x = r / (p2 + r c(theta))` with `c(theta) = s2 + sin 2n theta` turns
//! `dr/dtheta` into
//!
//! ```text
//! dx/dtheta = A(theta) x^3 + B(theta) x^2 + C x
//! A = (2/p2) c (p1 c - p2 s1 + p2 cos 2n theta)
//! B = (2/p2) (p2 s1 - 2 p1 s2 - 2 p1 sin 2n theta - p2 cos 2n theta) - 2n cos 2n theta
//! C = 2 p1 / p2
//! ```
//!
//! The last term of `B` is `-c'(theta)`. Both `x = 0` (the origin) and
//! `x = 1/c(theta)` (infinity) are periodic solutions; limit cycles around
//! the origin are the remaining periodic solutions.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::equilibria::quadratic_form;
use crate::error::{Error, Result};
use crate::field::{is_hamiltonian, Params, PolarState};
use crate::oracle::oracle_sign_change;
use crate::quadrature;
use crate::tol::Tolerances;

/// Samples used when a certificate falls back to (or double-checks with) a dense grid.
pub const DENSE_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelCoefficients {
    params: Params,
}

impl AbelCoefficients {
    pub fn params(&self) -> &Params {
        &self.params
    }

    fn trig(&self, theta: f64) -> (f64, f64) {
        (2.0 * self.params.n as f64 * theta).sin_cos()
    }

    /// `c(theta) = s2 + sin 2n theta`; `x = 1/c` is the image of infinity.
    pub fn c_curve(&self, theta: f64) -> f64 {
        self.params.c(theta)
    }

    pub fn a(&self, theta: f64) -> f64 {
        let Params { p1, p2, s1, s2, .. } = self.params;
        let (sn, cs) = self.trig(theta);
        2.0 / p2
            * (p1 + p1 * s2 * s2 - p2 * s1 * s2
                + (-p2 * s1 + 2.0 * p1 * s2) * sn
                + (-p1 * cs + p2 * s2 + p2 * sn) * cs)
    }

    pub fn b(&self, theta: f64) -> f64 {
        let n = self.params.n as f64;
        self.b_no_derivative(theta) - 2.0 * n * self.trig(theta).1
    }

    /// `B` without the `-c'(theta)` term, as it is usually quoted for this family.
    /// Kept for reporting; it is not the coefficient of the reduced equation.
    pub fn b_no_derivative(&self, theta: f64) -> f64 {
        let Params { p1, p2, s1, s2, .. } = self.params;
        let (sn, cs) = self.trig(theta);
        2.0 / p2 * (-2.0 * p1 * s2 + p2 * s1 - 2.0 * p1 * sn - p2 * cs)
    }

    pub fn c(&self) -> f64 {
        2.0 * self.params.p1 / self.params.p2
    }

    pub fn rhs(&self, theta: f64, x: f64) -> f64 {
        ((self.a(theta) * x + self.b(theta)) * x + self.c()) * x
    }
}

pub fn abel_coefficients(params: &Params) -> Result<AbelCoefficients> {
    params.require_p2()?;
    Ok(AbelCoefficients { params: *params })
}

/// `x = r / (p2 + r c(theta))`.
pub fn cherkas(params: &Params, state: PolarState) -> Result<f64> {
    let den = params.p2 + state.r * params.c(state.theta);
    if den.abs() <= 1e-12 {
        return Err(Error::OnSingularSet);
    }
    Ok(state.r / den)
}

/// `r = p2 x / (1 - x c(theta))`, the inverse of [`cherkas`].
pub fn inverse_cherkas(params: &Params, x: f64, theta: f64) -> Result<f64> {
    let den = 1.0 - x * params.c(theta);
    if den.abs() <= 1e-12 {
        return Err(Error::AtInfinity);
    }
    Ok(params.p2 * x / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientTag {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub function: CoefficientTag,
    pub changes_sign: bool,
    /// Two angles at which the coefficient has strictly opposite signs.
    pub witness: Option<(f64, f64)>,
    /// Discriminant whose sign decides whether the coefficient changes sign.
    pub criterion_value: f64,
    /// `|criterion_value|` fell inside the tolerance band and dense sampling decided.
    pub marginal: bool,
    /// Angle of the tangential zero on the criterion's zero set.
    pub double_root: Option<f64>,
    /// Outcome of the dense-grid check, when it ran.
    pub sampled_change: Option<bool>,
}

/// The coefficient as `prefactor(theta) * (a sin psi + b cos psi - k)`, `psi = 2n theta`,
/// with a prefactor of constant sign.
#[derive(Debug, Clone, Copy)]
struct Sinusoid {
    a: f64,
    b: f64,
    k: f64,
}

impl Sinusoid {
    fn for_a(params: &Params) -> Self {
        Sinusoid {
            a: params.p1,
            b: params.p2,
            k: params.p2 * params.s1 - params.p1 * params.s2,
        }
    }

    fn for_b(params: &Params) -> Self {
        Sinusoid {
            a: 2.0 * params.p1,
            b: (params.n as f64 + 1.0) * params.p2,
            k: params.p2 * params.s1 - 2.0 * params.p1 * params.s2,
        }
    }

    fn amplitude2(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    fn criterion(&self) -> f64 {
        self.amplitude2() - self.k * self.k
    }

    /// The two zeros `psi` of the bracket, from the unit-circle intersection
    /// `(sin psi, cos psi) = (k (a, b) +- sqrt(crit) (b, -a)) / (a^2 + b^2)`.
    fn zeros(&self) -> [f64; 2] {
        let m = self.amplitude2();
        let root = self.criterion().max(0.0).sqrt();
        let mut out = [0.0; 2];
        for (slot, sign) in out.iter_mut().zip([1.0, -1.0]) {
            let x = (self.k * self.a + sign * root * self.b) / m;
            let y = (self.k * self.b - sign * root * self.a) / m;
            *slot = x.atan2(y);
        }
        out
    }

    fn tangency(&self) -> f64 {
        (self.k * self.a).atan2(self.k * self.b)
    }
}

/// Criterion for `B`: `4 p1^2 + (n+1)^2 p2^2 - (2 p1 s2 - p2 s1)^2`, which is
/// `Q(2p1, p2) + n(n+2) p2^2`.
pub fn b_criterion(params: &Params) -> f64 {
    Sinusoid::for_b(params).criterion()
}

/// `Q(2 p1, p2)`, the criterion for the `B` quoted without its `-c'` term.
pub fn q_2p1_criterion(params: &Params) -> f64 {
    quadratic_form(2.0 * params.p1, params.p2, params).value
}

pub fn sign_certificate_a(params: &Params) -> Result<SignCertificate> {
    sign_certificate_a_with(params, &Tolerances::default())
}

pub fn sign_certificate_b(params: &Params) -> Result<SignCertificate> {
    sign_certificate_b_with(params, &Tolerances::default())
}

pub fn sign_certificate_a_with(params: &Params, tol: &Tolerances) -> Result<SignCertificate> {
    params.require_s2()?;
    let coeffs = abel_coefficients(params)?;
    Ok(certify(CoefficientTag::A, Sinusoid::for_a(params), params, tol, |t| coeffs.a(t)))
}

pub fn sign_certificate_b_with(params: &Params, tol: &Tolerances) -> Result<SignCertificate> {
    params.require_s2()?;
    let coeffs = abel_coefficients(params)?;
    Ok(certify(CoefficientTag::B, Sinusoid::for_b(params), params, tol, |t| coeffs.b(t)))
}

fn strictly_opposite(u: f64, v: f64) -> bool {
    (u > 0.0 && v < 0.0) || (u < 0.0 && v > 0.0)
}

fn certify<F: Fn(f64) -> f64>(
    function: CoefficientTag,
    sinusoid: Sinusoid,
    params: &Params,
    tol: &Tolerances,
    eval: F,
) -> SignCertificate {
    let two_n = 2.0 * params.n as f64;
    let criterion_value = sinusoid.criterion();
    let band = tol.q_band(sinusoid.amplitude2());
    let mut cert = SignCertificate {
        function,
        changes_sign: false,
        witness: None,
        criterion_value,
        marginal: false,
        double_root: None,
        sampled_change: None,
    };
    if criterion_value > band {
        if let Some(w) = closed_form_witness(&sinusoid, two_n, params.sector(), &eval) {
            cert.changes_sign = true;
            cert.witness = Some(w);
            return cert;
        }
        cert.marginal = true;
    } else if criterion_value < -band {
        let sampled = oracle_sign_change(&eval, DENSE_SAMPLES);
        cert.sampled_change = Some(sampled.changes);
        return cert;
    } else {
        cert.marginal = true;
        cert.double_root = Some((sinusoid.tangency() / two_n).rem_euclid(params.sector()));
    }
    let sampled = oracle_sign_change(&eval, DENSE_SAMPLES);
    cert.sampled_change = Some(sampled.changes);
    cert.changes_sign = sampled.changes;
    cert.witness = sampled.witness;
    cert
}

/// Opposite-sign witnesses around a simple zero, falling back to the
/// midpoints of the two arcs cut out by the zeros.
fn closed_form_witness<F: Fn(f64) -> f64>(
    sinusoid: &Sinusoid,
    two_n: f64,
    sector: f64,
    eval: &F,
) -> Option<(f64, f64)> {
    let delta = 1e-4 * PI / (two_n / 2.0);
    let [z0, z1] = sinusoid.zeros();
    for z in [z0, z1] {
        let theta = (z / two_n).rem_euclid(sector);
        let (lo, hi) = (theta - delta, theta + delta);
        if strictly_opposite(eval(lo), eval(hi)) {
            return Some((lo.rem_euclid(TAU), hi));
        }
    }
    let gap = (z1 - z0).rem_euclid(TAU);
    let mid = z0 + 0.5 * gap;
    let (u, v) = (mid / two_n, (mid + PI) / two_n);
    let (u, v) = (u.rem_euclid(TAU), v.rem_euclid(TAU));
    strictly_opposite(eval(u), eval(v)).then_some((u, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovConstants {
    pub v1: f64,
    pub v2: f64,
}

/// `V1 = exp(int C) - 1 = exp(4 pi p1/p2) - 1`, `V2 = int B = 4 pi (s1 - 2 p1 s2 / p2)`.
pub fn lyapunov_constants(params: &Params) -> Result<LyapunovConstants> {
    params.require_p2()?;
    let (p1, p2) = (params.p1, params.p2);
    Ok(LyapunovConstants {
        v1: (4.0 * PI * p1 / p2).exp_m1(),
        v2: 4.0 * PI * (params.s1 - 2.0 * p1 * params.s2 / p2),
    })
}

/// Same constants by adaptive quadrature of `C` and `B` over one period.
pub fn lyapunov_constants_by_quadrature(params: &Params) -> Result<LyapunovConstants> {
    let coeffs = abel_coefficients(params)?;
    let panels = 4 * params.n as usize;
    let int_c = quadrature::integrate(|_| coeffs.c(), 0.0, TAU, 1e-10, panels).value;
    let int_b = quadrature::integrate(|t| coeffs.b(t), 0.0, TAU, 1e-10, panels).value;
    Ok(LyapunovConstants {
        v1: int_c.exp_m1(),
        v2: int_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginStability {
    Stable,
    Unstable,
    Center,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginCriterion {
    /// Sign of `p1`.
    LinearTerm,
    /// `p1 = 0`: sign of `V2 = 4 pi s1`.
    SecondLyapunovConstant,
    /// `p1 = s1 = 0`.
    Hamiltonian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginReport {
    pub stability: OriginStability,
    pub decided_by: OriginCriterion,
    /// The lowest-order angular polynomial `p2 (x^2 + y^2)^(n-1)` has no real
    /// nontrivial zeros, so no orbit reaches the origin along a fixed direction.
    pub monodromic: bool,
    pub lyapunov: LyapunovConstants,
}

/// `R(x, y) = p2 (x^2 + y^2)^(n-1)`.
pub fn monodromy_polynomial(params: &Params, x: f64, y: f64) -> f64 {
    params.p2 * (x * x + y * y).powi(params.n as i32 - 1)
}

pub fn classify_origin(params: &Params) -> Result<OriginReport> {
    let lyapunov = lyapunov_constants(params)?;
    let (stability, decided_by) = if params.p1 > 0.0 {
        (OriginStability::Unstable, OriginCriterion::LinearTerm)
    } else if params.p1 < 0.0 {
        (OriginStability::Stable, OriginCriterion::LinearTerm)
    } else if is_hamiltonian(params) {
        (OriginStability::Center, OriginCriterion::Hamiltonian)
    } else if lyapunov.v2 > 0.0 {
        (OriginStability::Unstable, OriginCriterion::SecondLyapunovConstant)
    } else {
        (OriginStability::Stable, OriginCriterion::SecondLyapunovConstant)
    };
    Ok(OriginReport {
        stability,
        decided_by,
        monodromic: true,
        lyapunov,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinityStability {
    Attractor,
    Repeller,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinityReport {
    pub no_equilibria_at_infinity: bool,
    pub stability: InfinityStability,
    /// `I = int_0^{2 pi} -2 (s1 - cos 2n theta) / (s2 + sin 2n theta) dtheta
    ///    = -sgn(s2) 4 pi s1 / sqrt(s2^2 - 1)`, when defined.
    pub integral_value: Option<f64>,
    /// Sense of rotation near infinity, `sgn(s2)`.
    pub rotation: Option<f64>,
}

/// Near infinity `rho = 1/r` obeys `d ln(rho)/dtheta = -2 (s1 - cos) / c`, so one
/// revolution multiplies `rho` by `exp(sgn(s2) I)`: infinity repels when
/// `sgn(s2) I > 0`, which is `s1 < 0`.
pub fn classify_infinity(params: &Params) -> InfinityReport {
    let no_equilibria_at_infinity = params.s2.abs() > 1.0;
    if !no_equilibria_at_infinity {
        return InfinityReport {
            no_equilibria_at_infinity,
            stability: InfinityStability::Undetermined,
            integral_value: None,
            rotation: None,
        };
    }
    let s2 = params.s2;
    let value = -s2.signum() * 4.0 * PI * params.s1 / (s2 * s2 - 1.0).sqrt();
    let growth = s2.signum() * value;
    InfinityReport {
        no_equilibria_at_infinity,
        stability: if params.s1 == 0.0 {
            InfinityStability::Undetermined
        } else if growth > 0.0 {
            InfinityStability::Repeller
        } else {
            InfinityStability::Attractor
        },
        integral_value: Some(value),
        rotation: Some(s2.signum()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniquenessCondition {
    /// `A` does not change sign (`Q(p1, p2) <= 0`).
    #[serde(rename = "i")]
    I,
    /// `B` does not change sign.
    #[serde(rename = "ii")]
    Ii,
}

/// At most three periodic solutions of the Abel equation (with multiplicity);
/// two are `x = 0` and `x = 1/c`, so at most one limit cycle surrounds the
/// origin and it is hyperbolic when it exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    pub conditions: Vec<UniquenessCondition>,
    pub sign_a: SignCertificate,
    pub sign_b: SignCertificate,
}

pub fn uniqueness_certificate(params: &Params) -> Result<Option<UniquenessCertificate>> {
    uniqueness_certificate_with(params, &Tolerances::default())
}

pub fn uniqueness_certificate_with(params: &Params, tol: &Tolerances) -> Result<Option<UniquenessCertificate>> {
    let sign_a = sign_certificate_a_with(params, tol)?;
    let sign_b = sign_certificate_b_with(params, tol)?;
    let mut conditions = Vec::new();
    if !sign_a.changes_sign {
        conditions.push(UniquenessCondition::I);
    }
    if !sign_b.changes_sign {
        conditions.push(UniquenessCondition::Ii);
    }
    if conditions.is_empty() {
        return Ok(None);
    }
    Ok(Some(UniquenessCertificate {
        conditions,
        sign_a,
        sign_b,
    }))
}
