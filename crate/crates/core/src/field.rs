//! The vector field in Cartesian, polar and rescaled-angle charts.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest symmetry index accepted by [`Params::new`]. Higher powers overflow
/// double precision for moderate `|z|`.
pub const DEFAULT_MAX_N: u32 = 64;

/// Parameters `p = p1 + i p2`, `s = s1 + i s2` and the symmetry index `n`
/// (the symmetry group has order `2n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub(crate) p1: f64,
    pub(crate) p2: f64,
    pub(crate) s1: f64,
    pub(crate) s2: f64,
    pub(crate) n: u32,
}

/// Conditions under which results are computed outside the hypotheses of
/// the classification theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// The theorems are stated for `n > 3`.
    SmallN,
    /// `|s2| <= 1`: equilibria at infinity exist.
    S2NotAboveOne,
    /// `s1 = 0`.
    S1Zero,
    /// `p = 0`.
    PZero,
}

impl Warning {
    pub fn message(&self) -> &'static str {
        match self {
            Warning::SmallN => "n <= 3: theorems are stated for n > 3",
            Warning::S2NotAboveOne => "hypothesis |s2|>1 violated",
            Warning::S1Zero => "s1 = 0: outside theorem hypotheses",
            Warning::PZero => "p = 0: outside theorem hypotheses",
        }
    }
}

impl Params {
    pub fn new(p1: f64, p2: f64, s1: f64, s2: f64, n: u32) -> Result<Self> {
        Self::with_max_n(p1, p2, s1, s2, n, DEFAULT_MAX_N)
    }

    pub fn with_max_n(p1: f64, p2: f64, s1: f64, s2: f64, n: u32, max_n: u32) -> Result<Self> {
        if ![p1, p2, s1, s2].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        if n > max_n {
            return Err(Error::InvalidParams(format!("n = {n} exceeds the cap {max_n}")));
        }
        Ok(Params { p1, p2, s1, s2, n })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
    pub fn s1(&self) -> f64 {
        self.s1
    }
    pub fn s2(&self) -> f64 {
        self.s2
    }
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> Complex64 {
        Complex64::new(self.p1, self.p2)
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.s1, self.s2)
    }

    /// Same `s` and `n` with a different `p1`.
    pub fn with_p1(&self, p1: f64) -> Self {
        Params { p1, ..*self }
    }

    /// Same `s` and `n` with a different `p`.
    pub fn with_p(&self, p1: f64, p2: f64) -> Self {
        Params { p1, p2, ..*self }
    }

    pub fn with_n(&self, n: u32) -> Result<Self> {
        Params::new(self.p1, self.p2, self.s1, self.s2, n)
    }

    /// Width `pi/n` of the fundamental sector.
    pub fn sector(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn require_s2(&self) -> Result<()> {
        if self.s2.abs() > 1.0 {
            Ok(())
        } else {
            Err(Error::RequiresS2 { s2: self.s2 })
        }
    }

    pub fn require_p2(&self) -> Result<()> {
        if self.p2 != 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroP2)
        }
    }

    pub fn require_p(&self) -> Result<()> {
        if self.p1 != 0.0 || self.p2 != 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroP)
        }
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        if self.n <= 3 {
            out.push(Warning::SmallN);
        }
        if self.s2.abs() <= 1.0 {
            out.push(Warning::S2NotAboveOne);
        }
        if self.s1 == 0.0 {
            out.push(Warning::S1Zero);
        }
        if self.p1 == 0.0 && self.p2 == 0.0 {
            out.push(Warning::PZero);
        }
        out
    }

    /// `c(theta) = s2 + sin(2n theta)`; `theta' = p2 + r c(theta)`.
    pub fn c(&self, theta: f64) -> f64 {
        self.s2 + (2.0 * self.n as f64 * theta).sin()
    }
}

/// A point `z = x + i y` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64) -> Self {
        CartesianPoint { x, y }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        CartesianPoint { x: z.re, y: z.im }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn to_polar(self) -> PolarState {
        PolarState {
            r: self.x * self.x + self.y * self.y,
            theta: self.y.atan2(self.x).rem_euclid(TAU),
        }
    }
}

/// A point of the polar chart; `r = |z|^2` is the squared modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub r: f64,
    pub theta: f64,
}

impl PolarState {
    /// Builds a state with `theta` reduced into `[0, 2pi)`.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && theta.is_finite()) || r < 0.0 {
            return Err(Error::InvalidParams(format!("invalid polar state ({r}, {theta})")));
        }
        Ok(PolarState {
            r,
            theta: theta.rem_euclid(TAU),
        })
    }

    pub fn origin() -> Self {
        PolarState { r: 0.0, theta: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.r.sqrt()
    }

    pub fn to_cartesian(self) -> CartesianPoint {
        let m = self.r.sqrt();
        CartesianPoint {
            x: m * self.theta.cos(),
            y: m * self.theta.sin(),
        }
    }

    /// Rotation by `k pi / n`.
    pub fn rotated(self, k: u32, n: u32) -> Self {
        PolarState {
            r: self.r,
            theta: (self.theta + k as f64 * PI / n as f64).rem_euclid(TAU),
        }
    }
}

fn cpow(z: Complex64, k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..k {
        acc *= z;
    }
    acc
}

/// `f(z) = p z^(n-1) zbar^(n-2) + s z^n zbar^(n-1) - zbar^(2n-1)`.
pub fn eval_field(params: &Params, z: CartesianPoint) -> CartesianPoint {
    CartesianPoint::from_complex(field_complex(params, z.to_complex()))
}

pub(crate) fn field_complex(params: &Params, z: Complex64) -> Complex64 {
    let n = params.n as usize;
    let zb = z.conj();
    let low = cpow(z, n - 1) * cpow(zb, n - 2);
    let mid = low * z * zb;
    let top = cpow(zb, 2 * n - 1);
    params.p() * low + params.s() * mid - top
}

/// Time-rescaled polar field `(r', theta')`.
pub fn eval_polar(params: &Params, state: PolarState) -> (f64, f64) {
    polar_rates(params, state.r, state.theta)
}

#[inline]
pub(crate) fn polar_rates(params: &Params, r: f64, theta: f64) -> (f64, f64) {
    let (sn, cs) = (2.0 * params.n as f64 * theta).sin_cos();
    (
        2.0 * r * (params.p1 + r * params.s1 - r * cs),
        params.p2 + r * (params.s2 + sn),
    )
}

/// The polar field in the variable `phi = n theta`: returns `(r', phi')`.
pub fn eval_phi(params: &Params, r: f64, phi: f64) -> (f64, f64) {
    let (sn, cs) = (2.0 * phi).sin_cos();
    (
        2.0 * r * (params.p1 + r * params.s1 - r * cs),
        (params.p2 + r * (params.s2 + sn)) / params.n as f64,
    )
}

pub fn is_hamiltonian(params: &Params) -> bool {
    params.p1 == 0.0 && params.s1 == 0.0
}

/// Trace of the Cartesian Jacobian of [`eval_field`].
pub fn divergence(params: &Params, z: CartesianPoint) -> f64 {
    let n = params.n as i32;
    let m2 = z.x * z.x + z.y * z.y;
    2.0 * (n - 1) as f64 * params.p1 * m2.powi(n - 2) + 2.0 * n as f64 * params.s1 * m2.powi(n - 1)
}

/// `|f(g z) - g f(z)|` for the rotation `g = exp(k pi i / n)`.
pub fn equivariance_residual(params: &Params, z: CartesianPoint, k: u32) -> f64 {
    let g = Complex64::from_polar(1.0, k as f64 * PI / params.n as f64);
    let z = z.to_complex();
    (field_complex(params, g * z) - g * field_complex(params, z)).norm()
}
