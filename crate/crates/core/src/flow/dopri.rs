//! Dormand-Prince 5(4) with FSAL and fourth-order dense output.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct Dense<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> Dense<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let s1 = 1.0 - s;
        let [rc1, rc2, rc3, rc4, rc5] = &self.rc;
        std::array::from_fn(|i| rc1[i] + s * (rc2[i] + s1 * (rc3[i] + s * (rc4[i] + s1 * rc5[i]))))
    }

    pub fn start(&self) -> [f64; N] {
        self.rc[0]
    }

    pub fn end(&self) -> [f64; N] {
        std::array::from_fn(|i| self.rc[0][i] + self.rc[1][i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepError {
    /// The step size fell below the floor.
    Underflow { t: f64 },
}

/// Integrator state. `f(t, y)` is the right-hand side; `scale(y0, y1)` returns
/// the per-component error denominators for a candidate step.
#[derive(Debug, Clone)]
pub struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub h: f64,
    pub h_max: f64,
    pub accepted: usize,
    pub rejected: usize,
    k1: [f64; N],
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn rms<const N: usize>(v: &[f64; N], sc: &[f64; N]) -> f64 {
    (v.iter().zip(sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

impl<const N: usize> Dopri5<N> {
    /// Starts at `(t0, y0)`. A non-positive `h0` picks the first step automatically.
    pub fn new<F, S>(f: &F, scale: &S, t0: f64, y0: [f64; N], h0: f64, h_max: f64) -> Self
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        S: Fn(&[f64; N], &[f64; N]) -> [f64; N],
    {
        let k1 = f(t0, &y0);
        let h = if h0 > 0.0 {
            h0.min(h_max)
        } else {
            initial_step(f, scale, t0, &y0, &k1).min(h_max)
        };
        Dopri5 {
            t: t0,
            y: y0,
            h,
            h_max,
            accepted: 0,
            rejected: 0,
            k1,
        }
    }

    pub fn derivative(&self) -> [f64; N] {
        self.k1
    }

    /// Takes one accepted step, never passing `t_stop`.
    pub fn step<F, S>(&mut self, f: &F, scale: &S, t_stop: f64) -> Result<Dense<N>, StepError>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        S: Fn(&[f64; N], &[f64; N]) -> [f64; N],
    {
        let h_min = 1e-14 * self.t.abs().max(1.0);
        loop {
            let remaining = t_stop - self.t;
            let mut h = self.h.min(self.h_max);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h < h_min && !last {
                return Err(StepError::Underflow { t: self.t });
            }
            let (t, y, k1) = (self.t, &self.y, &self.k1);
            let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
            let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(
                t + h,
                &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y1 = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y1);
            let err: [f64; N] = std::array::from_fn(|i| {
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            });
            let finite = y1.iter().chain(k7.iter()).all(|v| v.is_finite());
            let e = if finite { rms(&err, &scale(y, &y1)) } else { f64::INFINITY };
            if e.is_nan() || e > 1.0 {
                self.rejected += 1;
                let fac = if e.is_finite() { (SAFETY * e.powf(-0.2)).max(FAC_MIN) } else { FAC_MIN };
                self.h = h * fac;
                if self.h < h_min {
                    return Err(StepError::Underflow { t: self.t });
                }
                continue;
            }
            let rc2: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let rc3: [f64; N] = std::array::from_fn(|i| h * k1[i] - rc2[i]);
            let rc4: [f64; N] = std::array::from_fn(|i| rc2[i] - h * k7[i] - rc3[i]);
            let rc5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            let dense = Dense {
                t0: t,
                t1: if last { t_stop } else { t + h },
                rc: [*y, rc2, rc3, rc4, rc5],
            };
            let fac = if e == 0.0 { FAC_MAX } else { (SAFETY * e.powf(-0.2)).clamp(FAC_MIN, FAC_MAX) };
            self.t = dense.t1;
            self.y = y1;
            self.k1 = k7;
            if !last {
                self.h = h * fac;
            }
            self.accepted += 1;
            return Ok(dense);
        }
    }
}

fn initial_step<const N: usize, F, S>(f: &F, scale: &S, t0: f64, y0: &[f64; N], f0: &[f64; N]) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: Fn(&[f64; N], &[f64; N]) -> [f64; N],
{
    let sc = scale(y0, y0);
    let d0 = rms(y0, &sc);
    let d1 = rms(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = rms(&diff, &sc) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}
