//! 2x2 real linear algebra.

use num_complex::Complex64;

pub type Mat2 = [[f64; 2]; 2];

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Eigenvalues ordered by increasing modulus.
///
/// Real pairs are computed as `big = tr/2 + sgn(tr) sqrt(disc)` and
/// `small = det / big`, so a near-zero eigenvalue keeps full relative accuracy.
pub fn eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let half = 0.5 * trace(m);
    let d = det(m);
    // (a - d)^2/4 + bc avoids cancellation in half^2 - det
    let disc = 0.25 * (m[0][0] - m[1][1]).powi(2) + m[0][1] * m[1][0];
    if disc >= 0.0 {
        let root = disc.sqrt();
        let big = if half >= 0.0 { half + root } else { half - root };
        if big == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let small = d / big;
        let (a, b) = if small.abs() <= big.abs() { (small, big) } else { (big, small) };
        [Complex64::new(a, 0.0), Complex64::new(b, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [Complex64::new(half, -im), Complex64::new(half, im)]
    }
}

/// Unit eigenvector for a real eigenvalue `lambda`.
pub fn eigenvector(m: &Mat2, lambda: f64) -> [f64; 2] {
    let a = m[0][0] - lambda;
    let d = m[1][1] - lambda;
    let (b, c) = (m[0][1], m[1][0]);
    // pick the better-conditioned row of (M - lambda I)
    let v = if a.abs() + b.abs() >= c.abs() + d.abs() { [-b, a] } else { [-d, c] };
    let norm = v[0].hypot(v[1]);
    if norm == 0.0 {
        [1.0, 0.0]
    } else {
        [v[0] / norm, v[1] / norm]
    }
}

/// Solves `m x = rhs`; `None` when `m` is numerically singular.
pub fn solve(m: &Mat2, rhs: [f64; 2]) -> Option<[f64; 2]> {
    let d = det(m);
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if d == 0.0 || d.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / d,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / d,
    ])
}
