//! Independent reference computations used by the verification suites.
//!
//! Nothing here shares a code path with what it checks: integrals are
//! plain grid quadratures of pointwise samples,
//! matrix exponentials are summed as power series, and flows are integrated
//! on characteristics.

use crate::fourier::FourierField;
use crate::su11::{Su11Matrix, Su11Vector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Trapezoid value of `(1/2pi) int f dtheta` on `m` uniform nodes.
pub fn mean_quadrature(f: impl Fn(f64) -> f64, m: usize) -> f64 {
    (0..m)
        .map(|j| f(2.0 * PI * j as f64 / m as f64))
        .sum::<f64>()
        / m as f64
}

/// Principal-value quadrature of the conjugate-function kernel
/// `(1/2pi) p.v. int x(t) / tan((t - theta)/2) dt`, evaluated on a
/// midpoint-offset grid symmetric about the singularity (the odd part of
/// the kernel cancels pairwise, so the rule converges spectrally).
pub fn hilbert_kernel_quadrature(x: impl Fn(f64) -> f64, theta: f64, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    let mut acc = 0.0;
    for j in 0..m {
        let t = theta + (j as f64 + 0.5) * h;
        acc += x(t) / ((t - theta) / 2.0).tan();
    }
    acc * h / (2.0 * PI)
}

/// Power-series matrix exponential of `t (a1 X + a2 Y + a3 Z)` with
/// scaling and squaring; independent of the closed-form exponentials.
pub fn series_exp_su11(a: Su11Vector, t: f64) -> Su11Matrix {
    let base = a.matrix();
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = base[r][c] * t;
        }
    }
    // Scale down until the norm is small, exponentiate by series, square back.
    let norm: f64 = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    for row in &mut m {
        for z in row.iter_mut() {
            *z *= scale;
        }
    }
    let mul = |a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]| {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    };
    let mut result = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let mut term = result;
    for k in 1..=24 {
        term = mul(&term, &m);
        for r in 0..2 {
            for c in 0..2 {
                term[r][c] /= k as f64;
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    Su11Matrix {
        z1: result[0][0],
        z2: result[0][1],
    }
}

/// RK4 flow of the characteristics `theta' = a1 sin(n theta) + a2 cos(n theta) + a3`
/// from `theta0` over time `t`.
pub fn characteristics_flow(
    n: usize,
    a1: f64,
    a2: f64,
    a3: f64,
    t: f64,
    theta0: f64,
    steps: usize,
) -> f64 {
    let f = |th: f64| a1 * (n as f64 * th).sin() + a2 * (n as f64 * th).cos() + a3;
    let dt = t / steps as f64;
    let mut th = theta0;
    for _ in 0..steps {
        let k1 = f(th);
        let k2 = f(th + 0.5 * dt * k1);
        let k3 = f(th + 0.5 * dt * k2);
        let k4 = f(th + dt * k3);
        th += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    th
}

/// Exact solution of the transport form `u_t = 3 u u_theta` by the method
/// of characteristics: `u(theta, t) = u0(theta0)` where
/// `theta = theta0 - 3 u0(theta0) t`, solved for `theta0` by safeguarded
/// Newton iteration. Valid before wave breaking
/// (`t < 1 / (3 max u0')`).
pub fn burgers_characteristics(
    u0: &impl Fn(f64) -> f64,
    du0: &impl Fn(f64) -> f64,
    theta: f64,
    t: f64,
) -> f64 {
    let g = |th0: f64| th0 - 3.0 * u0(th0) * t - theta;
    let dg = |th0: f64| 1.0 - 3.0 * du0(th0) * t;
    let mut th0 = theta;
    for _ in 0..100 {
        let val = g(th0);
        if val.abs() < 1e-14 {
            break;
        }
        th0 -= val / dg(th0);
    }
    u0(th0)
}

/// Closed-form Heisenberg normal geodesic from the origin with initial
/// horizontal momenta `(p1, p2)` and vertical momentum `pz`:
/// `x + i y = w0 (e^{i pz t} - 1) / (i pz)`,
/// `z = |w0|^2 (t - sin(pz t)/pz) / (2 pz)`.
pub fn heisenberg_endpoint(p1: f64, p2: f64, pz: f64, t: f64) -> (f64, f64, f64) {
    let w0 = Complex64::new(p1, p2);
    if pz.abs() < 1e-14 {
        let xy = w0 * t;
        return (xy.re, xy.im, 0.0);
    }
    let i = Complex64::new(0.0, 1.0);
    let xy = w0 * ((i * pz * t).exp() - 1.0) / (i * pz);
    let z = w0.norm_sqr() * (t - (pz * t).sin() / pz) / (2.0 * pz);
    (xy.re, xy.im, z)
}

/// `(1/2pi) int x dy` for band-limited fields by quadrature (`dy = y' dtheta`).
pub fn stieltjes_pairing(x: &FourierField, y: &FourierField, m: usize) -> f64 {
    let xs = x.sample(m);
    let dys = y.derivative().sample(m);
    xs.iter().zip(&dys).map(|(a, b)| a * b).sum::<f64>() / m as f64
}
