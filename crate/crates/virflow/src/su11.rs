//! Exact `su(1,1)` subgroup theory inside the diffeomorphism group: the
//! Lorentzian exponential functions, closed-form exponentials to `SU(1,1)`
//! and its universal cover, the cover group law, and the embeddings of the
//! cover into the (cover of the) diffeomorphism group whose differentials
//! hit the harmonic subalgebras `span{p_0, p_n, k_n}`.

use crate::error::{Error, Result};
use crate::fourier::FourierField;
use crate::group_flow::DiffeoGrid;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Element `a1 X + a2 Y + a3 Z` of `su(1,1)` in the standard basis
/// `X = (1/2)[[0, i], [-i, 0]]`, `Y = (1/2)[[0, -1], [-1, 0]]`,
/// `Z = (1/2)[[-i, 0], [0, i]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Su11Vector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Su11Vector {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    /// Lorentzian norm `a1^2 + a2^2 - a3^2`.
    pub fn lorentz_norm(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2 - self.a3 * self.a3
    }

    /// The corresponding 2x2 matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let i = Complex64::new(0.0, 1.0);
        let x = [
            [Complex64::new(0.0, 0.0), 0.5 * i],
            [-0.5 * i, Complex64::new(0.0, 0.0)],
        ];
        let y = [
            [Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0)],
            [Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0)],
        ];
        let z = [
            [-0.5 * i, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), 0.5 * i],
        ];
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.a1 * x[r][c] + self.a2 * y[r][c] + self.a3 * z[r][c];
            }
        }
        out
    }
}

/// The three Lorentzian exponential functions evaluated at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzFunctions {
    pub c: f64,
    pub s: f64,
    pub t: f64,
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `scrC`, `scrS`, `scrT` of the closed-form exponentials. `scrT` carries
/// the branch count `n_a(t) = sgn(a3) ceil(t sqrt(-norm)/pi - 1/2)` in the
/// timelike case, which keeps it continuous in `t`; the removable points
/// `t sqrt(-norm) = pi/2 (mod pi)` use the limit value `sgn(a3) t sqrt(-norm)`.
pub fn lorentz_functions(a: Su11Vector, t: f64) -> LorentzFunctions {
    let norm = a.lorentz_norm();
    if norm > 0.0 {
        let r = norm.sqrt();
        LorentzFunctions {
            c: (r * t).cosh(),
            s: (r * t).sinh() / r,
            t: (a.a3 * (r * t).tanh() / r).atan(),
        }
    } else if norm == 0.0 {
        LorentzFunctions {
            c: 1.0,
            s: t,
            t: (a.a3 * t).atan(),
        }
    } else {
        let r = (-norm).sqrt();
        let c = (r * t).cos();
        let s = (r * t).sin() / r;
        let tt = if c.abs() < 1e-9 {
            // At (or within round-off of) the branch point the continuous
            // continuation is sgn(a3) * r * t.
            sgn(a.a3) * r * t
        } else {
            let n_a = sgn(a.a3) * ((r * t / PI) - 0.5).ceil();
            (a.a3 * (r * t).tan() / r).atan() + PI * n_a
        };
        LorentzFunctions { c, s, t: tt }
    }
}

/// Element of `SU(1,1)`: `[[z1, z2], [conj z2, conj z1]]` with
/// `|z1|^2 - |z2|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Matrix {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Su11Matrix {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let det = z1.norm_sqr() - z2.norm_sqr();
        if (det - 1.0).abs() > 1e-12 * (1.0 + z1.norm_sqr()) {
            return Err(Error::Input(format!(
                "not in SU(1,1): |z1|^2 - |z2|^2 = {det}"
            )));
        }
        Ok(Self { z1, z2 })
    }

    pub fn identity() -> Self {
        Self {
            z1: Complex64::new(1.0, 0.0),
            z2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            z1: self.z1 * other.z1 + self.z2 * other.z2.conj(),
            z2: self.z1 * other.z2 + self.z2 * other.z1.conj(),
        }
    }

    /// Entrywise distance to another element.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.z1 - other.z1).norm().max((self.z2 - other.z2).norm())
    }

    pub fn det_defect(&self) -> f64 {
        (self.z1.norm_sqr() - self.z2.norm_sqr() - 1.0).abs()
    }
}

/// Closed-form exponential `exp(t (a1 X + a2 Y + a3 Z))` in `SU(1,1)`.
pub fn exp_matrix(a: Su11Vector, t: f64) -> Su11Matrix {
    let lf = lorentz_functions(a, t / 2.0);
    let i = Complex64::new(0.0, 1.0);
    Su11Matrix {
        z1: Complex64::new(lf.c, 0.0) - i * a.a3 * lf.s,
        z2: i * Complex64::new(a.a1, a.a2) * lf.s,
    }
}

/// Element `(s, w)` of the universal cover of `SU(1,1)` in the global chart
/// `R x C`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CoverElement {
    pub s: f64,
    #[serde(with = "complex_serde")]
    pub w: Complex64,
}

mod complex_serde {
    use num_complex::Complex64;
    use serde::ser::SerializeTuple;

    pub fn serialize<S: serde::Serializer>(
        w: &Complex64,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&w.re)?;
        tup.serialize_element(&w.im)?;
        tup.end()
    }
}

impl CoverElement {
    pub fn identity() -> Self {
        Self {
            s: 0.0,
            w: Complex64::new(0.0, 0.0),
        }
    }

    pub fn new(s: f64, w: Complex64) -> Self {
        Self { s, w }
    }
}

/// Group law on the universal cover.
pub fn cover_mul(g1: &CoverElement, g2: &CoverElement) -> CoverElement {
    let q1 = (g1.w.norm_sqr() + 1.0).sqrt();
    let q2 = (g2.w.norm_sqr() + 1.0).sqrt();
    let phase = Complex64::from_polar(1.0, -(g1.s + g2.s));
    let arg_inner = Complex64::new(q1 * q2, 0.0) + g1.w.conj() * g2.w * phase;
    let s3 = g1.s + g2.s + arg_inner.arg();
    let w3 = g2.w * Complex64::from_polar(1.0, -g1.s) * q1
        + g1.w * Complex64::from_polar(1.0, g2.s) * q2;
    CoverElement { s: s3, w: w3 }
}

/// Inverse in the cover: `(s, w)^{-1} = (-s, -w)`.
pub fn cover_inverse(g: &CoverElement) -> CoverElement {
    CoverElement { s: -g.s, w: -g.w }
}

/// Covering homomorphism onto `SU(1,1)`.
pub fn cover_project(g: &CoverElement) -> Su11Matrix {
    let q = (g.w.norm_sqr() + 1.0).sqrt();
    Su11Matrix {
        z1: Complex64::from_polar(q, -g.s),
        z2: g.w,
    }
}

/// Closed-form exponential `exp(t (a1 X + a2 Y + a3 Z))` in the cover:
/// `(scrT_a(t/2), i (a1 + i a2) scrS_a(t/2))`.
pub fn exp_cover(a: Su11Vector, t: f64) -> CoverElement {
    let lf = lorentz_functions(a, t / 2.0);
    CoverElement {
        s: lf.t,
        w: Complex64::new(0.0, 1.0) * Complex64::new(a.a1, a.a2) * lf.s,
    }
}

/// Cover value of the embedded diffeomorphism
/// `f_n(s, w)(theta) = theta + (2/n)(s + Arg(sqrt(|w|^2+1) + i conj(w) e^{-i(n theta + s)}))`.
///
/// Either sign of the `i conj(w)` term yields an injective homomorphism
/// (the two differ by the automorphism `w -> -w` of the cover); this one is
/// the variant whose differentials at the identity are `2/n`,
/// `(2/n) cos(n theta)` and `-(2/n) sin(n theta)` in the `(s, Re w, Im w)`
/// directions, matching the subgroup-exponential correspondence used by
/// [`exp_diff_hn`] (pinned by the characteristics-flow oracle).
pub fn embed_fn_value(n: usize, g: &CoverElement, theta: f64) -> f64 {
    let q = (g.w.norm_sqr() + 1.0).sqrt();
    let inner = Complex64::new(q, 0.0)
        + Complex64::new(0.0, 1.0)
            * g.w.conj()
            * Complex64::from_polar(1.0, -(n as f64 * theta + g.s));
    theta + (2.0 / n as f64) * (g.s + inner.arg())
}

/// Sample the embedding `f_n` on a uniform grid.
pub fn embed_fn(n: usize, g: &CoverElement, grid: usize) -> Result<DiffeoGrid> {
    if n == 0 {
        return Err(Error::Parameter("embedding index must be >= 1".into()));
    }
    DiffeoGrid::from_fn(grid, |theta| embed_fn_value(n, g, theta))
}

/// Time-`t` flow of the vector field `a1 k_n + a2 p_n + a3 p_0`, computed
/// through the subgroup exponential:
/// `exp(t(a1 k_n + a2 p_n + a3 p_0)) = f_n(exp_cover(n t (-a1 X - a2 Y + a3 Z)))`.
pub fn exp_diff_hn(n: usize, a1: f64, a2: f64, a3: f64, t: f64, grid: usize) -> Result<DiffeoGrid> {
    let g = exp_cover(Su11Vector::new(-a1, -a2, a3), n as f64 * t);
    embed_fn(n, &g, grid)
}

/// The generator field `a1 k_n + a2 p_n + a3 p_0` as a spectral field.
pub fn hn_field(n: usize, a1: f64, a2: f64, a3: f64, band: usize) -> FourierField {
    let mut f = FourierField::harmonic_sin(band, n).scale(a1);
    f = f
        .add(&FourierField::harmonic_cos(band, n).scale(a2))
        .expect("bands match");
    f.add(&FourierField::constant(band, a3))
        .expect("bands match")
}
