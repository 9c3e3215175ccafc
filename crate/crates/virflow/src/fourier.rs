//! Band-limited spectral representation of vector fields on the circle and
//! the algebraic structure living on them: brackets, Hilbert transform,
//! Sobolev-type operators, cocycles, inner products and metric adjoints.
//!
//! A field `x` is a smooth real function on `S^1` identified with the vector
//! field `x d/dtheta`. It is stored as the Fourier coefficients `c_k` for
//! `k = 0..=N`; the negative half is implied by hermitian symmetry
//! `c_{-k} = conj(c_k)`, so real-valuedness is structural. Products are
//! evaluated pseudo-spectrally on a `4N`-point grid and truncated back to
//! band `N`, which leaves all quadratic interactions alias-free.

use crate::error::{Error, Result};
use crate::fft;
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real-valued band-limited function on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    /// Coefficients for modes `0..=band`; `c_{-k} = conj(c_k)`.
    coeffs: Vec<Complex64>,
}

impl FourierField {
    pub fn zeros(band: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); band + 1],
        }
    }

    /// Constant field `v * d/dtheta`.
    pub fn constant(band: usize, v: f64) -> Self {
        let mut f = Self::zeros(band);
        f.coeffs[0] = Complex64::new(v, 0.0);
        f
    }

    /// `p_n = cos(n theta) d/dtheta` (`p_0 = d/dtheta`).
    pub fn harmonic_cos(band: usize, n: usize) -> Self {
        let mut f = Self::zeros(band);
        if n == 0 {
            f.coeffs[0] = Complex64::new(1.0, 0.0);
        } else {
            assert!(n <= band, "harmonic above band limit");
            f.coeffs[n] = Complex64::new(0.5, 0.0);
        }
        f
    }

    /// `k_n = sin(n theta) d/dtheta`.
    pub fn harmonic_sin(band: usize, n: usize) -> Self {
        let mut f = Self::zeros(band);
        assert!(n >= 1 && n <= band, "harmonic above band limit");
        f.coeffs[n] = Complex64::new(0.0, -0.5);
        f
    }

    /// Build from the non-negative half-spectrum. The `k = 0` entry must be
    /// (numerically) real.
    pub fn from_half_spectrum(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("empty coefficient vector".into()));
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if coeffs[0].im.abs() > 1e-9 * (1.0 + scale) {
            return Err(Error::Input(format!(
                "constant mode must be real, got imaginary part {}",
                coeffs[0].im
            )));
        }
        coeffs[0].im = 0.0;
        Ok(Self { coeffs })
    }

    /// Recover band-limited coefficients from samples on a uniform grid.
    /// Requires `band < values.len()/2` so every retained mode is unambiguous.
    pub fn from_samples(values: &[f64], band: usize) -> Result<Self> {
        let m = values.len();
        if 2 * band + 2 > m {
            return Err(Error::Dimension {
                expected: 2 * band + 2,
                got: m,
            });
        }
        let spectrum = fft::forward_real(values);
        let mut coeffs = spectrum[0..=band].to_vec();
        coeffs[0].im = 0.0;
        Ok(Self { coeffs })
    }

    pub fn band(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `e^{i k theta}` for any signed `k` (0 outside the band).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let a = k.unsigned_abs() as usize;
        if a >= self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        if k >= 0 {
            self.coeffs[a]
        } else {
            self.coeffs[a].conj()
        }
    }

    pub fn set_coeff(&mut self, k: usize, value: Complex64) {
        self.coeffs[k] = value;
        if k == 0 {
            self.coeffs[0].im = 0.0;
        }
    }

    pub fn half_spectrum(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mean value over the circle, `(1/2pi) int x dtheta = c_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn project_mean_zero(&mut self) {
        self.coeffs[0] = Complex64::new(0.0, 0.0);
    }

    /// Pad or truncate to a new band limit.
    pub fn with_band(&self, band: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); band + 1];
        let keep = band.min(self.band());
        coeffs[..=keep].copy_from_slice(&self.coeffs[..=keep]);
        Self { coeffs }
    }

    /// `d/dtheta`, multiplier `i k`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * I * k as f64)
            .collect();
        Self { coeffs }
    }

    /// Hilbert transform `J`: multiplier `i sgn(k)`, the constant mode is
    /// annihilated. The sign convention is pinned by a principal-value
    /// quadrature of the kernel `1/tan((t - theta)/2)` (see the oracle
    /// tests); it sends `cos(n theta)` to `-sin(n theta)`.
    pub fn hilbert(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * I
                }
            })
            .collect();
        Self { coeffs }
    }

    /// `L_{a,b} x = b x'' - a x`, multiplier `-(a + b k^2)`.
    pub fn apply_l_coeffs(&self, alpha: f64, beta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * -(alpha + beta * (k * k) as f64))
            .collect();
        Self { coeffs }
    }

    pub fn apply_l(&self, params: &MetricParams) -> Self {
        self.apply_l_coeffs(params.alpha(), params.beta())
    }

    /// Rotation pullback `x(theta - s)`: phases `c_k e^{-i k s}`.
    pub fn shift(&self, s: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, -(k as f64) * s))
            .collect();
        Self { coeffs }
    }

    pub fn evaluate(&self, theta: f64) -> f64 {
        let rot = Complex64::from_polar(1.0, theta);
        let mut z = Complex64::new(1.0, 0.0);
        let mut acc = self.coeffs[0].re;
        for c in &self.coeffs[1..] {
            z *= rot;
            acc += 2.0 * (c * z).re;
        }
        acc
    }

    /// Values on the uniform grid `theta_j = 2 pi j / m`. Exact (up to
    /// round-off) whenever `m > 2 * band`.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        assert!(m > 2 * self.band(), "sample grid too coarse for the band");
        let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
        spectrum[0] = self.coeffs[0];
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            spectrum[k] = *c;
            spectrum[m - k] = c.conj();
        }
        fft::inverse_to_real(&mut spectrum)
    }

    fn product_grid(band: usize) -> usize {
        (4 * band).max(16)
    }

    /// Dealiased pointwise product, truncated back to the shared band limit.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let band = self.check_band(other)?;
        let m = Self::product_grid(band);
        let a = self.sample(m);
        let b = other.sample(m);
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Self::from_samples(&prod, band)
    }

    pub fn check_band(&self, other: &Self) -> Result<usize> {
        if self.band() != other.band() {
            return Err(Error::Dimension {
                expected: self.band(),
                got: other.band(),
            });
        }
        Ok(self.band())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_band(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_band(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Supremum norm, evaluated on the dealiasing grid.
    pub fn sup_norm(&self) -> f64 {
        self.sample(Self::product_grid(self.band()))
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Parse a field literal: either a dense real list `a0, a1, b1, a2, b2, ...`
    /// meaning `a0 + sum(a_n cos + b_n sin)`, or a list of `(k, re, im)`
    /// triples for the positive-mode coefficients.
    pub fn parse_literal(text: &str, band: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::zeros(band));
        }
        let mut field = Self::zeros(band);
        if text.contains('(') {
            for part in text.split(';') {
                let part = part.trim().trim_start_matches('(').trim_end_matches(')');
                if part.is_empty() {
                    continue;
                }
                let nums: Vec<&str> = part.split(',').map(str::trim).collect();
                if nums.len() != 3 {
                    return Err(Error::Input(format!("bad coefficient triple '{part}'")));
                }
                let k: usize = nums[0]
                    .parse()
                    .map_err(|_| Error::Input(format!("bad mode index '{}'", nums[0])))?;
                let re: f64 = nums[1]
                    .parse()
                    .map_err(|_| Error::Input(format!("bad real part '{}'", nums[1])))?;
                let im: f64 = nums[2]
                    .parse()
                    .map_err(|_| Error::Input(format!("bad imaginary part '{}'", nums[2])))?;
                if k > band {
                    return Err(Error::Input(format!("mode {k} above band limit {band}")));
                }
                field.set_coeff(k, Complex64::new(re, im));
            }
            return Ok(field);
        }
        let values: Vec<f64> = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Input(format!("bad number '{}'", s.trim())))
            })
            .collect::<Result<_>>()?;
        field.set_coeff(0, Complex64::new(values[0], 0.0));
        let mut n = 1usize;
        let mut idx = 1usize;
        while idx < values.len() {
            if n > band {
                return Err(Error::Input(format!("mode {n} above band limit {band}")));
            }
            let a = values[idx];
            let b = if idx + 1 < values.len() {
                values[idx + 1]
            } else {
                0.0
            };
            // a cos(n t) + b sin(n t)  ->  c_n = (a - i b)/2
            field.set_coeff(n, Complex64::new(a / 2.0, -b / 2.0));
            idx += 2;
            n += 1;
        }
        Ok(field)
    }

    /// Dense real-coefficient list `a0, a1, b1, ...` (inverse of the dense
    /// literal format). Adding `0.0` normalizes negative zeros for clean
    /// serialization.
    pub fn dense_coefficients(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.band() + 1);
        out.push(self.coeffs[0].re + 0.0);
        for c in &self.coeffs[1..] {
            out.push(2.0 * c.re + 0.0);
            out.push(-2.0 * c.im + 0.0);
        }
        out
    }
}

/// Lie bracket `[x, y] = x' y - y' x` of vector fields on the circle.
pub fn bracket(x: &FourierField, y: &FourierField) -> Result<FourierField> {
    let a = x.derivative().multiply(y)?;
    let b = y.derivative().multiply(x)?;
    a.sub(&b)
}

/// `(1/2pi) int x y dtheta`, evaluated exactly in coefficient arithmetic.
pub fn mean_product(x: &FourierField, y: &FourierField) -> f64 {
    let band = x.band().min(y.band());
    let mut acc = x.coeff(0).re * y.coeff(0).re;
    for k in 1..=band {
        acc += 2.0 * (x.coeff(k as i64) * y.coeff(k as i64).conj()).re;
    }
    acc
}

/// Metric parameters `(alpha, beta)` of the Sobolev-type operator
/// `L_{alpha,beta}` and the associated inner products. Validated against the
/// band limit they will act on: `beta >= 0`, `alpha > -beta` and
/// `alpha != -n^2 beta` for all active modes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MetricParams {
    alpha: f64,
    beta: f64,
    validated_band: usize,
}

impl MetricParams {
    pub fn new(alpha: f64, beta: f64, band: usize) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Parameter("metric parameters must be finite".into()));
        }
        if beta < 0.0 {
            return Err(Error::Parameter(format!("beta = {beta} must be >= 0")));
        }
        if alpha <= -beta {
            return Err(Error::Parameter(format!(
                "alpha = {alpha} must exceed -beta = {}",
                -beta
            )));
        }
        for n in 1..=band {
            if alpha == -((n * n) as f64) * beta {
                return Err(Error::Parameter(format!(
                    "alpha = -n^2 beta degenerates mode n = {n}"
                )));
            }
        }
        Ok(Self {
            alpha,
            beta,
            validated_band: band,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn validated_band(&self) -> usize {
        self.validated_band
    }

    pub fn check_band(&self, band: usize) -> Result<()> {
        if band > self.validated_band {
            return Err(Error::Parameter(format!(
                "metric validated for band {} used at band {}",
                self.validated_band, band
            )));
        }
        Ok(())
    }

    /// Symbol of `L_{alpha,beta}` on mode `k`.
    pub fn l_symbol(&self, k: usize) -> f64 {
        -(self.alpha + self.beta * (k * k) as f64)
    }

    /// Symbol of the Kahler-side operator `L_{alpha,beta} J d/dtheta` on mode
    /// `k != 0`; strictly positive under the admissibility constraints.
    pub fn kahler_symbol(&self, k: usize) -> f64 {
        (k as f64) * (self.alpha + self.beta * (k * k) as f64)
    }
}

/// Central-extension parameters `(mu, nu)` of the cocycle `omega_{mu,nu}`.
/// `nu = 0` is permitted and flags a trivial extension.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CocycleParams {
    pub mu: f64,
    pub nu: f64,
}

impl CocycleParams {
    pub fn new(mu: f64, nu: f64) -> Self {
        Self { mu, nu }
    }

    /// The extension defined by these parameters is trivial (a coboundary).
    pub fn is_trivial(&self) -> bool {
        self.nu == 0.0
    }
}

/// Element `(x, a)` of the centrally extended algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct VirasoroVector {
    pub field: FourierField,
    pub central: f64,
}

impl VirasoroVector {
    pub fn new(field: FourierField, central: f64) -> Self {
        Self { field, central }
    }
}

/// `omega_{mu,nu}(x, y) = (1/2pi) int (mu x y' + nu x' y'') dtheta`,
/// evaluated in coefficient arithmetic.
pub fn cocycle_omega(params: &CocycleParams, x: &FourierField, y: &FourierField) -> Result<f64> {
    x.check_band(y)?;
    let dy = y.derivative();
    let mu_part = mean_product(x, &dy);
    let nu_part = mean_product(&x.derivative(), &dy.derivative());
    Ok(params.mu * mu_part + params.nu * nu_part)
}

/// Bracket on the centrally extended algebra:
/// `[(x,a),(y,b)] = ([x,y], omega_{mu,nu}(x,y))`.
pub fn vir_bracket(
    params: &CocycleParams,
    x: &VirasoroVector,
    y: &VirasoroVector,
) -> Result<VirasoroVector> {
    Ok(VirasoroVector::new(
        bracket(&x.field, &y.field)?,
        cocycle_omega(params, &x.field, &y.field)?,
    ))
}

/// Inner-product family on fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerKind {
    /// `L^2`: `(1/2pi) int x y`.
    H10,
    /// Sobolev-type `<x,y>^{alpha,beta}` with the extension to constants
    /// `<x,y> = <x - mean, y - mean>_0 + mean(x) mean(y)`.
    Hab(MetricParams),
    /// Kahler product `(x,y) = omega_{alpha,beta}(Jx, y)`, extended to
    /// constants the same way.
    Kahler(MetricParams),
}

pub fn inner_product(kind: &InnerKind, x: &FourierField, y: &FourierField) -> Result<f64> {
    let band = x.check_band(y)?;
    match kind {
        InnerKind::H10 => Ok(mean_product(x, y)),
        InnerKind::Hab(p) => {
            p.check_band(band)?;
            let mut acc = x.mean() * y.mean();
            for k in 1..=band {
                let w = p.alpha() + p.beta() * (k * k) as f64;
                acc += 2.0 * w * (x.coeff(k as i64) * y.coeff(k as i64).conj()).re;
            }
            Ok(acc)
        }
        InnerKind::Kahler(p) => {
            p.check_band(band)?;
            let mut acc = x.mean() * y.mean();
            for k in 1..=band {
                let w = p.kahler_symbol(k);
                acc += 2.0 * w * (x.coeff(k as i64) * y.coeff(k as i64).conj()).re;
            }
            Ok(acc)
        }
    }
}

/// Extension of an inner product to the centrally extended algebra:
/// `<(x,a1),(y,a2)> = <x,y> + a1 a2`.
pub fn vir_inner_product(kind: &InnerKind, x: &VirasoroVector, y: &VirasoroVector) -> Result<f64> {
    Ok(inner_product(kind, &x.field, &y.field)? + x.central * y.central)
}

/// Metric adjoint of the bracket in the `L^2` product:
/// `ad^T_x y = x y' + 2 x' y`, the defining identity being
/// `<ad^T_x y, z> = <y, [x, z]>`.
pub fn ad_transpose(x: &FourierField, y: &FourierField) -> Result<FourierField> {
    let a = x.multiply(&y.derivative())?;
    let b = x.derivative().multiply(y)?.scale(2.0);
    a.add(&b)
}

/// Adjoint on the centrally extended algebra with the `L^2` pairing plus
/// central term: `ad^T_{(x,a1)} (y,a2) = (x y' + 2 x' y + a2 L_{mu,nu} x', 0)`.
pub fn vir_ad_transpose(
    params: &CocycleParams,
    x: &VirasoroVector,
    y: &VirasoroVector,
) -> Result<VirasoroVector> {
    let base = ad_transpose(&x.field, &y.field)?;
    let central_term = x
        .field
        .derivative()
        .apply_l_coeffs(params.mu, params.nu)
        .scale(y.central);
    Ok(VirasoroVector::new(base.add(&central_term)?, 0.0))
}

/// Hermitian coefficient form of the invariant Kahler metric on normalized
/// tangent sequences: `2 sum (alpha n + beta n^3) a_n conj(b_n)`.
/// The sequences are indexed from `n = 1`.
pub fn kahler_coefficient_metric(
    params: &MetricParams,
    a: &[Complex64],
    b: &[Complex64],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, (an, bn)) in a.iter().zip(b).enumerate() {
        let n = (n + 1) as f64;
        acc += 2.0 * (params.alpha() * n + params.beta() * n * n * n) * an * bn.conj();
    }
    acc
}

/// Boundary correspondence between a mean-zero field and the tangent
/// coefficients of the associated holomorphic disk map:
/// `F = -(i/2)(x - i Jx)` has coefficients `a_n = -i c_n`, `n >= 1`.
pub fn field_to_tangent(x: &FourierField) -> Vec<Complex64> {
    (1..=x.band()).map(|n| -I * x.coeff(n as i64)).collect()
}

/// Harmonic shorthands used throughout the oracle tests.
pub fn p_n(band: usize, n: usize) -> FourierField {
    FourierField::harmonic_cos(band, n)
}

pub fn k_n(band: usize, n: usize) -> FourierField {
    FourierField::harmonic_sin(band, n)
}

/// Uniform grid `theta_j = 2 pi j / m`.
pub fn grid_points(m: usize) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}
