//! Group-level objects: circle diffeomorphisms sampled on a uniform grid,
//! composition/inversion, the adjoint action on fields, reconstruction of
//! the group path from a logarithmic derivative, the central lift, and the
//! centrally extended multiplication with its cocycles.
//!
//! Diffeomorphisms are stored in universal-cover form as displacements
//! `phi(theta_j) - theta_j` on `M` uniform nodes; the displacement is
//! 2pi-periodic and is interpolated trigonometrically, which is spectrally
//! accurate for smooth diffeomorphisms.

use crate::error::{Error, Result};
use crate::fft;
use crate::fourier::FourierField;
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Orientation-preserving circle diffeomorphism on a uniform grid,
/// represented by its displacement in the universal cover.
#[derive(Debug, Clone)]
pub struct DiffeoGrid {
    disp: Vec<f64>,
    /// Half-spectrum of the displacement, modes `0..=M/2`.
    spec: Vec<Complex64>,
}

impl DiffeoGrid {
    pub fn identity(m: usize) -> Self {
        Self::from_displacement(vec![0.0; m]).expect("identity is monotone")
    }

    /// Rigid rotation by `a` (a constant displacement).
    pub fn rotation(m: usize, a: f64) -> Self {
        Self::from_displacement(vec![a; m]).expect("rotations are monotone")
    }

    /// Build from node displacements; rejects non-monotone samples.
    pub fn from_displacement(disp: Vec<f64>) -> Result<Self> {
        let m = disp.len();
        if m < 4 {
            return Err(Error::Geometry("grid too small".into()));
        }
        let h = 2.0 * PI / m as f64;
        for j in 0..m {
            let next = if j + 1 == m {
                disp[0] + 2.0 * PI
            } else {
                disp[j + 1] + (j + 1) as f64 * h
            };
            if next <= disp[j] + j as f64 * h {
                return Err(Error::Geometry(format!(
                    "displacement not strictly monotone at node {j}"
                )));
            }
        }
        let spectrum = fft::forward_real(&disp);
        let spec = spectrum[0..=m / 2].to_vec();
        Ok(Self { disp, spec })
    }

    /// Sample `phi(theta) = theta + d(theta)` from a cover function.
    pub fn from_fn(m: usize, phi: impl Fn(f64) -> f64) -> Result<Self> {
        let disp = (0..m)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / m as f64;
                phi(th) - th
            })
            .collect();
        Self::from_displacement(disp)
    }

    pub fn grid_size(&self) -> usize {
        self.disp.len()
    }

    pub fn displacement(&self) -> &[f64] {
        &self.disp
    }

    /// `phi(theta_j)`.
    pub fn value(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.disp.len() as f64 + self.disp[j]
    }

    /// Trigonometric interpolation of the displacement at an arbitrary
    /// point of the cover.
    pub fn eval_displacement(&self, theta: f64) -> f64 {
        let m = self.disp.len();
        let rot = Complex64::from_polar(1.0, theta);
        let mut z = Complex64::new(1.0, 0.0);
        let mut acc = self.spec[0].re;
        for c in &self.spec[1..m / 2] {
            z *= rot;
            acc += 2.0 * (c * z).re;
        }
        // Nyquist mode contributes a pure cosine.
        acc + self.spec[m / 2].re * (0.5 * m as f64 * theta).cos()
    }

    /// `phi(theta)` on the cover.
    pub fn eval(&self, theta: f64) -> f64 {
        theta + self.eval_displacement(theta)
    }

    /// `phi'(theta)`; the Nyquist mode is dropped from spectral derivatives.
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        let m = self.disp.len();
        let rot = Complex64::from_polar(1.0, theta);
        let mut z = Complex64::new(1.0, 0.0);
        let mut acc = 0.0;
        for (k, c) in self.spec[1..m / 2].iter().enumerate() {
            z *= rot;
            acc += 2.0 * (c * Complex64::new(0.0, (k + 1) as f64) * z).re;
        }
        1.0 + acc
    }

    fn derivative_spec(&self, order: u32) -> Vec<Complex64> {
        let m = self.disp.len();
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        for (k, c) in self.spec[1..m / 2].iter().enumerate() {
            let ik = Complex64::new(0.0, (k + 1) as f64).powu(order);
            spec[k + 1] = c * ik;
            spec[m - k - 1] = (c * ik).conj();
        }
        spec
    }

    /// `phi'` on the grid nodes.
    pub fn derivative_grid(&self) -> Vec<f64> {
        let mut spec = self.derivative_spec(1);
        fft::inverse_to_real(&mut spec)
            .into_iter()
            .map(|v| 1.0 + v)
            .collect()
    }

    /// `phi''` on the grid nodes.
    pub fn second_derivative_grid(&self) -> Vec<f64> {
        let mut spec = self.derivative_spec(2);
        fft::inverse_to_real(&mut spec)
    }

    pub fn sup_displacement(&self) -> f64 {
        self.disp.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Supremum node distance to another diffeomorphism on the same grid.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.disp.len() != other.disp.len() {
            return Err(Error::Dimension {
                expected: self.disp.len(),
                got: other.disp.len(),
            });
        }
        Ok(self
            .disp
            .iter()
            .zip(&other.disp)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Superposition `(self o g)(theta_j) = self(g(theta_j))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.disp.len() != g.disp.len() {
            return Err(Error::Dimension {
                expected: self.disp.len(),
                got: g.disp.len(),
            });
        }
        let disp: Vec<f64> = (0..g.disp.len())
            .map(|j| {
                let inner = g.value(j);
                g.disp[j] + self.eval_displacement(inner)
            })
            .collect();
        Self::from_displacement(disp)
    }

    /// Inverse diffeomorphism, computed by safeguarded Newton iteration per
    /// node (the displacement bounds give a bracket in the cover).
    pub fn invert(&self) -> Result<Self> {
        let m = self.disp.len();
        let dmin = self.disp.iter().cloned().fold(f64::INFINITY, f64::min);
        let dmax = self.disp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // The interpolated displacement can overshoot its node extremes
        // between nodes; pad the bracket and verify it before bisecting.
        let pad0 = 1e-3 * (1.0 + dmax - dmin);
        let mut disp = Vec::with_capacity(m);
        for j in 0..m {
            let target = 2.0 * PI * j as f64 / m as f64;
            let mut lo = target - dmax - pad0;
            let mut hi = target - dmin + pad0;
            let mut tries = 0;
            while self.eval(lo) - target > 0.0 && tries < 60 {
                lo -= pad0 * (1 << tries.min(20)) as f64;
                tries += 1;
            }
            while self.eval(hi) - target < 0.0 && tries < 60 {
                hi += pad0 * (1 << tries.min(20)) as f64;
                tries += 1;
            }
            if tries >= 60 {
                return Err(Error::Geometry(format!(
                    "inversion failed to bracket a root at node {j}"
                )));
            }
            let mut x = 0.5 * (lo + hi);
            let mut converged = false;
            for _ in 0..200 {
                let f = self.eval(x) - target;
                if f.abs() < 1e-12 || hi - lo < 1e-14 * (1.0 + target.abs()) {
                    converged = true;
                    break;
                }
                if f > 0.0 {
                    hi = x;
                } else {
                    lo = x;
                }
                let d = self.eval_derivative(x);
                let mut next = if d > 1e-12 { x - f / d } else { f64::NAN };
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                x = next;
            }
            if !converged {
                return Err(Error::Geometry(format!(
                    "inversion failed to bracket a root at node {j}"
                )));
            }
            disp.push(x - target);
        }
        Self::from_displacement(disp)
    }

    fn resample_grid(&self, band: usize) -> usize {
        // Oversample so that the fold-back modes of the (non-band-limited)
        // composed integrand sit deep in its spectral tail.
        (2 * self.disp.len()).max(4 * (band + 1))
    }

    /// Adjoint action on a field: `Ad_phi x = (phi' x) o phi^{-1}`,
    /// resampled to coefficients at the requested band limit.
    pub fn ad_action(&self, x: &FourierField, band: usize) -> Result<FourierField> {
        let psi = self.invert()?;
        let fine = self.resample_grid(band);
        let values: Vec<f64> = (0..fine)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / fine as f64;
                let pre = psi.eval(theta);
                self.eval_derivative(pre) * x.evaluate(pre)
            })
            .collect();
        FourierField::from_samples(&values, band)
    }

    /// `Ad_{phi^{-1}} x`, evaluated without inverting:
    /// `(Ad_{phi^{-1}} x)(theta) = x(phi(theta)) / phi'(theta)`.
    pub fn ad_action_inverse(&self, x: &FourierField, band: usize) -> Result<FourierField> {
        let fine = self.resample_grid(band);
        let values: Vec<f64> = (0..fine)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / fine as f64;
                x.evaluate(self.eval(theta)) / self.eval_derivative(theta)
            })
            .collect();
        FourierField::from_samples(&values, band)
    }
}

/// Time-indexed flow of diffeomorphisms.
#[derive(Debug, Clone)]
pub struct DiffeoPath {
    pub times: Vec<f64>,
    pub diffeos: Vec<DiffeoGrid>,
}

#[derive(Debug, Clone, Copy)]
pub struct FlowConfig {
    pub grid: usize,
    pub dt: f64,
    pub steps: usize,
}

fn spectral_derivative_grid(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut spec = fft::forward_real(values);
    let mut dspec = vec![Complex64::new(0.0, 0.0); m];
    for k in 1..m / 2 {
        let ik = Complex64::new(0.0, k as f64);
        dspec[k] = spec[k] * ik;
        dspec[m - k] = spec[m - k] * (-ik);
    }
    spec.clear();
    fft::inverse_to_real(&mut dspec)
}

/// Integrate `d/dt gamma = gamma' * u(., t)` with `gamma(., 0) = id`; `u` is
/// the left logarithmic derivative of the returned path. Fails with a
/// divergence error (wave breaking) if monotonicity is lost.
pub fn flow_from_log(u: &dyn Fn(f64) -> FourierField, cfg: &FlowConfig) -> Result<DiffeoPath> {
    if !cfg.dt.is_finite() || cfg.dt <= 0.0 {
        return Err(Error::Parameter(format!("dt = {} must be > 0", cfg.dt)));
    }
    let m = cfg.grid;
    let rhs = |disp: &[f64], ut: &[f64]| -> Vec<f64> {
        let ddisp = spectral_derivative_grid(disp);
        (0..m).map(|j| (1.0 + ddisp[j]) * ut[j]).collect()
    };
    // Fields wider than the flow grid resolves are truncated on sampling.
    let sample_u = |t: f64| -> Vec<f64> {
        let f = u(t);
        if 2 * f.band() + 2 > m {
            f.with_band(m / 2 - 1).sample(m)
        } else {
            f.sample(m)
        }
    };
    let mut disp = vec![0.0; m];
    let mut times = vec![0.0];
    let mut diffeos = vec![DiffeoGrid::identity(m)];
    for step in 0..cfg.steps {
        let t = step as f64 * cfg.dt;
        let u0 = sample_u(t);
        let uh = sample_u(t + cfg.dt / 2.0);
        let u1 = sample_u(t + cfg.dt);
        let k1 = rhs(&disp, &u0);
        let s2: Vec<f64> = disp
            .iter()
            .zip(&k1)
            .map(|(d, k)| d + 0.5 * cfg.dt * k)
            .collect();
        let k2 = rhs(&s2, &uh);
        let s3: Vec<f64> = disp
            .iter()
            .zip(&k2)
            .map(|(d, k)| d + 0.5 * cfg.dt * k)
            .collect();
        let k3 = rhs(&s3, &uh);
        let s4: Vec<f64> = disp.iter().zip(&k3).map(|(d, k)| d + cfg.dt * k).collect();
        let k4 = rhs(&s4, &u1);
        for j in 0..m {
            disp[j] += cfg.dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let next = DiffeoGrid::from_displacement(disp.clone()).map_err(|_| Error::Divergence {
            t,
            detail: "flow lost monotonicity (wave breaking)".into(),
        })?;
        times.push((step + 1) as f64 * cfg.dt);
        diffeos.push(next);
    }
    Ok(DiffeoPath { times, diffeos })
}

/// Extract the left logarithmic derivative `gamma_t / gamma'` from a sampled
/// path (fourth-order differences in time, spectral in space).
pub fn log_derivative(path: &DiffeoPath, band: usize) -> Result<Vec<FourierField>> {
    let n = path.times.len();
    if n < 5 {
        return Err(Error::Input("need at least five time samples".into()));
    }
    let m = path.diffeos[0].grid_size();
    let dt = path.times[1] - path.times[0];
    // Per-node time series of the displacement.
    let mut node_series = vec![Vec::with_capacity(n); m];
    for d in &path.diffeos {
        for (j, v) in d.displacement().iter().enumerate() {
            node_series[j].push(*v);
        }
    }
    let node_derivs: Vec<Vec<f64>> = node_series
        .iter()
        .map(|s| quad::derivative(dt, s))
        .collect();
    let mut out = Vec::with_capacity(n);
    for (i, d) in path.diffeos.iter().enumerate() {
        let dgrid = d.derivative_grid();
        let values: Vec<f64> = (0..m).map(|j| node_derivs[j][i] / dgrid[j]).collect();
        out.push(FourierField::from_samples(&values, band)?);
    }
    Ok(out)
}

/// Cocycle integrand of the central component: with `C(t) = 0` (horizontal
/// lift), `b' = (mu/4pi) int u dtheta - (mu/4pi) int u gamma' dtheta
/// - (nu/4pi) int u' (gamma''/gamma') dtheta`.
pub fn central_lift_integrand(
    gamma: &DiffeoGrid,
    u: &FourierField,
    params: &crate::fourier::CocycleParams,
) -> f64 {
    let m = gamma.grid_size();
    let u_vals = u.sample(m);
    let du_vals = u.derivative().sample(m);
    let g1 = gamma.derivative_grid();
    let g2 = gamma.second_derivative_grid();
    let int_u = quad::periodic_trapezoid(&u_vals);
    let int_ug: f64 = quad::periodic_trapezoid(
        &u_vals
            .iter()
            .zip(&g1)
            .map(|(a, b)| a * b)
            .collect::<Vec<_>>(),
    );
    let int_bott: f64 = quad::periodic_trapezoid(
        &du_vals
            .iter()
            .zip(g2.iter().zip(&g1))
            .map(|(du, (g2, g1))| du * g2 / g1)
            .collect::<Vec<_>>(),
    );
    (params.mu * (int_u - int_ug) - params.nu * int_bott) / (4.0 * PI)
}

/// Horizontal lift of a flow to the centrally extended group: returns the
/// central component `b(t)` with `b(0) = 0`.
pub fn central_lift(
    path: &DiffeoPath,
    us: &[FourierField],
    params: &crate::fourier::CocycleParams,
) -> Result<Vec<f64>> {
    if us.len() != path.times.len() {
        return Err(Error::Dimension {
            expected: path.times.len(),
            got: us.len(),
        });
    }
    let dt = path.times[1] - path.times[0];
    let integrand: Vec<f64> = path
        .diffeos
        .iter()
        .zip(us)
        .map(|(g, u)| central_lift_integrand(g, u, params))
        .collect();
    Ok(quad::cumulative_integral(dt, &integrand))
}

/// Element `(phi, b)` of the centrally extended group.
#[derive(Debug, Clone)]
pub struct VirasoroElement {
    pub phi: DiffeoGrid,
    pub b: f64,
}

/// Group coboundary generator `F(phi) = (1/4pi) int (phi(theta) - theta) dtheta`.
pub fn coboundary_f(phi: &DiffeoGrid) -> f64 {
    quad::periodic_trapezoid(phi.displacement()) / (4.0 * PI)
}

/// Coboundary part `A(phi1, phi2) = (1/4pi) int (-phi1 o phi2 + phi1 + phi2 - id)`.
pub fn group_cocycle_a(phi1: &DiffeoGrid, phi2: &DiffeoGrid) -> Result<f64> {
    if phi1.grid_size() != phi2.grid_size() {
        return Err(Error::Dimension {
            expected: phi1.grid_size(),
            got: phi2.grid_size(),
        });
    }
    let m = phi2.grid_size();
    // The integrand telescopes to d1(theta) - d1(phi2(theta)).
    let vals: Vec<f64> = (0..m)
        .map(|j| phi1.displacement()[j] - phi1.eval_displacement(phi2.value(j)))
        .collect();
    Ok(quad::periodic_trapezoid(&vals) / (4.0 * PI))
}

/// Bott cocycle `B(phi1, phi2) = (1/4pi) int log (phi1 o phi2)' d log phi2'`,
/// with `d log phi2'` evaluated as `(phi2''/phi2') dtheta`.
pub fn group_cocycle_b(phi1: &DiffeoGrid, phi2: &DiffeoGrid) -> Result<f64> {
    if phi1.grid_size() != phi2.grid_size() {
        return Err(Error::Dimension {
            expected: phi1.grid_size(),
            got: phi2.grid_size(),
        });
    }
    let m = phi2.grid_size();
    let g1 = phi2.derivative_grid();
    let g2 = phi2.second_derivative_grid();
    let vals: Vec<f64> = (0..m)
        .map(|j| {
            let comp_deriv = phi1.eval_derivative(phi2.value(j)) * g1[j];
            comp_deriv.ln() * g2[j] / g1[j]
        })
        .collect();
    Ok(quad::periodic_trapezoid(&vals) / (4.0 * PI))
}

/// Multiplication in the centrally extended group:
/// `(phi1, b1)(phi2, b2) = (phi1 o phi2, b1 + b2 + mu A + nu B)`.
pub fn vir_multiply(
    g1: &VirasoroElement,
    g2: &VirasoroElement,
    params: &crate::fourier::CocycleParams,
) -> Result<VirasoroElement> {
    let phi = g1.phi.compose(&g2.phi)?;
    let a = group_cocycle_a(&g1.phi, &g2.phi)?;
    let b = group_cocycle_b(&g1.phi, &g2.phi)?;
    Ok(VirasoroElement {
        phi,
        b: g1.b + g2.b + params.mu * a + params.nu * b,
    })
}

/// Inverse in the centrally extended group. Both cocycles vanish on the
/// pair `(phi, phi^{-1})` (the coboundary by the relation
/// `F(phi) + F(phi^{-1}) = 0`, the Bott term because `(phi o phi^{-1})' = 1`),
/// so the inverse is `(phi^{-1}, -b)`.
pub fn vir_inverse(g: &VirasoroElement) -> Result<VirasoroElement> {
    Ok(VirasoroElement {
        phi: g.phi.invert()?,
        b: -g.b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{k_n, p_n, CocycleParams};

    const M: usize = 256;

    fn smooth_diffeo(seed: u64) -> DiffeoGrid {
        // Deterministic smooth non-trivial diffeomorphism.
        let a = 0.15 + 0.05 * (seed as f64 % 3.0);
        let b = 0.1 - 0.02 * (seed as f64 % 5.0);
        DiffeoGrid::from_fn(M, |t| t + a * t.sin() + b * (2.0 * t + 0.3).cos()).unwrap()
    }

    #[test]
    fn monotonicity_is_enforced() {
        let mut disp = vec![0.0; M];
        disp[10] = -1.0; // large backwards jump
        assert!(matches!(
            DiffeoGrid::from_displacement(disp),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn compose_identity_and_rotations() {
        let g = smooth_diffeo(1);
        let id = DiffeoGrid::identity(M);
        let c = id.compose(&g).unwrap();
        assert!(c.sup_distance(&g).unwrap() < 1e-12);
        let r1 = DiffeoGrid::rotation(M, 0.4);
        let r2 = DiffeoGrid::rotation(M, 1.1);
        let r = r1.compose(&r2).unwrap();
        assert!(r.sup_distance(&DiffeoGrid::rotation(M, 1.5)).unwrap() < 1e-12);
    }

    #[test]
    fn invert_roundtrip() {
        let f = smooth_diffeo(2);
        let finv = f.invert().unwrap();
        let id = f.compose(&finv).unwrap();
        assert!(id.sup_displacement() < 1e-9);
        let id2 = finv.compose(&f).unwrap();
        assert!(id2.sup_displacement() < 1e-9);
        // rotation inverse is the opposite rotation
        let r = DiffeoGrid::rotation(M, 0.7).invert().unwrap();
        assert!(r.sup_distance(&DiffeoGrid::rotation(M, -0.7)).unwrap() < 1e-12);
    }

    #[test]
    fn ad_action_identity_and_rotation() {
        let band = 16;
        let x = p_n(band, 2).add(&k_n(band, 3).scale(0.5)).unwrap();
        let id = DiffeoGrid::identity(M);
        let ax = id.ad_action(&x, band).unwrap();
        assert!(ax.sub(&x).unwrap().max_coeff_abs() < 1e-12);
        let s = 0.9;
        let rot = DiffeoGrid::rotation(M, s);
        let shifted = rot.ad_action(&x, band).unwrap();
        assert!(shifted.sub(&x.shift(s)).unwrap().max_coeff_abs() < 1e-11);
        // mean is preserved under rotations (H-invariance)
        assert!((shifted.mean() - x.mean()).abs() < 1e-13);
    }

    #[test]
    fn ad_is_group_action() {
        // The adjoint of a finitely displaced diffeomorphism spreads the
        // spectrum; the working band must leave room for the decay.
        let band = 64;
        let x = k_n(band, 1).add(&p_n(band, 2).scale(0.4)).unwrap();
        let f = smooth_diffeo(3);
        let g = smooth_diffeo(4);
        let lhs = f.compose(&g).unwrap().ad_action(&x, band).unwrap();
        let rhs = f.ad_action(&g.ad_action(&x, band).unwrap(), band).unwrap();
        let err = lhs.sub(&rhs).unwrap().max_coeff_abs();
        assert!(err < 1e-7, "err = {err:.3e}");
    }

    #[test]
    fn ad_inverse_is_consistent() {
        let band = 64;
        let x = k_n(band, 2).scale(0.3);
        let f = smooth_diffeo(5);
        let roundtrip = f
            .ad_action_inverse(&f.ad_action(&x, band).unwrap(), band)
            .unwrap();
        assert!(roundtrip.sub(&x).unwrap().max_coeff_abs() < 1e-9);
    }

    #[test]
    fn flow_of_constant_field_is_rotation() {
        let band = 8;
        let c = 0.6;
        let cfg = FlowConfig {
            grid: 64,
            dt: 1e-2,
            steps: 100,
        };
        let u = move |_t: f64| FourierField::constant(band, c);
        let path = flow_from_log(&u, &cfg).unwrap();
        let last = path.diffeos.last().unwrap();
        assert!(
            last.sup_distance(&DiffeoGrid::rotation(64, c)).unwrap() < 1e-12,
            "gamma(theta, 1) should be theta + c t"
        );
        // u = 0 stays at the identity
        let zero = move |_t: f64| FourierField::zeros(band);
        let path = flow_from_log(&zero, &cfg).unwrap();
        assert_eq!(path.diffeos.last().unwrap().sup_displacement(), 0.0);
    }

    #[test]
    fn flow_detects_wave_breaking() {
        let band = 16;
        let u = move |_t: f64| k_n(band, 1).scale(30.0);
        let cfg = FlowConfig {
            grid: 64,
            dt: 5e-2,
            steps: 200,
        };
        match flow_from_log(&u, &cfg) {
            Err(Error::Divergence { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn central_lift_of_zero_field_vanishes() {
        let band = 8;
        let cfg = FlowConfig {
            grid: 64,
            dt: 1e-2,
            steps: 50,
        };
        let zero = move |_t: f64| FourierField::zeros(band);
        let path = flow_from_log(&zero, &cfg).unwrap();
        let us: Vec<FourierField> = path
            .times
            .iter()
            .map(|_| FourierField::zeros(band))
            .collect();
        let b = central_lift(&path, &us, &CocycleParams::new(1.0, 1.0)).unwrap();
        assert!(b.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn vir_identity_pair_adds_centers() {
        let params = CocycleParams::new(0.7, 1.3);
        let e1 = VirasoroElement {
            phi: DiffeoGrid::identity(M),
            b: 0.4,
        };
        let e2 = VirasoroElement {
            phi: DiffeoGrid::identity(M),
            b: -0.1,
        };
        let p = vir_multiply(&e1, &e2, &params).unwrap();
        assert!((p.b - 0.3).abs() < 1e-15);
        assert!(p.phi.sup_displacement() < 1e-15);
    }

    #[test]
    fn vir_inverse_cancels() {
        let params = CocycleParams::new(0.9, 1.1);
        let g = VirasoroElement {
            phi: smooth_diffeo(6),
            b: 0.37,
        };
        let ginv = vir_inverse(&g).unwrap();
        let prod = vir_multiply(&g, &ginv, &params).unwrap();
        assert!(prod.phi.sup_displacement() < 1e-8);
        assert!(prod.b.abs() < 1e-8, "b = {:.3e}", prod.b);
        // F-relation backing the inverse: F(phi) + F(phi^{-1}) = 0.
        let f_sum = coboundary_f(&g.phi) + coboundary_f(&ginv.phi);
        assert!(f_sum.abs() < 1e-9);
        assert!((coboundary_f(&DiffeoGrid::identity(M))).abs() < 1e-15);
    }

    #[test]
    fn coboundary_relation_for_a() {
        // A(phi1, phi2) = F(phi1) + F(phi2) - F(phi1 o phi2)
        let f1 = smooth_diffeo(7);
        let f2 = smooth_diffeo(8);
        let a = group_cocycle_a(&f1, &f2).unwrap();
        let viaf = coboundary_f(&f1) + coboundary_f(&f2) - coboundary_f(&f1.compose(&f2).unwrap());
        assert!((a - viaf).abs() < 1e-10);
    }
}
