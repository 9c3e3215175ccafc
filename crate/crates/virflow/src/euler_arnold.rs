//! Normal geodesic equations on the circle diffeomorphism group and its
//! central extension: right-hand sides for five invariant metrics, RK4 and
//! integrating-factor RK4 time stepping, the transport inversion
//! `x' + [u, x] = y`, and the factorization of sub-Riemannian geodesics
//! through Riemannian ones.
//!
//! All models evolve a mean-zero field `u` (the left logarithmic derivative
//! of the group-level geodesic) with the Lagrange multiplier(s) held
//! constant; the multiplier constancy is itself a checked invariant.

use crate::error::{Error, Result};
use crate::fourier::{
    ad_transpose, inner_product, CocycleParams, FourierField, InnerKind, MetricParams,
};
use crate::group_flow::DiffeoGrid;
use crate::quad;
use num_complex::Complex64;

/// Lagrange multiplier attached to the vertical directions: a scalar for the
/// diffeomorphism-group models, a pair (rotation, center) for the extended
/// models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Scalar(f64),
    Pair(f64, f64),
}

impl Lambda {
    fn scalar(&self) -> Result<f64> {
        match self {
            Lambda::Scalar(v) => Ok(*v),
            Lambda::Pair(..) => Err(Error::Parameter(
                "model expects a scalar multiplier, got a pair".into(),
            )),
        }
    }

    fn pair(&self) -> Result<(f64, f64)> {
        match self {
            Lambda::Pair(a, b) => Ok((*a, *b)),
            Lambda::Scalar(_) => Err(Error::Parameter(
                "model expects a multiplier pair, got a scalar".into(),
            )),
        }
    }
}

/// The five shipped geodesic models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// `L^2` metric: `u' = 3 u u_theta + 2 lambda u_theta`.
    H10,
    /// Sobolev-type metric: `L u' = u (L u)_theta + 2 u_theta L u - 2 lambda u_theta`.
    Hab(MetricParams),
    /// Extended `L^2` metric, KdV-type:
    /// `u' = 3 u u_theta + (2 l1 - l2 mu) u_theta + l2 nu u_theta^3`.
    Vir10(CocycleParams),
    /// Extended Sobolev metric:
    /// `L u' = u (L u)_theta + 2 u_theta L u - 2 l1 u_theta - l2 (L_{mu,nu} u)_theta`-form.
    Virab {
        metric: MetricParams,
        cocycle: CocycleParams,
    },
    /// Kahler metric: `(L J d/dtheta) u' = ad^T_u (L J u_theta - lambda)`.
    Kahler(MetricParams),
}

impl ModelKind {
    /// Inner product in which this model measures energy.
    pub fn metric_kind(&self) -> InnerKind {
        match self {
            ModelKind::H10 | ModelKind::Vir10(_) => InnerKind::H10,
            ModelKind::Hab(p) | ModelKind::Virab { metric: p, .. } => InnerKind::Hab(*p),
            ModelKind::Kahler(p) => InnerKind::Kahler(*p),
        }
    }

    fn validate(&self, band: usize, lambda: &Lambda) -> Result<()> {
        match self {
            ModelKind::H10 => {
                lambda.scalar()?;
            }
            ModelKind::Hab(p) => {
                lambda.scalar()?;
                p.check_band(band)?;
            }
            ModelKind::Vir10(_) => {
                lambda.pair()?;
            }
            ModelKind::Virab { metric, .. } => {
                lambda.pair()?;
                metric.check_band(band)?;
            }
            ModelKind::Kahler(p) => {
                lambda.scalar()?;
                p.check_band(band)?;
                for k in 1..=band {
                    if p.kahler_symbol(k) <= 0.0 {
                        return Err(Error::Parameter(format!(
                            "Kahler operator symbol non-positive on mode {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Multiplier of the linear (in `u`) part of the right-hand side on mode
    /// `k`; purely imaginary for every model. Used by the integrating-factor
    /// scheme, which propagates this part exactly.
    fn linear_multiplier(&self, lambda: &Lambda, k: usize) -> Result<Complex64> {
        if k == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let kf = k as f64;
        let im = match self {
            ModelKind::H10 => 2.0 * lambda.scalar()? * kf,
            ModelKind::Hab(p) => 2.0 * lambda.scalar()? * kf / (p.alpha() + p.beta() * kf * kf),
            ModelKind::Vir10(c) => {
                let (l1, l2) = lambda.pair()?;
                (2.0 * l1 - l2 * c.mu) * kf - l2 * c.nu * kf * kf * kf
            }
            ModelKind::Virab { metric, cocycle } => {
                let (l1, l2) = lambda.pair()?;
                kf * (2.0 * l1 - l2 * cocycle.mu - l2 * cocycle.nu * kf * kf)
                    / (metric.alpha() + metric.beta() * kf * kf)
            }
            ModelKind::Kahler(p) => -2.0 * lambda.scalar()? / (p.alpha() + p.beta() * kf * kf),
        };
        Ok(Complex64::new(0.0, im))
    }

    /// Nonlinear (quadratic) part of the right-hand side.
    fn nonlinear_rhs(&self, u: &FourierField) -> Result<FourierField> {
        let du = u.derivative();
        let mut out = match self {
            ModelKind::H10 | ModelKind::Vir10(_) => u.multiply(&du)?.scale(3.0),
            ModelKind::Hab(p) | ModelKind::Virab { metric: p, .. } => {
                let lu = u.apply_l(p);
                let weak = u
                    .multiply(&lu.derivative())?
                    .add(&du.multiply(&lu)?.scale(2.0))?;
                solve_l(&weak, p)
            }
            ModelKind::Kahler(p) => {
                let y = du.hilbert().apply_l(p);
                let weak = u
                    .multiply(&y.derivative())?
                    .add(&du.multiply(&y)?.scale(2.0))?;
                solve_kahler(&weak, p)
            }
        };
        out.project_mean_zero();
        Ok(out)
    }

    fn apply_linear(&self, lambda: &Lambda, u: &FourierField) -> Result<FourierField> {
        let mut out = FourierField::zeros(u.band());
        for k in 0..=u.band() {
            out.set_coeff(k, u.coeff(k as i64) * self.linear_multiplier(lambda, k)?);
        }
        Ok(out)
    }
}

fn solve_l(weak: &FourierField, p: &MetricParams) -> FourierField {
    let mut out = FourierField::zeros(weak.band());
    for k in 1..=weak.band() {
        out.set_coeff(k, weak.coeff(k as i64) / p.l_symbol(k));
    }
    out
}

fn solve_kahler(weak: &FourierField, p: &MetricParams) -> FourierField {
    let mut out = FourierField::zeros(weak.band());
    for k in 1..=weak.band() {
        out.set_coeff(k, weak.coeff(k as i64) / p.kahler_symbol(k));
    }
    out
}

/// State of a normal geodesic: mean-zero logarithmic derivative plus the
/// constant multiplier(s).
#[derive(Debug, Clone)]
pub struct GeodesicState {
    pub u: FourierField,
    pub lambda: Lambda,
}

impl GeodesicState {
    pub fn new(u: FourierField, lambda: Lambda) -> Result<Self> {
        if u.mean().abs() > 1e-12 * (1.0 + u.max_coeff_abs()) {
            return Err(Error::Input(format!(
                "geodesic state must be mean-zero, got mean {}",
                u.mean()
            )));
        }
        let mut u = u;
        u.project_mean_zero();
        Ok(Self { u, lambda })
    }
}

/// Time derivative of `u` for the given model; the returned field is
/// mean-zero.
pub fn geodesic_rhs(model: &ModelKind, state: &GeodesicState) -> Result<FourierField> {
    model.validate(state.u.band(), &state.lambda)?;
    let mut out = model
        .nonlinear_rhs(&state.u)?
        .add(&model.apply_linear(&state.lambda, &state.u)?)?;
    out.project_mean_zero();
    Ok(out)
}

/// Sub-Riemannian energy `(1/2) <u, u>` in the model's own metric.
pub fn energy(model: &ModelKind, u: &FourierField) -> Result<f64> {
    Ok(0.5 * inner_product(&model.metric_kind(), u, u)?)
}

/// Vertical component of the adjoint drive, i.e. the would-be multiplier
/// drift. Vanishes identically for all shipped models (the metrics are
/// invariant under the vertical subgroup); returned so trajectories can
/// assert it stays at round-off.
pub fn lambda_drift(model: &ModelKind, state: &GeodesicState) -> Result<f64> {
    let du = state.u.derivative();
    let kind = model.metric_kind();
    let drift = match (model, &state.lambda) {
        (ModelKind::H10 | ModelKind::Hab(_) | ModelKind::Kahler(_), Lambda::Scalar(l)) => {
            let shifted = state.u.add(&FourierField::constant(state.u.band(), *l))?;
            inner_product(&kind, &shifted, &du)?
        }
        (ModelKind::Vir10(_) | ModelKind::Virab { .. }, Lambda::Pair(l1, _)) => {
            // The central component of the bracket with the vertical basis
            // vanishes identically; only the rotation component can drift.
            let shifted = state.u.add(&FourierField::constant(state.u.band(), *l1))?;
            inner_product(&kind, &shifted, &du)?
        }
        _ => {
            return Err(Error::Parameter(
                "multiplier shape does not match model".into(),
            ))
        }
    };
    Ok(drift.abs())
}

/// Time stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    /// Classical RK4 on the integrating-factor transform; the linear
    /// dispersive/advective part is propagated exactly. Use for stiff
    /// KdV-type runs.
    IfRk4,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub band: usize,
}

impl IntegratorConfig {
    fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::Parameter(format!("dt = {} must be > 0", self.dt)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<FourierField>,
    pub lambda: Lambda,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    /// Cubic interpolation of the stored fields at an arbitrary time.
    pub fn field_at(&self, t: f64) -> FourierField {
        interpolate_fields(&self.times, &self.fields, t)
    }
}

/// Cubic Lagrange interpolation of a uniformly sampled field sequence.
pub fn interpolate_fields(times: &[f64], fields: &[FourierField], t: f64) -> FourierField {
    let n = times.len();
    assert!(n >= 2, "need at least two samples");
    let dt = times[1] - times[0];
    let pos = ((t - times[0]) / dt).clamp(0.0, (n - 1) as f64);
    let i0 = (pos.floor() as usize)
        .saturating_sub(1)
        .min(n.saturating_sub(4));
    let count = 4.min(n - i0);
    let nodes = &times[i0..i0 + count];
    let mut out = FourierField::zeros(fields[0].band());
    for (j, field) in fields[i0..i0 + count].iter().enumerate() {
        let mut w = 1.0;
        for (l, node) in nodes.iter().enumerate() {
            if l != j {
                w *= (t - node) / (nodes[j] - node);
            }
        }
        out = out.add(&field.scale(w)).expect("bands match");
    }
    out
}

struct StepOutcome {
    trajectory: Trajectory,
    divergence: Option<(f64, String)>,
}

fn run_integration(
    model: &ModelKind,
    state0: &GeodesicState,
    cfg: &IntegratorConfig,
) -> Result<StepOutcome> {
    cfg.validate()?;
    if state0.u.band() != cfg.band {
        return Err(Error::Dimension {
            expected: cfg.band,
            got: state0.u.band(),
        });
    }
    model.validate(cfg.band, &state0.lambda)?;

    let mut warnings = Vec::new();
    let mut times = Vec::with_capacity(cfg.steps + 1);
    let mut fields = Vec::with_capacity(cfg.steps + 1);
    let mut u = state0.u.clone();
    times.push(0.0);
    fields.push(u.clone());

    let cfl = cfg.dt * cfg.band as f64 * u.sup_norm();
    if cfl > 0.5 {
        warnings.push(format!(
            "CFL safety bound violated: dt * N * max|u| = {cfl:.3e} > 0.5"
        ));
    }

    // Integrating-factor weights (unused by plain RK4).
    let (e_half, e_full): (Vec<Complex64>, Vec<Complex64>) = if cfg.scheme == Scheme::IfRk4 {
        let mut eh = Vec::with_capacity(cfg.band + 1);
        let mut ef = Vec::with_capacity(cfg.band + 1);
        for k in 0..=cfg.band {
            let l = model.linear_multiplier(&state0.lambda, k)?;
            eh.push((l * (cfg.dt / 2.0)).exp());
            ef.push((l * cfg.dt).exp());
        }
        (eh, ef)
    } else {
        (Vec::new(), Vec::new())
    };

    let apply_mult = |u: &FourierField, m: &[Complex64]| -> FourierField {
        let mut out = FourierField::zeros(u.band());
        for (k, mult) in m.iter().enumerate().take(u.band() + 1) {
            out.set_coeff(k, u.coeff(k as i64) * mult);
        }
        out
    };

    let mut divergence = None;
    for step in 0..cfg.steps {
        let t = step as f64 * cfg.dt;
        let next = match cfg.scheme {
            Scheme::Rk4 => {
                let rhs = |v: &FourierField| -> Result<FourierField> {
                    geodesic_rhs(
                        model,
                        &GeodesicState {
                            u: v.clone(),
                            lambda: state0.lambda,
                        },
                    )
                };
                let k1 = rhs(&u)?;
                let k2 = rhs(&u.add(&k1.scale(cfg.dt / 2.0))?)?;
                let k3 = rhs(&u.add(&k2.scale(cfg.dt / 2.0))?)?;
                let k4 = rhs(&u.add(&k3.scale(cfg.dt))?)?;
                u.add(
                    &k1.add(&k2.scale(2.0))?
                        .add(&k3.scale(2.0))?
                        .add(&k4)?
                        .scale(cfg.dt / 6.0),
                )?
            }
            Scheme::IfRk4 => {
                let n = |v: &FourierField| model.nonlinear_rhs(v);
                let a = n(&u)?;
                let b = n(&apply_mult(&u.add(&a.scale(cfg.dt / 2.0))?, &e_half))?;
                let c = n(&apply_mult(&u, &e_half).add(&b.scale(cfg.dt / 2.0))?)?;
                let d = n(&apply_mult(&u, &e_full).add(&apply_mult(&c, &e_half).scale(cfg.dt))?)?;
                apply_mult(&u, &e_full).add(
                    &apply_mult(&a, &e_full)
                        .add(&apply_mult(&b, &e_half).scale(2.0))?
                        .add(&apply_mult(&c, &e_half).scale(2.0))?
                        .add(&d)?
                        .scale(cfg.dt / 6.0),
                )?
            }
        };
        let mut next = next;
        next.project_mean_zero();
        if !next.is_finite() {
            divergence = Some((t, "NaN or overflow in spectral state".into()));
            break;
        }
        if step % 16 == 0 {
            let cfl = cfg.dt * cfg.band as f64 * next.sup_norm();
            if cfl > 0.5 && warnings.is_empty() {
                warnings.push(format!(
                    "CFL safety bound violated at t = {:.4}: dt * N * max|u| = {cfl:.3e} > 0.5",
                    t + cfg.dt
                ));
            }
        }
        u = next;
        times.push((step + 1) as f64 * cfg.dt);
        fields.push(u.clone());
    }

    Ok(StepOutcome {
        trajectory: Trajectory {
            times,
            fields,
            lambda: state0.lambda,
            warnings,
        },
        divergence,
    })
}

/// Integrate a geodesic model. Returns a divergence error (with the last
/// valid time) if the state leaves the representable range.
pub fn integrate(
    model: &ModelKind,
    state0: &GeodesicState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let outcome = run_integration(model, state0, cfg)?;
    if let Some((t, detail)) = outcome.divergence {
        return Err(Error::Divergence { t, detail });
    }
    Ok(outcome.trajectory)
}

/// Like [`integrate`] but keeps the partial trajectory on blow-up; used by
/// the experiment runner to emit flagged partial outputs.
pub fn integrate_partial(
    model: &ModelKind,
    state0: &GeodesicState,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, Option<(f64, String)>)> {
    let outcome = run_integration(model, state0, cfg)?;
    Ok((outcome.trajectory, outcome.divergence))
}

/// General Euler-Arnold integrator with a user-supplied adjoint hook:
/// `u' = project_mean_zero(hook(u, u + lambda p_0))`. Only plain RK4 is
/// available for custom hooks.
pub fn integrate_with_ad_transpose(
    hook: &dyn Fn(&FourierField, &FourierField) -> Result<FourierField>,
    state0: &GeodesicState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let lambda = state0.lambda.scalar()?;
    let mut u = state0.u.clone();
    let mut times = vec![0.0];
    let mut fields = vec![u.clone()];
    let rhs = |v: &FourierField| -> Result<FourierField> {
        let shifted = v.add(&FourierField::constant(v.band(), lambda))?;
        let mut out = hook(v, &shifted)?;
        out.project_mean_zero();
        Ok(out)
    };
    for step in 0..cfg.steps {
        let k1 = rhs(&u)?;
        let k2 = rhs(&u.add(&k1.scale(cfg.dt / 2.0))?)?;
        let k3 = rhs(&u.add(&k2.scale(cfg.dt / 2.0))?)?;
        let k4 = rhs(&u.add(&k3.scale(cfg.dt))?)?;
        u = u.add(
            &k1.add(&k2.scale(2.0))?
                .add(&k3.scale(2.0))?
                .add(&k4)?
                .scale(cfg.dt / 6.0),
        )?;
        u.project_mean_zero();
        if !u.is_finite() {
            return Err(Error::Divergence {
                t: step as f64 * cfg.dt,
                detail: "NaN or overflow in custom model".into(),
            });
        }
        times.push((step + 1) as f64 * cfg.dt);
        fields.push(u.clone());
    }
    Ok(Trajectory {
        times,
        fields,
        lambda: state0.lambda,
        warnings: Vec::new(),
    })
}

/// Riemannian `L^2` right-hand side `3 u u_theta` (the Burgers form); shares
/// the product path with the geodesic models so the `lambda = 0` reduction
/// is exact in coefficients.
pub fn burgers_rhs(u: &FourierField) -> Result<FourierField> {
    u.multiply(&u.derivative())?
        .scale(3.0)
        .add(&FourierField::zeros(u.band()))
}

/// Integrate the Riemannian `L^2` geodesic (`u' = ad^T_u u = 3 u u_theta`)
/// without the horizontality constraint; the mean is a conserved quantity.
pub fn integrate_riemannian_l2(
    u0: &FourierField,
    cfg: &IntegratorConfig,
) -> Result<Vec<FourierField>> {
    cfg.validate()?;
    let mut u = u0.clone();
    let mut fields = vec![u.clone()];
    let rhs = |v: &FourierField| ad_transpose(v, v);
    for step in 0..cfg.steps {
        let k1 = rhs(&u)?;
        let k2 = rhs(&u.add(&k1.scale(cfg.dt / 2.0))?)?;
        let k3 = rhs(&u.add(&k2.scale(cfg.dt / 2.0))?)?;
        let k4 = rhs(&u.add(&k3.scale(cfg.dt))?)?;
        u = u.add(
            &k1.add(&k2.scale(2.0))?
                .add(&k3.scale(2.0))?
                .add(&k4)?
                .scale(cfg.dt / 6.0),
        )?;
        if !u.is_finite() {
            return Err(Error::Divergence {
                t: step as f64 * cfg.dt,
                detail: "NaN or overflow in Riemannian flow".into(),
            });
        }
        fields.push(u.clone());
    }
    Ok(fields)
}

/// Solve the transport problem `x' + [u, x] = y`, `x(0) = 0`, where `u` is
/// the left logarithmic derivative of the supplied group path:
/// `x(t) = Ad_{gamma(t)^{-1}} int_0^t Ad_{gamma} y`.
pub fn invert_tau(
    times: &[f64],
    gammas: &[DiffeoGrid],
    ys: &[FourierField],
) -> Result<Vec<FourierField>> {
    if gammas.len() != times.len() || ys.len() != times.len() {
        return Err(Error::Dimension {
            expected: times.len(),
            got: gammas.len().min(ys.len()),
        });
    }
    if times.len() < 2 {
        return Err(Error::Input("need at least two time samples".into()));
    }
    if gammas[0].sup_displacement() > 1e-8 {
        return Err(Error::Input("path must start at the identity".into()));
    }
    let band = ys[0].band();
    let dt = times[1] - times[0];

    // Componentwise cumulative integral of Ad_gamma y.
    let mut rows = Vec::with_capacity(times.len());
    for (gamma, y) in gammas.iter().zip(ys) {
        let ad = gamma.ad_action(y, band)?;
        let mut row = Vec::with_capacity(2 * (band + 1));
        for c in ad.half_spectrum() {
            row.push(c.re);
            row.push(c.im);
        }
        rows.push(row);
    }
    let integrated = quad::cumulative_integral_vec(dt, &rows);

    let mut out = Vec::with_capacity(times.len());
    for (gamma, row) in gammas.iter().zip(&integrated) {
        let coeffs: Vec<Complex64> = row.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let w = FourierField::from_half_spectrum(coeffs)?;
        out.push(gamma.ad_action_inverse(&w, band)?);
    }
    Ok(out)
}

/// Factor a Riemannian `L^2` geodesic through a rotation: given the
/// logarithmic derivative `u_R` of a Riemannian geodesic, returns the
/// mean-zero `u_sR(t) = Ad_{rot(lambda t)} (u_R(t) - lambda)` with
/// `lambda = mean(u_R(0))`, which solves the sub-Riemannian equation
/// `u' = 3 u u_theta + 2 lambda u_theta`.
pub fn factorize_sr(
    times: &[f64],
    u_r: &[FourierField],
    residual_tol: f64,
) -> Result<(Vec<FourierField>, f64)> {
    if u_r.len() != times.len() || times.len() < 5 {
        return Err(Error::Input(
            "need matching times and at least five samples".into(),
        ));
    }
    let dt = times[1] - times[0];
    let band = u_r[0].band();

    // Verify that the input is a Riemannian geodesic: u' = 3 u u_theta.
    let mut scale: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let derivs = field_time_derivative(dt, u_r);
    for (du, u) in derivs.iter().zip(u_r) {
        let rhs = ad_transpose(u, u)?;
        residual = residual.max(du.sub(&rhs)?.max_coeff_abs());
        scale = scale.max(rhs.max_coeff_abs());
    }
    if residual > residual_tol * (1.0 + scale) {
        return Err(Error::Input(format!(
            "input is not a Riemannian geodesic: residual {residual:.3e} exceeds {residual_tol:.1e}"
        )));
    }

    let lambda = u_r[0].mean();
    let mut out = Vec::with_capacity(times.len());
    for (t, u) in times.iter().zip(u_r) {
        let mut shifted = u
            .sub(&FourierField::constant(band, lambda))?
            .shift(lambda * t);
        shifted.project_mean_zero();
        out.push(shifted);
    }
    Ok((out, lambda))
}

/// Fourth-order finite-difference time derivative of a field sequence.
pub fn field_time_derivative(dt: f64, fields: &[FourierField]) -> Vec<FourierField> {
    let band = fields[0].band();
    let n = fields.len();
    let mut rows: Vec<Vec<f64>> = vec![Vec::with_capacity(n); 2 * (band + 1)];
    for f in fields {
        for (k, c) in f.half_spectrum().iter().enumerate() {
            rows[2 * k].push(c.re);
            rows[2 * k + 1].push(c.im);
        }
    }
    let drows: Vec<Vec<f64>> = rows.iter().map(|r| quad::derivative(dt, r)).collect();
    (0..n)
        .map(|i| {
            let coeffs: Vec<Complex64> = (0..=band)
                .map(|k| Complex64::new(drows[2 * k][i], drows[2 * k + 1][i]))
                .collect();
            let mut f = FourierField::zeros(band);
            for (k, c) in coeffs.into_iter().enumerate() {
                f.set_coeff(k, c);
            }
            f
        })
        .collect()
}

/// Maximal relative drift of `(1/2) <u, u>` along a trajectory.
pub fn energy_drift(model: &ModelKind, trajectory: &Trajectory) -> Result<f64> {
    let e0 = energy(model, &trajectory.fields[0])?;
    let mut worst: f64 = 0.0;
    for f in &trajectory.fields {
        let e = energy(model, f)?;
        worst = worst.max((e - e0).abs());
    }
    Ok(worst / e0.abs().max(1e-300))
}

/// Convenience: `<u + lambda, u_theta>`-style vertical drift maximized along
/// a trajectory.
pub fn max_lambda_drift(model: &ModelKind, trajectory: &Trajectory) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in &trajectory.fields {
        let state = GeodesicState {
            u: f.clone(),
            lambda: trajectory.lambda,
        };
        worst = worst.max(lambda_drift(model, &state)?);
    }
    Ok(worst)
}

/// Maximal `|mean(u)|` along a trajectory.
pub fn max_mean(trajectory: &Trajectory) -> f64 {
    trajectory
        .fields
        .iter()
        .map(|f| f.mean().abs())
        .fold(0.0, f64::max)
}

/// Small-amplitude phase-drift measurement: the dominant-mode frequency of a
/// trajectory under the convention `u ~ cos(n theta - omega t)`, obtained by
/// a least-squares fit of the unwrapped coefficient phase.
pub fn measure_mode_frequency(trajectory: &Trajectory, n: usize) -> f64 {
    let mut phases = Vec::with_capacity(trajectory.fields.len());
    let mut prev = 0.0;
    let mut offset = 0.0;
    for (i, f) in trajectory.fields.iter().enumerate() {
        let mut ph = f.coeff(n as i64).arg();
        if i > 0 {
            while ph + offset - prev > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
            }
            while ph + offset - prev < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
            }
        }
        ph += offset;
        prev = ph;
        phases.push(ph);
    }
    // Least-squares slope of phase vs time.
    let times = &trajectory.times;
    let tm: f64 = times.iter().sum::<f64>() / times.len() as f64;
    let pm: f64 = phases.iter().sum::<f64>() / phases.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, p) in times.iter().zip(&phases) {
        num += (t - tm) * (p - pm);
        den += (t - tm) * (t - tm);
    }
    let slope = num / den;
    // c_n(t) ~ e^{-i omega t}  =>  omega = -d(arg c_n)/dt.
    -slope
}
