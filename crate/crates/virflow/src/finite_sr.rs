//! Finite-dimensional sub-Riemannian machinery on a single coordinate chart:
//! normal geodesics from an orthonormal frame via the sub-Riemannian
//! Hamiltonian `(1/2) sum_{j<=k} p_j^2`, the frame-coefficient adjoint, and
//! the quadratic endpoint defect that witnesses semi-rigidity of the
//! Martinet line.

use crate::error::{Error, Result};
use crate::quad;
use std::sync::Arc;

/// A smooth vector field on the chart, given as a callback.
pub type FrameField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Callback returning the flattened connection coefficients
/// `gamma[i][j][l] = g(nabla_{X_i} X_j, X_l)` at a point (layout
/// `i * n^2 + j * n + l`).
pub type GammaCallback = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Sub-Riemannian structure given by an orthonormal frame: the first
/// `horizontal_rank` fields span the horizontal distribution, the metric is
/// the one making the whole frame orthonormal.
#[derive(Clone)]
pub struct FrameSR {
    pub dim: usize,
    pub horizontal_rank: usize,
    frame: Vec<FrameField>,
    gamma: Option<GammaCallback>,
    fd_step: f64,
}

impl FrameSR {
    pub fn new(dim: usize, horizontal_rank: usize, frame: Vec<FrameField>) -> Result<Self> {
        if frame.len() != dim || horizontal_rank == 0 || horizontal_rank > dim {
            return Err(Error::Parameter(format!(
                "need {dim} frame fields and 1 <= k <= n, got {} fields, k = {horizontal_rank}",
                frame.len()
            )));
        }
        Ok(Self {
            dim,
            horizontal_rank,
            frame,
            gamma: None,
            fd_step: 1e-6,
        })
    }

    pub fn with_gamma(mut self, gamma: GammaCallback) -> Self {
        self.gamma = Some(gamma);
        self
    }

    /// The Heisenberg frame `X = dx - (y/2) dz`, `Y = dy + (x/2) dz`,
    /// `Z = dz` with horizontal rank 2.
    pub fn heisenberg() -> Self {
        let x: FrameField = Arc::new(|m: &[f64]| vec![1.0, 0.0, -m[1] / 2.0]);
        let y: FrameField = Arc::new(|m: &[f64]| vec![0.0, 1.0, m[0] / 2.0]);
        let z: FrameField = Arc::new(|_: &[f64]| vec![0.0, 0.0, 1.0]);
        Self::new(3, 2, vec![x, y, z]).expect("valid frame")
    }

    /// The Martinet frame `X = dx - (y^2/2) dz`, `Y = dy`, `Z = dz` with
    /// horizontal rank 2.
    pub fn martinet() -> Self {
        let x: FrameField = Arc::new(|m: &[f64]| vec![1.0, 0.0, -m[1] * m[1] / 2.0]);
        let y: FrameField = Arc::new(|_: &[f64]| vec![0.0, 1.0, 0.0]);
        let z: FrameField = Arc::new(|_: &[f64]| vec![0.0, 0.0, 1.0]);
        Self::new(3, 2, vec![x, y, z]).expect("valid frame")
    }

    pub fn frame_at(&self, m: &[f64]) -> Vec<Vec<f64>> {
        self.frame.iter().map(|f| f(m)).collect()
    }

    /// Express a coordinate vector in the frame basis (solves the frame
    /// system); fails on a degenerate frame.
    pub fn to_frame_components(&self, m: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let cols = self.frame_at(m);
        solve_columns(&cols, v)
    }

    fn commutator(&self, i: usize, j: usize, m: &[f64]) -> Vec<f64> {
        // [X_i, X_j]^a = X_i^b d_b X_j^a - X_j^b d_b X_i^a via central
        // differences along the frame directions.
        let h = self.fd_step;
        let n = self.dim;
        let xi = self.frame[i](m);
        let xj = self.frame[j](m);
        let dir_deriv = |field: usize, dir: &[f64]| -> Vec<f64> {
            let mut mp = m.to_vec();
            let mut mm = m.to_vec();
            for a in 0..n {
                mp[a] += h * dir[a];
                mm[a] -= h * dir[a];
            }
            let fp = self.frame[field](&mp);
            let fm = self.frame[field](&mm);
            (0..n).map(|a| (fp[a] - fm[a]) / (2.0 * h)).collect()
        };
        let dj_along_i = dir_deriv(j, &xi);
        let di_along_j = dir_deriv(i, &xj);
        (0..n).map(|a| dj_along_i[a] - di_along_j[a]).collect()
    }

    /// Antisymmetrized connection coefficients
    /// `c[i][j][l] = gamma_{ij}^l - gamma_{ji}^l = g([X_i, X_j], X_l)`,
    /// flattened as `i * n^2 + j * n + l`. Uses the user callback when
    /// supplied, a finite-difference commutator otherwise.
    pub fn structure_coefficients(&self, m: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        let mut c = vec![0.0; n * n * n];
        if let Some(gamma) = &self.gamma {
            let g = gamma(m);
            if g.len() != n * n * n {
                return Err(Error::Parameter(format!(
                    "gamma callback must return {} entries",
                    n * n * n
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        c[i * n * n + j * n + l] =
                            g[i * n * n + j * n + l] - g[j * n * n + i * n + l];
                    }
                }
            }
            return Ok(c);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let comm = self.commutator(i, j, m);
                let comps = self.to_frame_components(m, &comm)?;
                for l in 0..n {
                    c[i * n * n + j * n + l] = comps[l];
                    c[j * n * n + i * n + l] = -comps[l];
                }
            }
        }
        Ok(c)
    }
}

#[allow(clippy::needless_range_loop)]
fn solve_columns(cols: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for r in 0..n {
        for (c, col) in cols.iter().enumerate() {
            a[r][c] = col[r];
        }
        a[r][n] = rhs[r];
    }
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-10 {
            return Err(Error::Geometry(
                "frame degenerate (near-singular frame matrix)".into(),
            ));
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..=n {
                a[row][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = a[row][n];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Point and frame-components of the costate.
#[derive(Debug, Clone)]
pub struct CotangentState {
    pub point: Vec<f64>,
    pub costate: Vec<f64>,
}

/// Point on a Martinet trajectory.
#[derive(Debug, Clone, Copy)]
pub struct MartinetState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct FiniteTrajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub costates: Vec<Vec<f64>>,
    pub hamiltonians: Vec<f64>,
}

fn hamiltonian(k: usize, p: &[f64]) -> f64 {
    0.5 * p[..k].iter().map(|v| v * v).sum::<f64>()
}

/// Integrate the normal geodesic system of the sub-Riemannian Hamiltonian
/// `H = (1/2) sum_{j<=k} p_j^2` in frame coordinates:
/// `m' = sum_{j<=k} p_j X_j(m)`,
/// `p_i' = -sum_{j<=k} sum_l p_j p_l (gamma_{ij}^l - gamma_{ji}^l)`.
pub fn sr_normal_flow(
    sys: &FrameSR,
    s0: &CotangentState,
    dt: f64,
    steps: usize,
) -> Result<FiniteTrajectory> {
    if s0.point.len() != sys.dim || s0.costate.len() != sys.dim {
        return Err(Error::Dimension {
            expected: sys.dim,
            got: s0.point.len().min(s0.costate.len()),
        });
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::Parameter(format!("dt = {dt} must be > 0")));
    }
    let n = sys.dim;
    let k = sys.horizontal_rank;
    let rhs = |state: &[f64]| -> Result<Vec<f64>> {
        let (m, p) = state.split_at(n);
        let frame = sys.frame_at(m);
        let c = sys.structure_coefficients(m)?;
        let mut out = vec![0.0; 2 * n];
        for j in 0..k {
            for a in 0..n {
                out[a] += p[j] * frame[j][a];
            }
        }
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..k {
                for l in 0..n {
                    acc += p[j] * p[l] * c[i * n * n + j * n + l];
                }
            }
            out[n + i] = -acc;
        }
        Ok(out)
    };

    let mut state: Vec<f64> = s0.point.iter().chain(s0.costate.iter()).cloned().collect();
    let mut times = vec![0.0];
    let mut points = vec![s0.point.clone()];
    let mut costates = vec![s0.costate.clone()];
    let mut hamiltonians = vec![hamiltonian(k, &s0.costate)];
    let axpy = |s: &[f64], f: f64, d: &[f64]| -> Vec<f64> {
        s.iter().zip(d).map(|(a, b)| a + f * b).collect()
    };
    for step in 0..steps {
        let k1 = rhs(&state)?;
        let k2 = rhs(&axpy(&state, dt / 2.0, &k1))?;
        let k3 = rhs(&axpy(&state, dt / 2.0, &k2))?;
        let k4 = rhs(&axpy(&state, dt, &k3))?;
        for a in 0..2 * n {
            state[a] += dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        }
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                t: step as f64 * dt,
                detail: "NaN in normal flow".into(),
            });
        }
        times.push((step + 1) as f64 * dt);
        points.push(state[..n].to_vec());
        costates.push(state[n..].to_vec());
        hamiltonians.push(hamiltonian(k, &state[n..]));
    }
    Ok(FiniteTrajectory {
        times,
        points,
        costates,
        hamiltonians,
    })
}

/// Frame-coefficient adjoint `a^T(y) x` with components
/// `sum_{j,l} x_l y_j (gamma_{ij}^l - gamma_{ji}^l)`.
pub fn frame_adjoint(sys: &FrameSR, m: &[f64], y: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let n = sys.dim;
    if y.len() != n || x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: y.len().min(x.len()),
        });
    }
    let c = sys.structure_coefficients(m)?;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            for l in 0..n {
                acc += x[l] * y[j] * c[i * n * n + j * n + l];
            }
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Result of the Martinet variation experiment.
#[derive(Debug, Clone)]
pub struct MartinetVariation {
    /// Endpoint defect `z^s(1)`; strictly negative for nonzero `v`,
    /// with `z^s(1)/s^2 -> -(1/2) int v^2`.
    pub endpoint_z: f64,
    /// Residual of the linearized horizontality condition for the induced
    /// variational field along the singular line (forces `w = 0`).
    pub field_residual: f64,
    /// The varied horizontal curve `(t, s v(t), z^s(t))`.
    pub path: Vec<MartinetState>,
}

/// Horizontal variation of the Martinet singular line `(t, 0, 0)`:
/// `x^s = t`, `y^s = s v(t)`, and `z^s` integrated from the horizontality
/// constraint `z' = -(1/2) y^2 x'`. Returns the endpoint defect and the
/// residual of the variational-field condition
/// `w' = -(1/2) y^2 u' - y v x'` along the line.
pub fn martinet_variation(
    v: &dyn Fn(f64) -> f64,
    s: f64,
    samples: usize,
) -> Result<MartinetVariation> {
    if samples < 8 {
        return Err(Error::Input("need at least 8 samples".into()));
    }
    let v0 = v(0.0);
    let v1 = v(1.0);
    if v0.abs() > 1e-10 || v1.abs() > 1e-10 {
        return Err(Error::Input(format!(
            "variation profile must vanish at both ends, got v(0) = {v0}, v(1) = {v1}"
        )));
    }
    let dt = 1.0 / (samples - 1) as f64;
    let ts: Vec<f64> = (0..samples).map(|i| i as f64 * dt).collect();
    let z_of = |sv: f64| -> Vec<f64> {
        let integrand: Vec<f64> = ts.iter().map(|&t| -0.5 * (sv * v(t)).powi(2)).collect();
        quad::cumulative_integral(dt, &integrand)
    };
    let z_plus = z_of(s);
    let z_minus = z_of(-s);
    let path: Vec<MartinetState> = ts
        .iter()
        .zip(&z_plus)
        .map(|(&t, &z)| MartinetState {
            x: t,
            y: s * v(t),
            z,
        })
        .collect();
    // Variational field along the line: u = 0, v = v(t),
    // w(t) = d/ds z^s |_{s=0} (computed symmetrically; identically zero).
    let w: Vec<f64> = z_plus
        .iter()
        .zip(&z_minus)
        .map(|(zp, zm)| (zp - zm) / (2.0 * s))
        .collect();
    let wdot = quad::derivative(dt, &w);
    // Along the line y = 0, so the right side of the condition vanishes and
    // the residual is |w'|.
    let field_residual = wdot.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(MartinetVariation {
        endpoint_z: *z_plus.last().unwrap(),
        field_residual,
        path,
    })
}

/// Max violation of the horizontality constraint `z' = -(1/2) y^2 x'` along
/// a sampled Martinet trajectory.
pub fn martinet_horizontality_residual(path: &[MartinetState], dt: f64) -> f64 {
    let xs: Vec<f64> = path.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = path.iter().map(|p| p.y).collect();
    let zs: Vec<f64> = path.iter().map(|p| p.z).collect();
    let xd = quad::derivative(dt, &xs);
    let zd = quad::derivative(dt, &zs);
    (0..path.len())
        .map(|i| (zd[i] + 0.5 * ys[i] * ys[i] * xd[i]).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_costate_is_stationary() {
        let sys = FrameSR::heisenberg();
        let s0 = CotangentState {
            point: vec![0.1, -0.2, 0.3],
            costate: vec![0.0, 0.0, 0.0],
        };
        let traj = sr_normal_flow(&sys, &s0, 1e-2, 50).unwrap();
        let last = traj.points.last().unwrap();
        for (a, b) in last.iter().zip(&s0.point) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn martinet_with_zero_vertical_costate_is_straight() {
        let sys = FrameSR::martinet();
        let s0 = CotangentState {
            point: vec![0.0, 0.0, 0.0],
            costate: vec![0.7, 0.4, 0.0],
        };
        let traj = sr_normal_flow(&sys, &s0, 1e-3, 1000).unwrap();
        let last = traj.points.last().unwrap();
        assert!((last[0] - 0.7).abs() < 1e-9);
        assert!((last[1] - 0.4).abs() < 1e-9);
        // costates stay put
        let pl = traj.costates.last().unwrap();
        assert!((pl[0] - 0.7).abs() < 1e-10 && (pl[1] - 0.4).abs() < 1e-10);
    }

    #[test]
    fn hamiltonian_is_conserved() {
        let sys = FrameSR::heisenberg();
        let s0 = CotangentState {
            point: vec![0.0, 0.0, 0.0],
            costate: vec![1.0, 0.3, 2.0],
        };
        let traj = sr_normal_flow(&sys, &s0, 1e-3, 1000).unwrap();
        let h0 = traj.hamiltonians[0];
        for h in &traj.hamiltonians {
            assert!((h - h0).abs() / h0 < 1e-8);
        }
    }

    #[test]
    fn flat_frame_has_zero_adjoint() {
        // Coordinate frame on R^3: all commutators vanish.
        let e1: FrameField = Arc::new(|_: &[f64]| vec![1.0, 0.0, 0.0]);
        let e2: FrameField = Arc::new(|_: &[f64]| vec![0.0, 1.0, 0.0]);
        let e3: FrameField = Arc::new(|_: &[f64]| vec![0.0, 0.0, 1.0]);
        let sys = FrameSR::new(3, 2, vec![e1, e2, e3]).unwrap();
        let a =
            frame_adjoint(&sys, &[0.3, 0.4, -0.2], &[1.0, 2.0, 3.0], &[0.5, -1.0, 2.0]).unwrap();
        for v in a {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_frame_is_rejected() {
        let e1: FrameField = Arc::new(|_: &[f64]| vec![1.0, 0.0]);
        let e2: FrameField = Arc::new(|_: &[f64]| vec![2.0, 0.0]);
        let sys = FrameSR::new(2, 1, vec![e1, e2]).unwrap();
        assert!(matches!(
            sys.structure_coefficients(&[0.0, 0.0]),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn martinet_variation_zero_profile() {
        let out = martinet_variation(&|_t| 0.0, 1e-2, 101).unwrap();
        assert_eq!(out.endpoint_z, 0.0);
        assert!(out.field_residual < 1e-14);
    }

    #[test]
    fn martinet_variation_rejects_bad_boundary() {
        assert!(matches!(
            martinet_variation(&|t| t, 1e-2, 101),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn martinet_variation_sin_profile_quarter() {
        // v = sin(pi t): int v^2 = 1/2, so z/s^2 -> -1/4.
        let s = 1e-2;
        let out = martinet_variation(&|t| (std::f64::consts::PI * t).sin(), s, 401).unwrap();
        let ratio = out.endpoint_z / (s * s);
        assert!((ratio + 0.25).abs() < 0.0025, "ratio = {ratio}");
        assert!(out.endpoint_z < 0.0);
        // path respects the horizontality constraint
        let res = martinet_horizontality_residual(&out.path, 1.0 / 400.0);
        assert!(res < 1e-8, "residual {res:.3e}");
    }
}
