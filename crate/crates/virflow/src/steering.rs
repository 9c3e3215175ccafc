//! Constructive controllability: horizontal steering to rotations inside the
//! three-dimensional subgroup generated by `p_1, k_1`, and the two-stage
//! reduction of steering to the center of the extended group.
//!
//! Steering to a rotation is exact finite-dimensional work: a commutator
//! loop of horizontal subgroup exponentials seeds a Newton (Gauss-Newton)
//! shoot on the cover coordinates; endpoints are evaluated in closed form
//! through the cover group law, never by PDE integration. Horizontality is
//! structural: every segment generator lies in `span{X, Y}`, i.e. the
//! logarithmic derivative lies in `span{p_1, k_1}`.

use crate::error::{Error, Result};
use crate::fourier::{CocycleParams, FourierField};
use crate::group_flow::DiffeoGrid;
use crate::su11::{cover_mul, embed_fn, exp_cover, CoverElement, Su11Vector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One horizontal segment of a steering path: constant generator in the
/// subgroup algebra, run for `duration` with a smooth speed ramp that
/// vanishes at both ends.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SteeringStage {
    pub subgroup: String,
    /// Generator in `su(1,1)` coordinates `(a1, a2, a3)`.
    pub generator: Su11Vector,
    /// Exponential of the full segment in cover coordinates.
    pub cover_element: CoverElement,
    pub duration: f64,
}

/// A sampled horizontal path in the subgroup `H_1`.
#[derive(Debug, Clone)]
pub struct SteeringPath {
    pub stages: Vec<SteeringStage>,
    pub times: Vec<f64>,
    pub diffeos: Vec<DiffeoGrid>,
    /// Left logarithmic derivative at each sample; lies in `span{p_1, k_1}`.
    pub log_fields: Vec<FourierField>,
    /// Supremum distance of the endpoint to the target rotation.
    pub endpoint_error: f64,
}

/// Smooth ramp on `[0,1]` with vanishing derivative at both ends; used to
/// glue consecutive segments with a continuous, zero-at-junction speed.
fn ramp(tau: f64) -> f64 {
    tau - (2.0 * PI * tau).sin() / (2.0 * PI)
}

fn ramp_speed(tau: f64) -> f64 {
    1.0 - (2.0 * PI * tau).cos()
}

/// Endpoint on the cover of a sequence of horizontal segments
/// `(x_i, y_i) -> exp(x_i X + y_i Y)`.
fn loop_endpoint(params: &[f64]) -> CoverElement {
    let mut g = CoverElement::identity();
    for seg in params.chunks(2) {
        let v = Su11Vector::new(seg[0], seg[1], 0.0);
        g = cover_mul(&g, &exp_cover(v, 1.0));
    }
    g
}

fn residual(params: &[f64], target_s: f64) -> [f64; 3] {
    let g = loop_endpoint(params);
    [g.s - target_s, g.w.re, g.w.im]
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for c in row + 1..3 {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Gauss-Newton shoot of a four-segment horizontal loop onto the cover
/// element `(target_s, 0)`. Returns the segment parameters.
fn shoot_loop(target_s: f64, tol: f64) -> Result<Vec<f64>> {
    let delta = 2.0 * target_s; // rotation angle this loop produces
    let tau = delta.abs().sqrt().max(1e-8);
    // Commutator loop seeds; the sign of the produced rotation follows the
    // bracket [X, Y] = Z.
    let mut p: Vec<f64> = if delta >= 0.0 {
        vec![-tau, 0.0, 0.0, -tau, tau, 0.0, 0.0, tau]
    } else {
        vec![0.0, -tau, -tau, 0.0, 0.0, tau, tau, 0.0]
    };
    let norm_inf = |r: &[f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut r = residual(&p, target_s);
    let mut best = norm_inf(&r);
    for _ in 0..60 {
        if best <= tol {
            return Ok(p);
        }
        // Numerical Jacobian (central differences).
        let h = 1e-7;
        let mut jac = vec![[0.0f64; 3]; p.len()];
        for (i, row) in jac.iter_mut().enumerate() {
            let mut pp = p.clone();
            pp[i] += h;
            let rp = residual(&pp, target_s);
            pp[i] -= 2.0 * h;
            let rm = residual(&pp, target_s);
            for c in 0..3 {
                row[c] = (rp[c] - rm[c]) / (2.0 * h);
            }
        }
        // Minimum-norm Gauss-Newton step: dp = J^T (J J^T)^{-1} r.
        let mut jjt = [[0.0f64; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                jjt[a][b] = jac.iter().map(|row| row[a] * row[b]).sum();
            }
            jjt[a][a] += 1e-12;
        }
        let y = solve3(jjt, r).ok_or(Error::Steering {
            residual: best,
            detail: "singular shooting system".into(),
        })?;
        let dp: Vec<f64> = jac
            .iter()
            .map(|row| row[0] * y[0] + row[1] * y[1] + row[2] * y[2])
            .collect();
        // Backtracking on the residual norm.
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let cand: Vec<f64> = p.iter().zip(&dp).map(|(a, d)| a - step * d).collect();
            let rc = residual(&cand, target_s);
            if norm_inf(&rc) < best {
                p = cand;
                r = rc;
                best = norm_inf(&r);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if best <= tol {
        Ok(p)
    } else {
        Err(Error::Steering {
            residual: best,
            detail: format!("loop shoot stalled short of tolerance {tol:.1e}"),
        })
    }
}

/// Construct a horizontal path in `H_1` from the identity to the rotation by
/// `delta`, to endpoint tolerance `tol` (supremum over the grid). Rotations
/// up to a loop's range are reached with one commutator loop; larger angles
/// concatenate loops. Requires `|delta| < 2 pi`.
pub fn steer_to_rotation(
    delta: f64,
    tol: f64,
    grid: usize,
    band: usize,
    samples_per_stage: usize,
) -> Result<SteeringPath> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    if delta.abs() >= 2.0 * PI {
        return Err(Error::Input(
            "target rotation must satisfy |delta| < 2 pi; split larger targets".into(),
        ));
    }
    if delta == 0.0 {
        let id = DiffeoGrid::identity(grid);
        return Ok(SteeringPath {
            stages: Vec::new(),
            times: vec![0.0, 1.0],
            diffeos: vec![id.clone(), id],
            log_fields: vec![FourierField::zeros(band), FourierField::zeros(band)],
            endpoint_error: 0.0,
        });
    }

    let loops = ((delta.abs() / 0.5).ceil() as usize).max(1);
    let per_loop = delta / loops as f64;
    // Residual demand in cover coordinates: the embedding magnifies cover
    // errors by at most a factor ~2 in s and ~2 in |w|.
    let cover_tol = tol / (8.0 * loops as f64);

    let mut stages = Vec::new();
    let mut times = vec![0.0];
    let mut diffeos = vec![DiffeoGrid::identity(grid)];
    let mut log_fields = vec![FourierField::zeros(band)];
    let mut accumulated = CoverElement::identity();
    let mut t0 = 0.0;

    for _ in 0..loops {
        let params = shoot_loop(per_loop / 2.0, cover_tol)?;
        for seg in params.chunks(2) {
            let v = Su11Vector::new(seg[0], seg[1], 0.0);
            let seg_exp = exp_cover(v, 1.0);
            stages.push(SteeringStage {
                subgroup: "H1".into(),
                generator: v,
                cover_element: seg_exp,
                duration: 1.0,
            });
            // Sample the ramped segment interior plus its right endpoint.
            for j in 1..=samples_per_stage {
                let tau = j as f64 / samples_per_stage as f64;
                let g = cover_mul(&accumulated, &exp_cover(v, ramp(tau)));
                times.push(t0 + tau);
                diffeos.push(embed_fn(1, &g, grid)?);
                // d/dtau f_1(acc * exp(ramp v)): left log derivative is
                // ramp'(tau) * (x (-k_1) + y (-p_1)).
                let speed = ramp_speed(tau);
                let field = crate::su11::hn_field(1, -seg[0], -seg[1], 0.0, band).scale(speed);
                log_fields.push(field);
            }
            accumulated = cover_mul(&accumulated, &seg_exp);
            t0 += 1.0;
        }
    }

    let target = DiffeoGrid::rotation(grid, delta);
    let endpoint_error = diffeos.last().unwrap().sup_distance(&target)?;
    if endpoint_error > tol {
        return Err(Error::Steering {
            residual: endpoint_error,
            detail: "endpoint misses the target rotation".into(),
        });
    }
    Ok(SteeringPath {
        stages,
        times,
        diffeos,
        log_fields,
        endpoint_error,
    })
}

/// One stage of the center-steering plan: a horizontal excursion inside the
/// subgroup with algebra `span{(p_0, n^2 nu - mu), (p_n, 0), (k_n, 0)}`,
/// landing on the translation-by-`rotation` element of that subgroup.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CenterStage {
    pub subgroup: String,
    pub rotation: f64,
    pub center: f64,
    pub cover_element: CoverElement,
    pub duration: f64,
}

/// Two-stage plan reaching `(theta -> theta + b0, b)` in the extended group
/// through the subgroups `T_1` and `T_2`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CenterPlan {
    pub r1: f64,
    pub r2: f64,
    pub stages: Vec<CenterStage>,
}

/// Solve the two-stage decomposition of a target `(b0, b)` in the center of
/// the extended group: `b0 = r1 + r2`, `b = r1 (nu - mu) + r2 (4 nu - mu)`
/// (determinant `3 nu`). The plan runs the `T_2` stage first and
/// left-translates the `T_1` stage, glued with a vanishing-speed junction.
pub fn steer_virasoro_center(b0: f64, b: f64, params: &CocycleParams) -> Result<CenterPlan> {
    if params.nu == 0.0 {
        return Err(Error::Parameter(
            "nu = 0 gives a trivial extension; center steering needs nu != 0".into(),
        ));
    }
    let det = 3.0 * params.nu;
    let r2 = (b - b0 * (params.nu - params.mu)) / det;
    let r1 = b0 - r2;
    let stages = vec![
        CenterStage {
            subgroup: "T2".into(),
            rotation: r2,
            center: r2 * (4.0 * params.nu - params.mu),
            // rotation by r inside H_n corresponds to the cover element
            // (n r / 2, 0)
            cover_element: CoverElement::new(r2, Complex64::new(0.0, 0.0)),
            duration: 1.0,
        },
        CenterStage {
            subgroup: "T1".into(),
            rotation: r1,
            center: r1 * (params.nu - params.mu),
            cover_element: CoverElement::new(r1 / 2.0, Complex64::new(0.0, 0.0)),
            duration: 1.0,
        },
    ];
    Ok(CenterPlan { r1, r2, stages })
}

/// Re-evaluate the target reached by a center plan; exact by construction.
pub fn center_plan_target(plan: &CenterPlan, params: &CocycleParams) -> (f64, f64) {
    let b0 = plan.r1 + plan.r2;
    let b = plan.r1 * (params.nu - params.mu) + plan.r2 * (4.0 * params.nu - params.mu);
    (b0, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rotation_is_constant_path() {
        let path = steer_to_rotation(0.0, 1e-6, 64, 4, 4).unwrap();
        assert_eq!(path.endpoint_error, 0.0);
        for d in &path.diffeos {
            assert_eq!(d.sup_displacement(), 0.0);
        }
    }

    #[test]
    fn rejects_out_of_range_targets() {
        assert!(matches!(
            steer_to_rotation(7.0, 1e-4, 64, 4, 4),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn small_rotation_single_loop() {
        let path = steer_to_rotation(0.1, 1e-6, 128, 4, 8).unwrap();
        assert_eq!(path.stages.len(), 4);
        assert!(
            path.endpoint_error <= 1e-6,
            "err = {:.3e}",
            path.endpoint_error
        );
        // every sampled log field is horizontal
        for f in &path.log_fields {
            assert!(f.mean().abs() < 1e-15);
        }
    }

    #[test]
    fn negative_rotation_works() {
        let path = steer_to_rotation(-0.35, 1e-5, 128, 4, 8).unwrap();
        assert!(path.endpoint_error <= 1e-5);
    }

    #[test]
    fn larger_rotation_concatenates_loops() {
        let path = steer_to_rotation(1.3, 1e-5, 128, 4, 4).unwrap();
        assert!(path.stages.len() >= 8, "expected several loops");
        assert!(path.endpoint_error <= 1e-5);
    }

    #[test]
    fn ramp_vanishes_at_junctions() {
        assert!(ramp_speed(0.0).abs() < 1e-15);
        assert!(ramp_speed(1.0).abs() < 1e-12);
        assert!((ramp(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(ramp(0.0), 0.0);
    }

    #[test]
    fn center_plan_solves_linear_system() {
        // mu = 0, nu = 1: r1 = (4 b0 - b)/3, r2 = (b - b0)/3
        let params = CocycleParams::new(0.0, 1.0);
        let plan = steer_virasoro_center(0.9, 2.1, &params).unwrap();
        assert!((plan.r1 - (4.0 * 0.9 - 2.1) / 3.0).abs() < 1e-15);
        assert!((plan.r2 - (2.1 - 0.9) / 3.0).abs() < 1e-15);
        let (b0, b) = center_plan_target(&plan, &params);
        assert!((b0 - 0.9).abs() < 1e-15 && (b - 2.1).abs() < 1e-15);
        // zero target, zero plan
        let z = steer_virasoro_center(0.0, 0.0, &params).unwrap();
        assert_eq!(z.r1, 0.0);
        assert_eq!(z.r2, 0.0);
    }

    #[test]
    fn center_plan_requires_nontrivial_extension() {
        assert!(matches!(
            steer_virasoro_center(1.0, 1.0, &CocycleParams::new(1.0, 0.0)),
            Err(Error::Parameter(_))
        ));
    }
}
