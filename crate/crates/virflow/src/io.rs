//! CSV emitters for trajectories, diffeomorphism snapshots and finite
//! normal flows. All output uses '.'-decimal shortest-roundtrip floats and
//! `\n` line endings, so a fixed input yields byte-identical files.

use crate::error::Result;
use crate::euler_arnold::{energy, Lambda, ModelKind, Trajectory};
use crate::finite_sr::FiniteTrajectory;
use crate::group_flow::DiffeoPath;
use std::fmt::Write as _;

/// Spectral trajectory: `t, energy, lambda..., a0, a1, b1, a2, b2, ...`.
pub fn trajectory_csv(model: &ModelKind, trajectory: &Trajectory) -> Result<String> {
    let band = trajectory.fields[0].band();
    let mut out = String::new();
    out.push_str("t,energy");
    match trajectory.lambda {
        Lambda::Scalar(_) => out.push_str(",lambda"),
        Lambda::Pair(..) => out.push_str(",lambda1,lambda2"),
    }
    out.push_str(",a0");
    for n in 1..=band {
        let _ = write!(out, ",a{n},b{n}");
    }
    out.push('\n');
    for (t, field) in trajectory.times.iter().zip(&trajectory.fields) {
        let e = energy(model, field)?;
        let _ = write!(out, "{t},{e}");
        match trajectory.lambda {
            Lambda::Scalar(l) => {
                let _ = write!(out, ",{l}");
            }
            Lambda::Pair(l1, l2) => {
                let _ = write!(out, ",{l1},{l2}");
            }
        }
        for v in field.dense_coefficients() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Diffeomorphism snapshots: rows `t, theta_j, phi(theta_j)`.
pub fn diffeo_csv(path: &DiffeoPath) -> String {
    let mut out = String::from("t,theta,phi\n");
    for (t, d) in path.times.iter().zip(&path.diffeos) {
        let m = d.grid_size();
        for j in 0..m {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let phi = d.value(j);
            let _ = writeln!(out, "{t},{theta},{phi}");
        }
    }
    out
}

/// Finite normal flow: `t, m..., p..., H`.
pub fn finite_csv(trajectory: &FiniteTrajectory) -> String {
    let n = trajectory.points[0].len();
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",m{i}");
    }
    for i in 1..=n {
        let _ = write!(out, ",p{i}");
    }
    out.push_str(",H\n");
    for (i, t) in trajectory.times.iter().enumerate() {
        let _ = write!(out, "{t}");
        for v in &trajectory.points[i] {
            let _ = write!(out, ",{v}");
        }
        for v in &trajectory.costates[i] {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{}", trajectory.hamiltonians[i]);
    }
    out
}
