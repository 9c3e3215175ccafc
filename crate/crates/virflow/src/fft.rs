//! Thin wrapper around rustfft with a global plan cache.
//!
//! Conventions: the grid is `theta_j = 2*pi*j/m`, the forward transform
//! returns true Fourier coefficients `c_k = (1/m) sum_j v_j e^{-i k theta_j}`
//! and `inverse` reconstructs `v_j = sum_k c_k e^{i k theta_j}` without extra
//! scaling.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

struct PlanCache {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn cache() -> &'static Mutex<PlanCache> {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PlanCache {
            forward: HashMap::new(),
            inverse: HashMap::new(),
        })
    })
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut guard = cache().lock().expect("fft plan cache poisoned");
    let map = if inverse {
        &mut guard.inverse
    } else {
        &mut guard.forward
    };
    map.entry(len)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Forward DFT of real grid samples; returns the full complex spectrum
/// normalized so that bin `k` is the Fourier coefficient of `e^{i k theta}`.
pub fn forward_real(values: &[f64]) -> Vec<Complex64> {
    let m = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(m, false).process(&mut buf);
    let scale = 1.0 / m as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse DFT of a full spectrum (bin `k` = coefficient of `e^{i k theta}`);
/// returns the real parts of the reconstructed samples.
pub fn inverse_to_real(spectrum: &mut [Complex64]) -> Vec<f64> {
    plan(spectrum.len(), true).process(spectrum);
    spectrum.iter().map(|c| c.re).collect()
}
