//! Quadrature and finite-difference helpers on uniform grids.

/// Cumulative integral of uniformly sampled data, fourth order.
///
/// Each interval is integrated with the cubic through the four nearest
/// samples (Adams-Moulton weights at the ends). Returns one value per
/// sample, starting at 0.
pub fn cumulative_integral(dt: f64, values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        // Trapezoid fallback for degenerate inputs.
        for i in 1..n {
            out[i] = out[i - 1] + 0.5 * dt * (values[i - 1] + values[i]);
        }
        return out;
    }
    for i in 1..n {
        let inc = if i == 1 {
            (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3]) / 24.0
        } else if i == n - 1 {
            (9.0 * values[n - 1] + 19.0 * values[n - 2] - 5.0 * values[n - 3] + values[n - 4])
                / 24.0
        } else {
            (-values[i - 2] + 13.0 * values[i - 1] + 13.0 * values[i] - values[i + 1]) / 24.0
        };
        out[i] = out[i - 1] + dt * inc;
    }
    out
}

/// Cumulative integral of a vector-valued sample sequence (same rule as
/// [`cumulative_integral`], applied componentwise).
pub fn cumulative_integral_vec(dt: f64, values: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let dim = values[0].len();
    let mut out = vec![vec![0.0; dim]; n];
    for c in 0..dim {
        let column: Vec<f64> = values.iter().map(|v| v[c]).collect();
        let integ = cumulative_integral(dt, &column);
        for (i, v) in integ.into_iter().enumerate() {
            out[i][c] = v;
        }
    }
    out
}

/// Fourth-order finite-difference derivative of uniformly sampled data.
pub fn derivative(dt: f64, values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 5 {
        // Second-order fallback.
        for i in 0..n {
            out[i] = if i == 0 {
                (values[1] - values[0]) / dt
            } else if i == n - 1 {
                (values[n - 1] - values[n - 2]) / dt
            } else {
                (values[i + 1] - values[i - 1]) / (2.0 * dt)
            };
        }
        return out;
    }
    for i in 0..n {
        out[i] = if i < 2 {
            let f = &values[i..];
            (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dt)
        } else if i >= n - 2 {
            let f = &values[..=i];
            let m = f.len();
            (25.0 * f[m - 1] - 48.0 * f[m - 2] + 36.0 * f[m - 3] - 16.0 * f[m - 4] + 3.0 * f[m - 5])
                / (12.0 * dt)
        } else {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                / (12.0 * dt)
        };
    }
    out
}

/// Trapezoid rule on a uniform periodic grid over `[0, 2*pi)`; spectrally
/// accurate for smooth periodic integrands.
pub fn periodic_trapezoid(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    values.iter().sum::<f64>() * (2.0 * std::f64::consts::PI) / m
}
