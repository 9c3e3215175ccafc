//! Numerical engine for sub-Riemannian geometry on the group of circle
//! diffeomorphisms and its central extension.
//!
//! The crate is organized around five subsystems:
//!
//! - [`fourier`]: band-limited vector fields on the circle and their algebra
//!   (brackets, Hilbert transform, cocycles, inner products, metric adjoints);
//! - [`euler_arnold`]: right-hand sides and time integration for the normal
//!   geodesic equations of five invariant metrics, plus the transport
//!   inversion and the Riemannian/sub-Riemannian factorization;
//! - [`group_flow`]: grid-sampled diffeomorphisms, group operations, flow
//!   reconstruction from logarithmic derivatives and the central lift;
//! - [`su11`] / [`steering`]: exact `su(1,1)` subgroup theory inside the
//!   diffeomorphism group and constructive horizontal steering;
//! - [`finite_sr`]: finite-dimensional sub-Riemannian normal flows from
//!   orthonormal frames and the Martinet variation witness.
//!
//! [`checks`] packages the acceptance criteria as a machine-checkable suite.

pub mod checks;
pub mod error;
pub mod euler_arnold;
pub(crate) mod fft;
pub mod finite_sr;
pub mod fourier;
pub mod group_flow;
pub mod io;
pub mod oracles;
pub mod quad;
pub mod steering;
pub mod su11;

pub use error::{Error, Result};
