//! Error-performance toolkit for transmission through large intelligent
//! surfaces (LIS).
//!
//! Two independent evaluation paths are provided for the same four link
//! schemes (dual-hop and access-point, each intelligent or blind):
//!
//! * [`analytic`] evaluates MGF-based symbol error probabilities by
//!   Gauss–Legendre quadrature, together with upper bounds, asymptotic
//!   exponents and average SNR.
//! * [`montecarlo`] simulates the links trial by trial using
//!   [`rng`], [`modulation`] and [`schemes`], with results that are
//!   independent of the number of worker threads.

pub mod analytic;
pub mod error;
pub mod modulation;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod schemes;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Converts a value in decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
