//! Reproducible sampling of Rayleigh fading channels and AWGN.
//!
//! Every unit of parallel work owns an [`RngStream`], an immutable
//! `(seed, stream_id)` pair. A stream expands into a ChaCha8 generator whose
//! key is derived from the seed and whose 64-bit stream number is the
//! `stream_id`, so the samples drawn for a chunk depend only on the pair and
//! never on which worker processes it or when.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Stream owned by trial chunk `chunk` of SNR point `point`.
    pub fn for_chunk(seed: u64, point: u32, chunk: u32) -> Self {
        Self::new(seed, (u64::from(point) << 32) | u64::from(chunk))
    }

    /// Creates a generator positioned at the start of this stream.
    pub fn generator(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        StreamRng { rng }
    }
}

/// Generator positioned somewhere inside an [`RngStream`].
#[derive(Debug, Clone)]
pub struct StreamRng {
    rng: ChaCha8Rng,
}

impl StreamRng {
    /// Draws from CN(0, 1): real and imaginary parts each N(0, 1/2).
    pub fn standard_complex(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    }

    /// Uniformly distributed index in `0..n`.
    pub fn uniform_index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }
}

/// One draw of the per-reflector fading coefficients.
///
/// Phases follow the `h = alpha * exp(-j theta)` convention, i.e. `theta` is
/// the negated argument of `h` wrapped into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Source to surface coefficients.
    pub h: Vec<Complex64>,
    /// Surface to destination coefficients.
    pub g: Vec<Complex64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    pub psi: Vec<f64>,
}

impl ChannelRealization {
    /// Builds a realization from explicit coefficients.
    pub fn from_coefficients(h: Vec<Complex64>, g: Vec<Complex64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::NoReflectors);
        }
        if h.len() != g.len() {
            return Err(Error::InvalidParameter {
                name: "g.len()",
                value: g.len() as f64,
            });
        }
        if h.iter().chain(&g).any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut out = Self::with_capacity(h.len());
        out.h = h;
        out.g = g;
        out.derive_polar();
        Ok(out)
    }

    fn with_capacity(n: usize) -> Self {
        Self {
            h: Vec::with_capacity(n),
            g: Vec::with_capacity(n),
            alpha: Vec::with_capacity(n),
            beta: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            psi: Vec::with_capacity(n),
        }
    }

    pub fn n_reflectors(&self) -> usize {
        self.h.len()
    }

    fn derive_polar(&mut self) {
        self.alpha.clear();
        self.theta.clear();
        self.beta.clear();
        self.psi.clear();
        for z in &self.h {
            self.alpha.push(z.norm());
            self.theta.push(negated_phase(*z));
        }
        for z in &self.g {
            self.beta.push(z.norm());
            self.psi.push(negated_phase(*z));
        }
    }
}

/// `-arg(z)` wrapped into `[0, 2π)`.
fn negated_phase(z: Complex64) -> f64 {
    let p = (-z.arg()).rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// Draws an i.i.d. CN(0, 1) channel for `n_reflectors` surface elements.
pub fn sample_channel(n_reflectors: usize, rng: &mut StreamRng) -> Result<ChannelRealization> {
    if n_reflectors == 0 {
        return Err(Error::NoReflectors);
    }
    let mut out = ChannelRealization::with_capacity(n_reflectors);
    for _ in 0..n_reflectors {
        out.h.push(rng.standard_complex());
        out.g.push(rng.standard_complex());
    }
    out.derive_polar();
    Ok(out)
}

/// Draws circularly-symmetric complex Gaussian noise with variance `n0`.
pub fn sample_noise(n0: f64, rng: &mut StreamRng) -> Result<Complex64> {
    if !n0.is_finite() || n0 <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "n0",
            value: n0,
        });
    }
    Ok(rng.standard_complex() * n0.sqrt())
}
