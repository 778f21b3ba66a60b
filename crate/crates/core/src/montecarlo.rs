//! Monte Carlo error-rate sweeps.
//!
//! Each SNR point is split into fixed-size chunks of trials. Chunk `c` of
//! point `p` draws from its own [`RngStream`], chunks are evaluated in
//! parallel waves, and the per-chunk counts are folded in chunk order until
//! the error target is reached. The fold stops at the same chunk no matter
//! how many chunks were evaluated speculatively, so the result is identical
//! for any worker count.

use rayon::prelude::*;

use crate::{
    db_to_linear,
    modulation::{detect_unchecked, Constellation},
    rng::RngStream,
    schemes::{sampled_link, Scheme, SchemeConfig},
    Error, Result,
};

pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;
pub const DEFAULT_MIN_ERRORS: u64 = 200;
pub const DEFAULT_CHUNK_SIZE: u64 = 10_000;

/// Description of one simulated curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub n_reflectors: usize,
    pub constellation: Constellation,
    /// `E_s/N_0` grid in dB, strictly increasing.
    pub snr_grid_db: Vec<f64>,
    pub max_trials: u64,
    pub min_errors: u64,
    pub seed: u64,
    pub chunk_size: u64,
    /// Skip the remaining grid points once a point ends with zero errors.
    pub stop_on_zero_errors: bool,
    /// Test hook: transmit without noise.
    pub noise_free: bool,
}

impl SweepSpec {
    pub fn new(
        scheme: Scheme,
        n_reflectors: usize,
        constellation: Constellation,
        snr_grid_db: Vec<f64>,
        seed: u64,
    ) -> Self {
        Self {
            scheme,
            n_reflectors,
            constellation,
            snr_grid_db,
            max_trials: DEFAULT_MAX_TRIALS,
            min_errors: DEFAULT_MIN_ERRORS,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            stop_on_zero_errors: false,
            noise_free: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chunk_size == 0 || self.max_trials < self.chunk_size {
            return Err(Error::InvalidSweep(
                "max_trials must be at least chunk_size",
            ));
        }
        if self.min_errors == 0 {
            return Err(Error::InvalidSweep("min_errors must be at least 1"));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidSweep("SNR grid is empty"));
        }
        if self.snr_grid_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSweep("SNR grid must be strictly increasing"));
        }
        if self.snr_grid_db.len() > u32::MAX as usize
            || self.max_trials.div_ceil(self.chunk_size) > u64::from(u32::MAX)
        {
            return Err(Error::InvalidSweep("too many points or chunks"));
        }
        self.config_at(self.snr_grid_db[0]).map(|_| ())
    }

    fn config_at(&self, snr_db: f64) -> Result<SchemeConfig> {
        SchemeConfig::new(
            self.scheme,
            self.n_reflectors,
            self.constellation.clone(),
            db_to_linear(snr_db),
            1.0,
        )
    }
}

/// Error statistics at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub snr_db: f64,
    pub trials: u64,
    pub symbol_errors: u64,
    pub bit_errors: u64,
    pub bits_per_symbol: u32,
}

impl PointResult {
    pub fn ser(&self) -> f64 {
        self.symbol_errors as f64 / self.trials as f64
    }

    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits() as f64
    }

    fn bits(&self) -> u64 {
        self.trials * u64::from(self.bits_per_symbol)
    }

    /// Binomial standard error of the SER.
    pub fn ser_std_error(&self) -> f64 {
        binomial_std_error(self.ser(), self.trials)
    }

    /// Binomial standard error of the BER, treating bits as independent.
    pub fn ber_std_error(&self) -> f64 {
        binomial_std_error(self.ber(), self.bits())
    }

    /// Headline metric: BER for binary signalling, SER otherwise.
    pub fn metric(&self) -> Metric {
        if self.bits_per_symbol == 1 {
            Metric::Ber
        } else {
            Metric::Ser
        }
    }

    /// `(value, errors, std_error)` of the headline metric.
    pub fn headline(&self) -> (f64, u64, f64) {
        match self.metric() {
            Metric::Ber => (self.ber(), self.bit_errors, self.ber_std_error()),
            Metric::Ser => (self.ser(), self.symbol_errors, self.ser_std_error()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Ber,
    Ser,
}

/// `√(p(1-p)/n)`.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Result of a full sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: Scheme,
    pub n_reflectors: usize,
    pub order: usize,
    pub points: Vec<PointResult>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    trials: u64,
    symbol_errors: u64,
    bit_errors: u64,
}

/// Number of worker threads: `RIS_LINKLAB_THREADS` if set, otherwise the
/// available parallelism.
pub fn default_workers() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var("RIS_LINKLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(available)
}

/// Runs `spec` with [`default_workers`] threads.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with_workers(spec, default_workers())
}

/// Runs `spec` on a dedicated pool of `workers` threads.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|_| Error::InvalidSweep("could not start worker pool"))?;
    let wave = 2 * workers;
    let n_chunks = spec.max_trials.div_ceil(spec.chunk_size);
    let mut points = Vec::with_capacity(spec.snr_grid_db.len());

    for (p, &snr_db) in spec.snr_grid_db.iter().enumerate() {
        let config = spec.config_at(snr_db)?;
        let mut total = Counts::default();
        let mut next = 0u64;
        'point: while next < n_chunks {
            let end = (next + wave as u64).min(n_chunks);
            let batch: Vec<Counts> = pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map(|c| {
                        let trials = spec.chunk_size.min(spec.max_trials - c * spec.chunk_size);
                        let stream = RngStream::for_chunk(spec.seed, p as u32, c as u32);
                        run_chunk(&config, stream, trials, spec.noise_free)
                    })
                    .collect()
            });
            for counts in batch {
                total.trials += counts.trials;
                total.symbol_errors += counts.symbol_errors;
                total.bit_errors += counts.bit_errors;
                if total.symbol_errors >= spec.min_errors {
                    break 'point;
                }
            }
            next = end;
        }
        points.push(PointResult {
            snr_db,
            trials: total.trials,
            symbol_errors: total.symbol_errors,
            bit_errors: total.bit_errors,
            bits_per_symbol: spec.constellation.bits_per_symbol(),
        });
        if spec.stop_on_zero_errors && total.symbol_errors == 0 {
            break;
        }
    }

    Ok(SweepResult {
        scheme: spec.scheme,
        n_reflectors: spec.n_reflectors,
        order: spec.constellation.order(),
        points,
    })
}

/// One chunk of independent trials: fresh channel, uniformly drawn symbol
/// and fresh noise per trial.
fn run_chunk(config: &SchemeConfig, stream: RngStream, trials: u64, noise_free: bool) -> Counts {
    let mut rng = stream.generator();
    let constellation = config.constellation();
    let order = constellation.order();
    let sqrt_es = config.es().sqrt();
    let noise_scale = config.n0().sqrt();
    let mut counts = Counts {
        trials,
        ..Counts::default()
    };
    for _ in 0..trials {
        let sent = rng.uniform_index(order);
        let (signal, gain) = sampled_link(config, &mut rng, sent);
        let noise = rng.standard_complex() * noise_scale;
        let received = if noise_free { signal } else { signal + noise };
        let detected = detect_unchecked(received, gain.value() * sqrt_es, constellation);
        if detected.symbol_index != sent {
            counts.symbol_errors += 1;
            counts.bit_errors += u64::from(detected.bit_errors_vs(sent, constellation));
        }
    }
    counts
}

/// Normal-approximation binomial confidence interval on the headline
/// metric, clamped to `[0, 1]`.
pub fn confidence_interval(point: &PointResult, level: f64) -> Result<(f64, f64)> {
    if point.trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            value: level,
        });
    }
    let (p, _, se) = point.headline();
    let z = normal_quantile(0.5 + 0.5 * level);
    Ok(((p - z * se).max(0.0), (p + z * se).min(1.0)))
}

/// Standard normal quantile by bisection on the tail function.
fn normal_quantile(prob: f64) -> f64 {
    let tail = 1.0 - prob;
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if crate::analytic::q_function(mid) > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::ModulationKind;

    fn bpsk() -> Constellation {
        Constellation::new(ModulationKind::Psk, 2).unwrap()
    }

    fn point(trials: u64, errors: u64) -> PointResult {
        PointResult {
            snr_db: 0.0,
            trials,
            symbol_errors: errors,
            bit_errors: errors,
            bits_per_symbol: 1,
        }
    }

    #[test]
    fn quantile_95() {
        assert!((normal_quantile(0.975) - 1.959963984540054).abs() < 1e-12);
    }

    #[test]
    fn interval_clamps() {
        let (lo, _) = confidence_interval(&point(1_000_000, 0), 0.95).unwrap();
        assert_eq!(lo, 0.0);
        let (_, hi) = confidence_interval(&point(1_000, 1_000), 0.95).unwrap();
        assert_eq!(hi, 1.0);
        let (lo, hi) = confidence_interval(&point(10_000, 5_000), 0.95).unwrap();
        assert!((0.5 * (hi - lo) - 0.0098).abs() < 1e-5);
        assert!(confidence_interval(&point(0, 0), 0.95).is_err());
    }

    #[test]
    fn point_statistics() {
        let p = PointResult {
            snr_db: 1.0,
            trials: 100,
            symbol_errors: 10,
            bit_errors: 12,
            bits_per_symbol: 2,
        };
        assert_eq!(p.ser(), 0.1);
        assert_eq!(p.ber(), 0.06);
        assert_eq!(p.metric(), Metric::Ser);
        assert!((p.ser_std_error() - (0.1f64 * 0.9 / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let base = SweepSpec::new(Scheme::DhBlind, 2, bpsk(), vec![0.0, 1.0], 1);
        assert!(base.validate().is_ok());
        let mut s = base.clone();
        s.max_trials = 10;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.min_errors = 0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.snr_grid_db = vec![1.0, 1.0];
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.snr_grid_db.clear();
        assert!(s.validate().is_err());
        let mut s = base;
        s.scheme = Scheme::ApBlind;
        assert!(matches!(
            s.validate(),
            Err(Error::ConstellationMismatch { .. })
        ));
    }

    #[test]
    fn noise_free_has_no_errors() {
        for (scheme, kind, m) in [
            (Scheme::DhIntelligent, ModulationKind::Qam, 16),
            (Scheme::DhBlind, ModulationKind::Psk, 2),
            (Scheme::ApIntelligent, ModulationKind::ApPhase, 8),
            (Scheme::ApBlind, ModulationKind::ApPhase, 2),
        ] {
            let mut spec = SweepSpec::new(
                scheme,
                4,
                Constellation::new(kind, m).unwrap(),
                vec![-10.0],
                9,
            );
            spec.noise_free = true;
            spec.max_trials = 10_000;
            spec.chunk_size = 2_500;
            let r = run_sweep_with_workers(&spec, 2).unwrap();
            assert_eq!(r.points[0].trials, 10_000);
            assert_eq!(r.points[0].symbol_errors, 0, "{scheme:?}");
            assert_eq!(r.points[0].ber(), 0.0);
        }
    }

    #[test]
    fn stops_at_error_target_and_on_zero() {
        let mut spec = SweepSpec::new(Scheme::DhBlind, 1, bpsk(), vec![0.0, 60.0, 70.0], 3);
        spec.max_trials = 4_000;
        spec.chunk_size = 100;
        spec.min_errors = 50;
        spec.stop_on_zero_errors = true;
        let r = run_sweep_with_workers(&spec, 1).unwrap();
        let first = r.points[0];
        assert!(first.symbol_errors >= 50 && first.trials < 4_000);
        assert_eq!(first.trials % 100, 0);
        assert!(r.points.len() <= 3);
        if r.points[1].symbol_errors == 0 {
            assert_eq!(r.points.len(), 2);
        }
    }
}
