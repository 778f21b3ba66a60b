//! Analytic and simulated curves for one (scheme, N, M) series.

use ris_linklab::analytic::{sep_exact, sep_upper_bound, AnalyticModel, SepForm, SepIntegrator};
use ris_linklab::modulation::{Constellation, ModulationKind};
use ris_linklab::montecarlo::{run_sweep, run_sweep_with_workers, SweepResult, SweepSpec};
use ris_linklab::schemes::Scheme;

use crate::error::{CliError, Result};
use crate::table::{rows_from_sweep, Metric, Row};

/// Inclusive SNR range in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl SnrGrid {
    pub fn new(start_db: f64, stop_db: f64, step_db: f64) -> Result<Self> {
        let grid = Self {
            start_db,
            stop_db,
            step_db,
        };
        if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
            return Err(CliError::Usage("SNR bounds must be finite".into()));
        }
        if step_db <= 0.0 {
            return Err(CliError::Usage("--snr-step-db must be positive".into()));
        }
        if stop_db < start_db {
            return Err(CliError::Usage(
                "--snr-stop-db must not be below --snr-start-db".into(),
            ));
        }
        if (stop_db - start_db) / step_db > 1e6 {
            return Err(CliError::Usage("SNR grid has too many points".into()));
        }
        Ok(grid)
    }

    /// Grid points `start + k·step`, computed without accumulation.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start_db + k as f64 * self.step_db)
            .collect()
    }
}

/// One curve family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Series {
    pub scheme: Scheme,
    pub n_reflectors: usize,
    pub order: usize,
}

impl Series {
    pub fn new(scheme: Scheme, n_reflectors: usize, order: usize) -> Result<Self> {
        let s = Self {
            scheme,
            n_reflectors,
            order,
        };
        s.constellation()?;
        if n_reflectors == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        Ok(s)
    }

    /// Dual-hop uses BPSK for `M = 2` and square QAM above; the access-point
    /// schemes use phase-encoded messages.
    pub fn constellation(&self) -> Result<Constellation> {
        let kind = match (self.scheme.is_access_point(), self.order) {
            (true, _) => ModulationKind::ApPhase,
            (false, 2) => ModulationKind::Psk,
            (false, _) => ModulationKind::Qam,
        };
        Constellation::new(kind, self.order).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn form(&self) -> SepForm {
        if !self.scheme.is_access_point() && self.order >= 4 {
            SepForm::Qam
        } else {
            SepForm::Psk
        }
    }

    pub fn sep(&self, integrator: &SepIntegrator, snr_db: f64) -> Result<f64> {
        let model = AnalyticModel::from_db(self.scheme, self.n_reflectors, snr_db)?;
        Ok(sep_exact(integrator, &model, self.order, self.form())?)
    }

    pub fn bound(&self, snr_db: f64) -> Result<f64> {
        let model = AnalyticModel::from_db(self.scheme, self.n_reflectors, snr_db)?;
        Ok(sep_upper_bound(&model, self.order, self.form())?)
    }
}

/// `sep_exact` rows, plus `sep_bound` rows when `with_bound` is set.
pub fn analytic_rows(
    series: Series,
    grid: &[f64],
    integrator: &SepIntegrator,
    with_bound: bool,
) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &db in grid {
        let row = |metric, value| {
            Row::analytic(
                series.scheme,
                series.n_reflectors,
                series.order,
                db,
                metric,
                value,
            )
        };
        rows.push(row(Metric::SepExact, series.sep(integrator, db)?));
        if with_bound {
            rows.push(row(Metric::SepBound, series.bound(db)?));
        }
    }
    Ok(rows)
}

/// Monte Carlo budget shared by all simulated series of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimBudget {
    pub max_trials: u64,
    pub min_errors: u64,
    pub stop_on_zero_errors: bool,
    pub chunk_size: u64,
    /// Worker threads; `None` uses the default pool size.
    pub workers: Option<usize>,
}

impl Default for SimBudget {
    fn default() -> Self {
        Self {
            max_trials: ris_linklab::montecarlo::DEFAULT_MAX_TRIALS,
            min_errors: ris_linklab::montecarlo::DEFAULT_MIN_ERRORS,
            stop_on_zero_errors: false,
            chunk_size: ris_linklab::montecarlo::DEFAULT_CHUNK_SIZE,
            workers: None,
        }
    }
}

pub fn simulate(
    series: Series,
    grid: &[f64],
    seed: u64,
    budget: &SimBudget,
) -> Result<SweepResult> {
    let mut spec = SweepSpec::new(
        series.scheme,
        series.n_reflectors,
        series.constellation()?,
        grid.to_vec(),
        seed,
    );
    spec.max_trials = budget.max_trials;
    spec.min_errors = budget.min_errors;
    spec.chunk_size = budget.chunk_size.min(budget.max_trials);
    spec.stop_on_zero_errors = budget.stop_on_zero_errors;
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let result = match budget.workers {
        Some(w) => run_sweep_with_workers(&spec, w)?,
        None => run_sweep(&spec)?,
    };
    Ok(result)
}

pub fn simulated_rows(
    series: Series,
    grid: &[f64],
    seed: u64,
    budget: &SimBudget,
) -> Result<Vec<Row>> {
    Ok(rows_from_sweep(&simulate(series, grid, seed, budget)?))
}
