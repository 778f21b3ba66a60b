//! Required-SNR inversion of analytic curves.

use ris_linklab::analytic::SepIntegrator;

use crate::error::{CliError, Result};
use crate::runs::Series;

const SEARCH_LO_DB: f64 = -200.0;
const SEARCH_HI_DB: f64 = 200.0;

/// SNR in dB at which the exact error probability of `series` equals
/// `target`, by bisection on the (decreasing) curve.
pub fn required_snr_db(series: Series, target: f64, integrator: &SepIntegrator) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(ris_linklab::Error::TargetOutOfRange(target).into());
    }
    let (mut lo, mut hi) = (SEARCH_LO_DB, SEARCH_HI_DB);
    if series.sep(integrator, lo)? < target || series.sep(integrator, hi)? > target {
        return Err(ris_linklab::Error::TargetOutOfRange(target).into());
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let p = series.sep(integrator, mid)?;
        if !p.is_finite() {
            return Err(CliError::NonFinite(format!(
                "{} at {mid} dB",
                series.scheme
            )));
        }
        if p > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Required SNR of `a` minus that of `b` at `target`; positive when `b`
/// needs less power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub snr_a_db: f64,
    pub snr_b_db: f64,
    pub gap_db: f64,
}

pub fn compare(a: Series, b: Series, target: f64, integrator: &SepIntegrator) -> Result<Gap> {
    let snr_a_db = required_snr_db(a, target, integrator)?;
    let snr_b_db = required_snr_db(b, target, integrator)?;
    Ok(Gap {
        snr_a_db,
        snr_b_db,
        gap_db: snr_a_db - snr_b_db,
    })
}
