//! Long-format CSV tables: one row per (series, SNR point, metric).

use std::fmt;
use std::str::FromStr;

use ris_linklab::montecarlo::{PointResult, SweepResult};
use ris_linklab::schemes::Scheme;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 9] = [
    "scheme", "N", "M", "snr_db", "metric", "value", "trials", "errors", "stderr",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Ber,
    Ser,
    SepExact,
    SepBound,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Ber => "ber",
            Metric::Ser => "ser",
            Metric::SepExact => "sep_exact",
            Metric::SepBound => "sep_bound",
        }
    }

    pub fn is_simulated(self) -> bool {
        matches!(self, Metric::Ber | Metric::Ser)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ber" => Ok(Metric::Ber),
            "ser" => Ok(Metric::Ser),
            "sep_exact" => Ok(Metric::SepExact),
            "sep_bound" => Ok(Metric::SepBound),
            other => Err(CliError::Csv(format!("unknown metric `{other}`"))),
        }
    }
}

/// Monte Carlo counts attached to a simulated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counts {
    pub trials: u64,
    pub errors: u64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub scheme: Scheme,
    pub n_reflectors: usize,
    pub order: usize,
    pub snr_db: f64,
    pub metric: Metric,
    pub value: f64,
    pub counts: Option<Counts>,
}

impl Row {
    pub fn analytic(
        scheme: Scheme,
        n_reflectors: usize,
        order: usize,
        snr_db: f64,
        metric: Metric,
        value: f64,
    ) -> Self {
        Self {
            scheme,
            n_reflectors,
            order,
            snr_db,
            metric,
            value,
            counts: None,
        }
    }

    fn check_finite(&self) -> Result<()> {
        let se_ok = self.counts.is_none_or(|c| c.std_error.is_finite());
        if self.value.is_finite() && self.snr_db.is_finite() && se_ok {
            Ok(())
        } else {
            Err(CliError::NonFinite(format!(
                "{} N={} M={} at {} dB ({})",
                self.scheme, self.n_reflectors, self.order, self.snr_db, self.metric
            )))
        }
    }
}

/// A BER and an SER row per point, which together carry every count of the
/// sweep.
pub fn rows_from_sweep(result: &SweepResult) -> Vec<Row> {
    let mut rows = Vec::with_capacity(2 * result.points.len());
    for p in &result.points {
        let base = Row::analytic(
            result.scheme,
            result.n_reflectors,
            result.order,
            p.snr_db,
            Metric::Ber,
            p.ber(),
        );
        rows.push(Row {
            counts: Some(Counts {
                trials: p.trials,
                errors: p.bit_errors,
                std_error: p.ber_std_error(),
            }),
            ..base
        });
        rows.push(Row {
            metric: Metric::Ser,
            value: p.ser(),
            counts: Some(Counts {
                trials: p.trials,
                errors: p.symbol_errors,
                std_error: p.ser_std_error(),
            }),
            ..base
        });
    }
    rows
}

/// Rebuilds the sweeps contained in `rows`, in order of first appearance.
pub fn sweeps_from_rows(rows: &[Row]) -> Result<Vec<SweepResult>> {
    let mut out: Vec<SweepResult> = Vec::new();
    for row in rows.iter().filter(|r| r.metric == Metric::Ser) {
        let counts = row
            .counts
            .ok_or_else(|| CliError::Csv("simulated row without counts".into()))?;
        let bits = row.order.trailing_zeros();
        let bit_errors = rows
            .iter()
            .find(|r| {
                r.metric == Metric::Ber
                    && r.scheme == row.scheme
                    && r.n_reflectors == row.n_reflectors
                    && r.order == row.order
                    && r.snr_db.to_bits() == row.snr_db.to_bits()
            })
            .and_then(|r| r.counts)
            .ok_or_else(|| CliError::Csv(format!("missing ber row at {} dB", row.snr_db)))?
            .errors;
        let point = PointResult {
            snr_db: row.snr_db,
            trials: counts.trials,
            symbol_errors: counts.errors,
            bit_errors,
            bits_per_symbol: bits,
        };
        match out.iter_mut().find(|s| {
            s.scheme == row.scheme && s.n_reflectors == row.n_reflectors && s.order == row.order
        }) {
            Some(s) => s.points.push(point),
            None => out.push(SweepResult {
                scheme: row.scheme,
                n_reflectors: row.n_reflectors,
                order: row.order,
                points: vec![point],
            }),
        }
    }
    Ok(out)
}

fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes `rows` with a header line and LF terminators.
pub fn write_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER)?;
    for row in rows {
        row.check_finite()?;
        let (trials, errors, se) = match row.counts {
            Some(c) => (
                c.trials.to_string(),
                c.errors.to_string(),
                format_float(c.std_error),
            ),
            None => Default::default(),
        };
        w.write_record([
            row.scheme.name().to_string(),
            row.n_reflectors.to_string(),
            row.order.to_string(),
            row.snr_db.to_string(),
            row.metric.name().to_string(),
            format_float(row.value),
            trials,
            errors,
            se,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Csv(e.to_string()))
}

#[derive(Deserialize)]
struct RawRow {
    scheme: String,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    snr_db: f64,
    metric: String,
    value: f64,
    trials: Option<u64>,
    errors: Option<u64>,
    stderr: Option<f64>,
}

pub fn read_csv(text: &str) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    if reader.headers()?.iter().ne(HEADER) {
        return Err(CliError::Csv("unexpected header".into()));
    }
    let mut rows = Vec::new();
    for raw in reader.deserialize::<RawRow>() {
        let raw = raw?;
        let metric: Metric = raw.metric.parse()?;
        let counts = match (raw.trials, raw.errors, raw.stderr) {
            (Some(trials), Some(errors), Some(std_error)) => Some(Counts {
                trials,
                errors,
                std_error,
            }),
            (None, None, None) => None,
            _ => return Err(CliError::Csv("partially filled count columns".into())),
        };
        if counts.is_some() != metric.is_simulated() {
            return Err(CliError::Csv(format!(
                "count columns do not fit metric {metric}"
            )));
        }
        rows.push(Row {
            scheme: raw.scheme.parse().map_err(CliError::Csv)?,
            n_reflectors: raw.n,
            order: raw.m,
            snr_db: raw.snr_db,
            metric,
            value: raw.value,
            counts,
        });
    }
    Ok(rows)
}
