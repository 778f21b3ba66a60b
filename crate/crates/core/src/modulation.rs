//! Constellations, Gray labelling and maximum-likelihood detection.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulationKind {
    Psk,
    Qam,
    /// Phase book used by the surface acting as an access point: the
    /// message is carried by a common reflector phase `w_m`.
    ApPhase,
}

/// M-ary symbol set with unit average energy and Gray bit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ModulationKind,
    order: usize,
    points: Vec<Complex64>,
    phases: Option<Vec<f64>>,
    labels: Vec<u32>,
}

fn gray(i: usize) -> u32 {
    (i ^ (i >> 1)) as u32
}

impl Constellation {
    /// Builds the constellation of the given kind and order.
    ///
    /// PSK and AP phase books place point `m` at phase `2πm/M`. Square QAM
    /// uses the odd-integer lattice scaled to unit average energy, with the
    /// in-phase Gray index in the high bits and the quadrature index in the
    /// low bits.
    pub fn new(kind: ModulationKind, order: usize) -> Result<Self> {
        let invalid = Error::InvalidOrder { kind, order };
        if order < 2 || !order.is_power_of_two() {
            return Err(invalid);
        }
        match kind {
            ModulationKind::Psk | ModulationKind::ApPhase => {
                let phases: Vec<f64> = (0..order).map(|m| TAU * m as f64 / order as f64).collect();
                let points = phases
                    .iter()
                    .map(|&w| Complex64::from_polar(1.0, w))
                    .collect();
                Ok(Self {
                    kind,
                    order,
                    points,
                    phases: (kind == ModulationKind::ApPhase).then_some(phases),
                    labels: (0..order).map(gray).collect(),
                })
            }
            ModulationKind::Qam => {
                let bits = order.trailing_zeros();
                if !bits.is_multiple_of(2) {
                    return Err(invalid);
                }
                let side = 1usize << (bits / 2);
                let scale = (2.0 * (order as f64 - 1.0) / 3.0).sqrt().recip();
                let level = |i: usize| (2.0 * i as f64 - (side as f64 - 1.0)) * scale;
                let mut points = Vec::with_capacity(order);
                let mut labels = Vec::with_capacity(order);
                for i in 0..side {
                    for q in 0..side {
                        points.push(Complex64::new(level(i), level(q)));
                        labels.push((gray(i) << (bits / 2)) | gray(q));
                    }
                }
                Ok(Self {
                    kind,
                    order,
                    points,
                    phases: None,
                    labels,
                })
            }
        }
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.order.trailing_zeros()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Information phases `w_m`; only present for the AP phase book.
    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order as f64
    }
}

/// Output of [`detect_ml`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionResult {
    pub symbol_index: usize,
}

impl DetectionResult {
    /// Hamming distance between the labels of the detected and the
    /// reference symbol.
    pub fn bit_errors_vs(&self, reference: usize, constellation: &Constellation) -> u32 {
        let labels = constellation.labels();
        (labels[self.symbol_index] ^ labels[reference]).count_ones()
    }
}

/// Coherent ML detection: `argmin_m |received - sqrt(energy) * gain * x_m|²`.
///
/// Ties resolve to the lowest index.
pub fn detect_ml(
    received: Complex64,
    gain: Complex64,
    energy: f64,
    constellation: &Constellation,
) -> Result<DetectionResult> {
    if !received.is_finite() || !gain.is_finite() || !energy.is_finite() {
        return Err(Error::NonFinite);
    }
    if energy <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "energy",
            value: energy,
        });
    }
    Ok(detect_unchecked(
        received,
        gain * energy.sqrt(),
        constellation,
    ))
}

pub(crate) fn detect_unchecked(
    received: Complex64,
    scaled_gain: Complex64,
    constellation: &Constellation,
) -> DetectionResult {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (m, p) in constellation.points.iter().enumerate() {
        let d = (received - scaled_gain * p).norm_sqr();
        if d < best_dist {
            best_dist = d;
            best = m;
        }
    }
    DetectionResult { symbol_index: best }
}
