//! The four surface-assisted transmission schemes.
//!
//! | scheme           | reflector phase `φ_i` | received sample              | receiver gain |
//! |------------------|-----------------------|------------------------------|---------------|
//! | `DhIntelligent`  | `θ_i + ψ_i`           | `[Σ h_i e^{jφ_i} g_i] x + n` | `A = Σ α_i β_i` |
//! | `DhBlind`        | `0`                   | `[Σ h_i g_i] x + n`          | `H = Σ h_i g_i` |
//! | `ApIntelligent`  | `ψ_i + w_m`           | `√E_s [Σ g_i e^{jφ_i}] + n`  | `B = Σ β_i`     |
//! | `ApBlind`        | `w_m`                 | `√E_s [Σ g_i e^{jφ_i}] + n`  | `G = Σ g_i`     |
//!
//! For dual-hop schemes `x = √E_s · s` where `s` is a unit-energy
//! constellation point. The destination is assumed to know the composite
//! gain exactly in every scheme.

use std::str::FromStr;

use num_complex::Complex64;

use crate::{
    modulation::{Constellation, ModulationKind},
    rng::{ChannelRealization, StreamRng},
    Error, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    DhIntelligent,
    DhBlind,
    ApIntelligent,
    ApBlind,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::DhIntelligent,
        Scheme::DhBlind,
        Scheme::ApIntelligent,
        Scheme::ApBlind,
    ];

    pub fn is_access_point(self) -> bool {
        matches!(self, Scheme::ApIntelligent | Scheme::ApBlind)
    }

    pub fn is_intelligent(self) -> bool {
        matches!(self, Scheme::DhIntelligent | Scheme::ApIntelligent)
    }

    /// Stable lowercase name used in CSV files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::DhIntelligent => "dh_intelligent",
            Scheme::DhBlind => "dh_blind",
            Scheme::ApIntelligent => "ap_intelligent",
            Scheme::ApBlind => "ap_blind",
        }
    }

    fn accepts(self, kind: ModulationKind) -> bool {
        if self.is_access_point() {
            kind == ModulationKind::ApPhase
        } else {
            matches!(kind, ModulationKind::Psk | ModulationKind::Qam)
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == norm)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

/// Everything needed to describe one link.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    scheme: Scheme,
    n_reflectors: usize,
    constellation: Constellation,
    es: f64,
    n0: f64,
}

impl SchemeConfig {
    pub fn new(
        scheme: Scheme,
        n_reflectors: usize,
        constellation: Constellation,
        es: f64,
        n0: f64,
    ) -> Result<Self> {
        if n_reflectors == 0 {
            return Err(Error::NoReflectors);
        }
        if !scheme.accepts(constellation.kind()) {
            return Err(Error::ConstellationMismatch {
                scheme,
                kind: constellation.kind(),
            });
        }
        for (name, value) in [("es", es), ("n0", n0)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self {
            scheme,
            n_reflectors,
            constellation,
            es,
            n0,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_reflectors(&self) -> usize {
        self.n_reflectors
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    fn check_channel(&self, channel: &ChannelRealization) -> Result<()> {
        if channel.n_reflectors() != self.n_reflectors {
            return Err(Error::InvalidParameter {
                name: "channel.n_reflectors",
                value: channel.n_reflectors() as f64,
            });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        let order = self.constellation.order();
        if index >= order {
            return Err(Error::MessageOutOfRange { index, order });
        }
        Ok(())
    }

    /// Information phase `w_m` of AP message `m`.
    fn message_phase(&self, m: usize) -> f64 {
        self.constellation.phases().map_or(0.0, |w| w[m])
    }
}

/// Composite scalar channel known to the receiver (`A`, `H`, `B` or `G`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveGain(pub Complex64);

impl EffectiveGain {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Reflector phases applied by the surface.
///
/// `message_index` must be given for access-point schemes and omitted for
/// dual-hop schemes.
pub fn reflector_phases(
    config: &SchemeConfig,
    channel: &ChannelRealization,
    message_index: Option<usize>,
) -> Result<Vec<f64>> {
    config.check_channel(channel)?;
    let mut out = Vec::with_capacity(config.n_reflectors);
    fill_phases(config, channel, message_index, &mut out)?;
    Ok(out)
}

fn fill_phases(
    config: &SchemeConfig,
    channel: &ChannelRealization,
    message_index: Option<usize>,
    out: &mut Vec<f64>,
) -> Result<()> {
    out.clear();
    let ap = config.scheme.is_access_point();
    let w = match (ap, message_index) {
        (true, Some(m)) => {
            config.check_index(m)?;
            config.message_phase(m)
        }
        (true, None) => return Err(Error::MessageIndex("access-point schemes need a message")),
        (false, Some(_)) => return Err(Error::MessageIndex("dual-hop schemes take no message")),
        (false, None) => 0.0,
    };
    match config.scheme {
        Scheme::DhIntelligent => {
            out.extend(channel.theta.iter().zip(&channel.psi).map(|(t, p)| t + p))
        }
        Scheme::DhBlind => out.resize(config.n_reflectors, 0.0),
        Scheme::ApIntelligent => out.extend(channel.psi.iter().map(|p| p + w)),
        Scheme::ApBlind => out.resize(config.n_reflectors, w),
    }
    Ok(())
}

/// Received sample and receiver gain for one symbol (dual-hop) or message
/// (access point) index.
pub fn transmit(
    config: &SchemeConfig,
    channel: &ChannelRealization,
    symbol_index: usize,
    noise: Complex64,
) -> Result<(Complex64, EffectiveGain)> {
    let phases = reflector_phases(
        config,
        channel,
        config.scheme.is_access_point().then_some(symbol_index),
    )?;
    config.check_index(symbol_index)?;
    let sqrt_es = config.es.sqrt();
    if config.scheme.is_access_point() {
        let surface: Complex64 = channel
            .g
            .iter()
            .zip(&phases)
            .map(|(g, &phi)| g * Complex64::cis(phi))
            .sum();
        let gain = match config.scheme {
            Scheme::ApIntelligent => Complex64::new(channel.beta.iter().sum(), 0.0),
            _ => channel.g.iter().sum(),
        };
        Ok((surface * sqrt_es + noise, EffectiveGain(gain)))
    } else {
        let cascade: Complex64 = channel
            .h
            .iter()
            .zip(&channel.g)
            .zip(&phases)
            .map(|((h, g), &phi)| h * g * Complex64::cis(phi))
            .sum();
        let gain = match config.scheme {
            Scheme::DhIntelligent => Complex64::new(
                channel
                    .alpha
                    .iter()
                    .zip(&channel.beta)
                    .map(|(a, b)| a * b)
                    .sum(),
                0.0,
            ),
            _ => cascade,
        };
        let x = config.constellation.points()[symbol_index] * sqrt_es;
        Ok((cascade * x + noise, EffectiveGain(gain)))
    }
}

/// Draws a channel from `rng` (same draw order as
/// [`sample_channel`](crate::rng::sample_channel)) and returns the noiseless
/// received sample and the receiver gain.
///
/// Reflector phases are applied as unit phasors, `e^{jθ} = h*/|h|` and
/// `e^{jψ} = g*/|g|`, which avoids per-element trigonometry in the Monte
/// Carlo inner loop.
pub(crate) fn sampled_link(
    config: &SchemeConfig,
    rng: &mut StreamRng,
    index: usize,
) -> (Complex64, EffectiveGain) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut gain = Complex64::new(0.0, 0.0);
    let message = match config.constellation.phases() {
        Some(w) => Complex64::cis(w[index]),
        None => Complex64::new(1.0, 0.0),
    };
    for _ in 0..config.n_reflectors {
        let h = rng.standard_complex();
        let g = rng.standard_complex();
        match config.scheme {
            Scheme::DhIntelligent => {
                let (a, b) = (h.norm_sqr().sqrt(), g.norm_sqr().sqrt());
                let phasor = (h * g).conj() / (a * b);
                sum += h * g * phasor;
                gain.re += a * b;
            }
            Scheme::DhBlind => {
                sum += h * g;
            }
            Scheme::ApIntelligent => {
                let b = g.norm_sqr().sqrt();
                sum += g * (g.conj() / b) * message;
                gain.re += b;
            }
            Scheme::ApBlind => {
                sum += g * message;
                gain += g;
            }
        }
    }
    let sqrt_es = config.es.sqrt();
    match config.scheme {
        Scheme::DhIntelligent => {
            let x = config.constellation.points()[index] * sqrt_es;
            (sum * x, EffectiveGain(gain))
        }
        Scheme::DhBlind => {
            let x = config.constellation.points()[index] * sqrt_es;
            (sum * x, EffectiveGain(sum))
        }
        Scheme::ApIntelligent | Scheme::ApBlind => (sum * sqrt_es, EffectiveGain(gain)),
    }
}

/// `|gain|² E_s / N_0`.
pub fn instantaneous_snr(config: &SchemeConfig, gain: EffectiveGain) -> f64 {
    gain.0.norm_sqr() * config.es / config.n0
}
