//! MGF-based error probability analysis.
//!
//! Under the central limit theorem the receiver gain of the intelligent
//! schemes is Gaussian (`A ~ N(Nπ/4, N(1-π²/16))` for dual-hop,
//! `B ~ N(N√π/2, N(4-π)/4)` for the access point), so the instantaneous SNR
//! is a scaled non-central chi-square variable with one degree of freedom.
//! For the blind schemes the gain is `CN(0, N)` and the SNR is exponential.
//! Symbol error probabilities follow from the finite-range MGF integrals for
//! M-PSK and square M-QAM.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::{Arc, OnceLock};

use crate::{
    quadrature::{GaussLegendre, DEFAULT_NODES},
    schemes::Scheme,
    Error, Result,
};

const PI2: f64 = PI * PI;

/// Parameters of the SNR distribution for one `(scheme, N, E_s/N_0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticModel {
    scheme: Scheme,
    n_reflectors: usize,
    snr: f64,
}

/// Shape of the instantaneous-SNR MGF, per unit `E_s/N_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MgfParams {
    /// `M(s) = (1 - s·v·ρ)^(-1/2) exp(s·μ²·ρ / (1 - s·v·ρ))` with
    /// `μ² = mean_square`, `v = variance_term` (twice the gain variance) and
    /// `ρ = E_s/N_0`.
    NoncentralChiSquare {
        mean_square: f64,
        variance_term: f64,
    },
    /// `M(s) = (1 - s·scale)^(-1)`, `scale = N·E_s/N_0`.
    Exponential { scale: f64 },
}

impl AnalyticModel {
    pub fn new(scheme: Scheme, n_reflectors: usize, snr: f64) -> Result<Self> {
        if n_reflectors == 0 {
            return Err(Error::NoReflectors);
        }
        if !snr.is_finite() || snr <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "snr",
                value: snr,
            });
        }
        Ok(Self {
            scheme,
            n_reflectors,
            snr,
        })
    }

    /// Model at an SNR given in dB.
    pub fn from_db(scheme: Scheme, n_reflectors: usize, snr_db: f64) -> Result<Self> {
        Self::new(scheme, n_reflectors, crate::db_to_linear(snr_db))
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_reflectors(&self) -> usize {
        self.n_reflectors
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn mgf_params(&self) -> MgfParams {
        let n = self.n_reflectors as f64;
        match self.scheme {
            Scheme::DhIntelligent => MgfParams::NoncentralChiSquare {
                mean_square: n * n * PI2 / 16.0,
                variance_term: n * (16.0 - PI2) / 8.0,
            },
            Scheme::ApIntelligent => MgfParams::NoncentralChiSquare {
                mean_square: n * n * PI / 4.0,
                variance_term: n * (4.0 - PI) / 2.0,
            },
            Scheme::DhBlind | Scheme::ApBlind => MgfParams::Exponential {
                scale: n * self.snr,
            },
        }
    }

    /// `ln M_γ(s)` for `s ≤ 0`, without range checks.
    fn ln_mgf_unchecked(&self, s: f64) -> f64 {
        match self.mgf_params() {
            MgfParams::NoncentralChiSquare {
                mean_square,
                variance_term,
            } => {
                let d = 1.0 - s * variance_term * self.snr;
                -0.5 * d.ln() + s * mean_square * self.snr / d
            }
            MgfParams::Exponential { scale } => -(-s * scale).ln_1p(),
        }
    }
}

/// Logarithm of the SNR moment generating function.
pub fn ln_mgf(model: &AnalyticModel, s: f64) -> Result<f64> {
    if s.is_nan() {
        return Err(Error::NonFinite);
    }
    if s > 0.0 {
        return Err(Error::PositiveMgfArgument(s));
    }
    Ok(model.ln_mgf_unchecked(s))
}

/// `M_γ(s) = E[exp(sγ)]` for `s ≤ 0`.
///
/// Evaluated through its logarithm so large exponents underflow cleanly to
/// zero instead of producing `inf * 0`.
pub fn mgf(model: &AnalyticModel, s: f64) -> Result<f64> {
    ln_mgf(model, s).map(f64::exp)
}

fn default_rule() -> &'static Arc<GaussLegendre> {
    static RULE: OnceLock<Arc<GaussLegendre>> = OnceLock::new();
    RULE.get_or_init(|| Arc::new(GaussLegendre::new(DEFAULT_NODES).expect("default rule is valid")))
}

/// Tunable quadrature for the SEP integrals.
#[derive(Debug, Clone)]
pub struct SepIntegrator {
    rule: Arc<GaussLegendre>,
}

impl Default for SepIntegrator {
    fn default() -> Self {
        Self {
            rule: default_rule().clone(),
        }
    }
}

impl SepIntegrator {
    pub fn with_nodes(node_count: usize) -> Result<Self> {
        Ok(Self {
            rule: Arc::new(GaussLegendre::new(node_count)?),
        })
    }

    pub fn node_count(&self) -> usize {
        self.rule.node_count()
    }

    /// `∫_0^upper M_γ(-c / sin²η) dη`.
    ///
    /// At low SNR the integrand rises from 0 to ~1 within `sin η ~ √(c·k)`,
    /// where `k` is the smallest SNR scale of the MGF, so the mesh is graded
    /// from that width outwards.
    fn mgf_integral(&self, model: &AnalyticModel, c: f64, upper: f64) -> f64 {
        let k = match model.mgf_params() {
            MgfParams::NoncentralChiSquare {
                mean_square,
                variance_term,
            } => mean_square.min(variance_term) * model.snr,
            MgfParams::Exponential { scale } => scale,
        };
        let layer = (c * k).sqrt().min(1.0).asin();
        self.rule.integrate_graded(upper, layer, |eta| {
            let s2 = eta.sin().powi(2);
            if s2 == 0.0 {
                return 0.0;
            }
            model.ln_mgf_unchecked(-c / s2).exp()
        })
    }

    /// Average SEP of M-ary phase signalling:
    /// `(1/π) ∫_0^{(M-1)π/M} M_γ(-sin²(π/M) / sin²η) dη`.
    ///
    /// Covers M-PSK over the dual-hop schemes and the phase-book signalling
    /// of the access-point schemes.
    pub fn sep_mpsk(&self, model: &AnalyticModel, order: usize) -> Result<f64> {
        check_psk_order(order)?;
        let m = order as f64;
        let upper = (m - 1.0) * PI / m;
        let c = (PI / m).sin().powi(2);
        Ok(clamp_probability(self.mgf_integral(model, c, upper) / PI))
    }

    /// Average SEP of square M-QAM over a dual-hop scheme.
    pub fn sep_mqam(&self, model: &AnalyticModel, order: usize) -> Result<f64> {
        let q = qam_factor(model, order)?;
        let c = 1.5 / (order as f64 - 1.0);
        let i1 = self.mgf_integral(model, c, FRAC_PI_2);
        let i2 = self.mgf_integral(model, c, FRAC_PI_4);
        Ok(clamp_probability(4.0 / PI * q * i1 - 4.0 / PI * q * q * i2))
    }
}

fn check_psk_order(order: usize) -> Result<()> {
    if order < 2 {
        return Err(Error::InvalidOrder {
            kind: crate::modulation::ModulationKind::Psk,
            order,
        });
    }
    Ok(())
}

/// `1 - 1/√M` after validating a square QAM order for a dual-hop model.
fn qam_factor(model: &AnalyticModel, order: usize) -> Result<f64> {
    if model.scheme.is_access_point() {
        return Err(Error::Unsupported(
            "QAM is only defined for dual-hop schemes",
        ));
    }
    let bits = order.trailing_zeros();
    if order < 4 || !order.is_power_of_two() || !bits.is_multiple_of(2) {
        return Err(Error::InvalidOrder {
            kind: crate::modulation::ModulationKind::Qam,
            order,
        });
    }
    Ok(1.0 - (order as f64).sqrt().recip())
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// [`SepIntegrator::sep_mpsk`] with the default 256-node rule.
pub fn sep_mpsk(model: &AnalyticModel, order: usize) -> Result<f64> {
    SepIntegrator::default().sep_mpsk(model, order)
}

/// [`SepIntegrator::sep_mqam`] with the default 256-node rule.
pub fn sep_mqam(model: &AnalyticModel, order: usize) -> Result<f64> {
    SepIntegrator::default().sep_mqam(model, order)
}

/// Which integral a closed-form bound should dominate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepForm {
    Psk,
    Qam,
}

/// Upper bound obtained by replacing each integrand with its value at the
/// right end of the integration range.
///
/// * PSK: `((M-1)/M) · M_γ(-sin²(π/M))`; for M = 2 this is `½ M_γ(-1)`.
/// * QAM: `2q·M_γ(-c) - q²·M_γ(-2c)` with `q = 1 - 1/√M`,
///   `c = 3/(2(M-1))`.
pub fn sep_upper_bound(model: &AnalyticModel, order: usize, form: SepForm) -> Result<f64> {
    match form {
        SepForm::Psk => {
            check_psk_order(order)?;
            let m = order as f64;
            let c = (PI / m).sin().powi(2);
            Ok(clamp_probability(
                (m - 1.0) / m * model.ln_mgf_unchecked(-c).exp(),
            ))
        }
        SepForm::Qam => {
            let q = qam_factor(model, order)?;
            let c = 1.5 / (order as f64 - 1.0);
            let a = model.ln_mgf_unchecked(-c).exp();
            let b = model.ln_mgf_unchecked(-2.0 * c).exp();
            Ok(clamp_probability(2.0 * q * a - q * q * b))
        }
    }
}

/// Asymptotic regimes of the error curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `N·E_s/N_0 ≪ 10`: `ln P_e ≈ -c·E_s/N_0 + const`.
    Waterfall,
    /// `N·E_s/N_0 ≫ 1`: `P_e ∝ (κ·E_s/N_0)^(-1/2) · exp(K)`.
    Saturation,
}

/// Asymptotic decay law of an error curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymptote {
    Waterfall {
        /// `c` in `ln P_e ≈ -c · E_s/N_0`.
        exponent: f64,
    },
    Saturation {
        /// Power of `E_s/N_0` in the prefactor (always `-1/2`).
        snr_power: f64,
        /// `κ = N(16-π²)/8`, the scale inside the prefactor.
        snr_scale: f64,
        /// `K = -Nπ² / (2(16-π²))`, the SNR-independent exponent.
        log_constant: f64,
    },
}

impl Asymptote {
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            Asymptote::Waterfall { exponent } => Some(exponent),
            Asymptote::Saturation { .. } => None,
        }
    }
}

/// Asymptotic law for an intelligent scheme.
///
/// Dual-hop orders M ≥ 4 are taken as square QAM; access-point orders use
/// the phase book.
pub fn asymptote(model: &AnalyticModel, order: usize, regime: Regime) -> Result<Asymptote> {
    let n = model.n_reflectors as f64;
    check_psk_order(order)?;
    let m = order as f64;
    match (regime, model.scheme) {
        (Regime::Waterfall, Scheme::DhIntelligent) => {
            let exponent = if order == 2 {
                n * n * PI2 / 16.0
            } else {
                qam_factor(model, order)?;
                3.0 * n * n * PI2 / (32.0 * (m - 1.0))
            };
            Ok(Asymptote::Waterfall { exponent })
        }
        (Regime::Waterfall, Scheme::ApIntelligent) => Ok(Asymptote::Waterfall {
            exponent: (PI / m).sin().powi(2) * n * n * PI / 4.0,
        }),
        (Regime::Saturation, Scheme::DhIntelligent) if order == 2 => Ok(Asymptote::Saturation {
            snr_power: -0.5,
            snr_scale: n * (16.0 - PI2) / 8.0,
            log_constant: -n * PI2 / (2.0 * (16.0 - PI2)),
        }),
        (Regime::Saturation, _) => Err(Error::Unsupported(
            "saturation law is only available for binary dual-hop intelligent transmission",
        )),
        (Regime::Waterfall, _) => Err(Error::Unsupported(
            "waterfall law is only available for intelligent schemes",
        )),
    }
}

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Mean and variance of the pairwise decision statistic
/// `D = E_s g²(1 - cos(w_l - w_k)) + Re{n* √E_s g (e^{jw_k} - e^{jw_l})}`
/// for a unit noise density.
pub fn pairwise_statistic(model: &AnalyticModel, w_k: f64, w_l: f64, gain: f64) -> (f64, f64) {
    let m = model.snr * gain * gain * (1.0 - (w_l - w_k).cos());
    (m, m)
}

/// Conditional pairwise error probability of confusing message `w_k` with
/// `w_l` given the receiver gain magnitude (`B` or `|G|`).
pub fn cpep(model: &AnalyticModel, w_k: f64, w_l: f64, gain: f64) -> f64 {
    let (mean, var) = pairwise_statistic(model, w_k, w_l, gain);
    if var <= 0.0 {
        return 0.5;
    }
    q_function(mean / var.sqrt())
}

/// Average received SNR of the intelligent dual-hop scheme:
/// `(N²π² + N(16-π²)) E_s / (16 N_0)`.
pub fn average_snr(model: &AnalyticModel) -> Result<f64> {
    if model.scheme != Scheme::DhIntelligent {
        return Err(Error::Unsupported(
            "closed-form average SNR is only available for the intelligent dual-hop scheme",
        ));
    }
    let n = model.n_reflectors as f64;
    Ok((n * n * PI2 + n * (16.0 - PI2)) * model.snr / 16.0)
}

/// Exact (integral) error probability used for curve overlays: PSK/AP
/// signalling uses the M-PSK integral, dual-hop with `form = Qam` the QAM
/// integral.
pub fn sep_exact(
    integrator: &SepIntegrator,
    model: &AnalyticModel,
    order: usize,
    form: SepForm,
) -> Result<f64> {
    match form {
        SepForm::Psk => integrator.sep_mpsk(model, order),
        SepForm::Qam => integrator.sep_mqam(model, order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(s: Scheme, n: usize, snr: f64) -> AnalyticModel {
        AnalyticModel::new(s, n, snr).unwrap()
    }

    #[test]
    fn model_validation() {
        assert_eq!(
            AnalyticModel::new(Scheme::DhBlind, 0, 1.0),
            Err(Error::NoReflectors)
        );
        assert!(AnalyticModel::new(Scheme::DhBlind, 1, 0.0).is_err());
        assert!(AnalyticModel::new(Scheme::DhBlind, 1, f64::INFINITY).is_err());
    }

    #[test]
    fn mgf_normalization_and_domain() {
        for s in Scheme::ALL {
            let m = model(s, 16, 0.3);
            assert_eq!(mgf(&m, 0.0).unwrap(), 1.0);
            assert_eq!(mgf(&m, 0.5), Err(Error::PositiveMgfArgument(0.5)));
        }
    }

    #[test]
    fn blind_mgf_value() {
        let m = model(Scheme::DhBlind, 1, 1.0);
        assert!((mgf(&m, -1.0).unwrap() - 0.5).abs() < 1e-15);
        let m = model(Scheme::ApBlind, 4, 0.25);
        assert!((mgf(&m, -1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mgf_params_match_gain_moments() {
        let n = 9.0;
        match model(Scheme::ApIntelligent, 9, 1.0).mgf_params() {
            MgfParams::NoncentralChiSquare {
                mean_square,
                variance_term,
            } => {
                let m_b = n * PI.sqrt() / 2.0;
                let var_b = n * (4.0 - PI) / 4.0;
                assert!((mean_square - m_b * m_b).abs() < 1e-12);
                assert!((variance_term - 2.0 * var_b).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mgf_underflows_to_zero() {
        let m = model(Scheme::DhIntelligent, 4096, 1.0);
        assert!(ln_mgf(&m, -1.0).unwrap() < -3000.0);
        let v = mgf(&m, -1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn blind_binary_closed_form() {
        let r: f64 = 3.0;
        let closed = 0.5 * (1.0 - (r / (1.0 + r)).sqrt());
        assert!((closed - 0.0669873).abs() < 1e-7);
        let got = sep_mpsk(&model(Scheme::DhBlind, 3, 1.0), 2).unwrap();
        assert!((got - closed).abs() < 1e-10);
    }

    #[test]
    fn zero_snr_limits() {
        for s in Scheme::ALL {
            let m = model(s, 4, 1e-20);
            assert!((sep_mpsk(&m, 2).unwrap() - 0.5).abs() < 1e-9);
            assert!((sep_upper_bound(&m, 2, SepForm::Psk).unwrap() - 0.5).abs() < 1e-9);
        }
        let m = model(Scheme::DhIntelligent, 4, 1e-20);
        assert!((sep_mqam(&m, 4).unwrap() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn qam_rejections() {
        let m = model(Scheme::DhIntelligent, 4, 1.0);
        for order in [2, 8, 32, 6] {
            assert!(sep_mqam(&m, order).is_err(), "{order}");
        }
        let ap = model(Scheme::ApIntelligent, 4, 1.0);
        assert!(sep_mqam(&ap, 16).is_err());
        assert!(sep_upper_bound(&ap, 16, SepForm::Qam).is_err());
        assert!(sep_mpsk(&m, 1).is_err());
    }

    #[test]
    fn cpep_values() {
        let m = model(Scheme::ApIntelligent, 4, 2.0);
        assert_eq!(cpep(&m, 0.3, 0.3, 5.0), 0.5);
        let got = cpep(&m, 0.0, PI, 1.0);
        assert!((got - 0.022750131948179).abs() < 1e-12, "{got}");
    }

    #[test]
    fn q_function_reference_points() {
        assert_eq!(q_function(0.0), 0.5);
        assert!((q_function(1.0) - 0.158655253931457).abs() < 1e-14);
        assert!((q_function(-1.0) - 0.841344746068543).abs() < 1e-14);
        assert!((q_function(6.0) - 9.865876450377e-10).abs() < 1e-21);
    }

    #[test]
    fn average_snr_values() {
        let one = average_snr(&model(Scheme::DhIntelligent, 1, 1.0)).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        let sixteen = average_snr(&model(Scheme::DhIntelligent, 16, 1.0)).unwrap();
        assert!((sixteen - (15.0 * PI2 + 16.0)).abs() < 1e-12);
        assert!((sixteen - 164.04).abs() < 0.01);
        assert!(average_snr(&model(Scheme::ApIntelligent, 16, 1.0)).is_err());
        let a = average_snr(&model(Scheme::DhIntelligent, 1024, 1.0)).unwrap();
        let b = average_snr(&model(Scheme::DhIntelligent, 4096, 1.0)).unwrap();
        assert!((b / a - 16.0).abs() < 0.01);
    }

    #[test]
    fn asymptote_exponents() {
        let dh1 = asymptote(&model(Scheme::DhIntelligent, 1, 1.0), 2, Regime::Waterfall).unwrap();
        assert!((dh1.exponent().unwrap() - PI2 / 16.0).abs() < 1e-15);

        let n = 40;
        let dh = asymptote(&model(Scheme::DhIntelligent, n, 1.0), 2, Regime::Waterfall)
            .unwrap()
            .exponent()
            .unwrap();
        let ap = asymptote(&model(Scheme::ApIntelligent, n, 1.0), 2, Regime::Waterfall)
            .unwrap()
            .exponent()
            .unwrap();
        assert!((ap / dh - 4.0 / PI).abs() < 1e-12);
        assert!((crate::linear_to_db(ap / dh) - 1.049).abs() < 1e-3);

        let dh2 = asymptote(
            &model(Scheme::DhIntelligent, 2 * n, 1.0),
            2,
            Regime::Waterfall,
        )
        .unwrap()
        .exponent()
        .unwrap();
        assert!((dh2 / dh - 4.0).abs() < 1e-12);
        assert!((crate::linear_to_db(dh2 / dh) - 6.0206).abs() < 1e-4);

        let qam = asymptote(&model(Scheme::DhIntelligent, 8, 1.0), 16, Regime::Waterfall)
            .unwrap()
            .exponent()
            .unwrap();
        assert!((qam - 3.0 * 64.0 * PI2 / (32.0 * 15.0)).abs() < 1e-12);

        let ap8 = asymptote(&model(Scheme::ApIntelligent, 8, 1.0), 8, Regime::Waterfall)
            .unwrap()
            .exponent()
            .unwrap();
        assert!((ap8 - (PI / 8.0).sin().powi(2) * 64.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn asymptote_rejections() {
        let blind = model(Scheme::DhBlind, 8, 1.0);
        assert!(asymptote(&blind, 2, Regime::Waterfall).is_err());
        let ap = model(Scheme::ApIntelligent, 8, 1.0);
        assert!(asymptote(&ap, 2, Regime::Saturation).is_err());
        let dh = model(Scheme::DhIntelligent, 8, 1.0);
        assert!(asymptote(&dh, 4, Regime::Saturation).is_err());
        match asymptote(&dh, 2, Regime::Saturation).unwrap() {
            Asymptote::Saturation {
                snr_power,
                snr_scale,
                log_constant,
            } => {
                assert_eq!(snr_power, -0.5);
                assert!((snr_scale - (16.0 - PI2)).abs() < 1e-12);
                assert!((log_constant + 8.0 * PI2 / (2.0 * (16.0 - PI2))).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
