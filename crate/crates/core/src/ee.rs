//! Minimum bit energy and wideband slope for the low-power and wideband
//! regimes, plus the linear spectral-efficiency/bit-energy approximation.

use crate::effcap::{log_mean_exp, pairwise_sum};
use crate::error::{Error, Result};
use crate::stats::{
    gamma_kth_moment, xi_moments_large_n, GammaParams, MomentPair,
};
use crate::channel::{FadingConfig, LinkGains};
use crate::irs::PhaseMode;

const LN_2: f64 = std::f64::consts::LN_2;

/// Operating regime a metrics pair was derived for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    LowPower,
    LowPowerLargeN,
    LowPowerDiscrete,
    WidebandCaseI,
    WidebandCaseII,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::LowPower => "low_power",
            Regime::LowPowerLargeN => "low_power_large_n",
            Regime::LowPowerDiscrete => "low_power_discrete",
            Regime::WidebandCaseI => "wideband_case_i",
            Regime::WidebandCaseII => "wideband_case_ii",
        }
    }
}

/// How a metrics pair was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    MonteCarlo,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Minimum bit energy and wideband slope with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EeMetrics {
    /// Minimum `E_b/N_0`, linear scale. Zero only in saturated large-N
    /// limits.
    pub eb_n0_min: f64,
    /// Wideband slope, bit/s/Hz per 3 dB.
    pub s0: f64,
    pub regime: Regime,
    pub method: Method,
}

impl EeMetrics {
    /// Minimum bit energy in dB; `-inf` when saturated at zero.
    pub fn eb_n0_min_db(&self) -> f64 {
        10.0 * self.eb_n0_min.log10()
    }

    /// True when a limit collapsed the metrics to a sentinel value (zero
    /// minimum bit energy or unbounded slope); file writers must pair such
    /// rows with a flag column instead of emitting bare infinities.
    pub fn is_saturated(&self) -> bool {
        self.eb_n0_min == 0.0 || !self.s0.is_finite() || !self.eb_n0_min.is_finite()
    }
}

/// Metrics from the effective-capacity derivatives at the origin:
/// `Eb/N0_min = 1/Ċ_E(0)` and `S₀ = −2 Ċ_E(0)² ln2 / C̈_E(0)`.
pub fn metrics_from_derivatives(dot_c0: f64, ddot_c0: f64) -> Result<EeMetrics> {
    if !(dot_c0 > 0.0) {
        return Err(Error::domain(format!(
            "first derivative at the origin must be > 0, got {dot_c0}"
        )));
    }
    if !(ddot_c0 < 0.0) {
        return Err(Error::domain(format!(
            "second derivative at the origin must be < 0 for a defined slope, got {ddot_c0}"
        )));
    }
    Ok(EeMetrics {
        eb_n0_min: 1.0 / dot_c0,
        s0: -2.0 * dot_c0 * dot_c0 * LN_2 / ddot_c0,
        regime: Regime::LowPower,
        method: Method::MonteCarlo,
    })
}

/// Low-power metrics from the first two moments of `ξ`:
/// `Eb/N0_min = ln2 / E{ξ}` (independent of the QoS exponent) and
/// `S₀ = 2 ln2 (E{ξ})² / ((μTB + ln2) E{ξ²} − μTB (E{ξ})²)`.
pub fn low_power_metrics(moments: &MomentPair, mu_t_b: f64) -> Result<EeMetrics> {
    if !(moments.m1 > 0.0) {
        return Err(Error::domain(format!(
            "E{{xi}} must be > 0, got {}",
            moments.m1
        )));
    }
    if !(mu_t_b >= 0.0) {
        return Err(Error::domain(format!("muTB must be >= 0, got {mu_t_b}")));
    }
    let denom = (mu_t_b + LN_2) * moments.m2 - mu_t_b * moments.m1 * moments.m1;
    Ok(EeMetrics {
        eb_n0_min: LN_2 / moments.m1,
        s0: 2.0 * LN_2 * moments.m1 * moments.m1 / denom,
        regime: Regime::LowPower,
        method: Method::ClosedForm,
    })
}

/// Closed-form low-power metrics for a configured link: composes the
/// large-N composite-gain moments with [`low_power_metrics`]. Discrete mode
/// substitutes the quantized reflected-sum moments.
pub fn low_power_metrics_closed(
    gains: &LinkGains,
    fading: &FadingConfig,
    n: usize,
    mode: PhaseMode,
    mu_t_b: f64,
) -> Result<EeMetrics> {
    let moments = xi_moments_large_n(gains, fading, n, mode)?;
    let mut m = low_power_metrics(&moments, mu_t_b)?;
    m.regime = match mode {
        PhaseMode::Continuous => Regime::LowPowerLargeN,
        PhaseMode::Discrete { .. } => Regime::LowPowerDiscrete,
    };
    Ok(m)
}

/// Minimum bit energy of the direct link alone: `ln2 / (ℓ_h E{ξ_d²})`.
/// With unit-spread Nakagami fading `E{ξ_d²} = 1`, so this is `ln2/ℓ_h`;
/// a vanishing direct gain yields an infinite requirement.
pub fn non_irs_min_bit_energy(l_h: f64, m_h: f64) -> Result<f64> {
    if l_h < 0.0 {
        return Err(Error::domain(format!("l_h must be >= 0, got {l_h}")));
    }
    if l_h == 0.0 {
        return Ok(f64::INFINITY);
    }
    let d2 = crate::stats::nakagami_kth_moment(m_h, 2)?;
    Ok(LN_2 / (l_h * d2))
}

/// Exponential-tilt rate `s = μTP / (N0 N_c ln2)` of the wideband forms.
fn wideband_rate(p_over_n0: f64, n_c: f64, mu_t: f64) -> Result<f64> {
    if !(p_over_n0 > 0.0) {
        return Err(Error::domain(format!("P/N0 must be > 0, got {p_over_n0}")));
    }
    if !(n_c >= 1.0) {
        return Err(Error::domain(format!("N_c must be >= 1, got {n_c}")));
    }
    if !(mu_t >= 0.0) {
        return Err(Error::domain(format!("muT must be >= 0, got {mu_t}")));
    }
    Ok(mu_t * p_over_n0 / (n_c * LN_2))
}

/// Wideband case-I metrics from raw gain samples (bounded subchannel count,
/// coherence bandwidth growing without bound):
/// `Eb/N0_min = −(μTP/(N0 N_c)) / ln E{exp(−sξ)}` and
/// `S₀ = (2/s²) E{exp(−sξ)} (ln E{exp(−sξ)})² / E{ξ² exp(−sξ)}`,
/// with `s = μTP/(N0 N_c ln2)`. The `μ = 0` limit reduces to the low-power
/// metrics of the sample moments.
pub fn wideband_case_i_metrics_mc(
    gains: &[f64],
    p_over_n0: f64,
    n_c: f64,
    mu_t: f64,
) -> Result<EeMetrics> {
    if gains.is_empty() {
        return Err(Error::contract("wideband metrics need >= 1 gain sample"));
    }
    let s = wideband_rate(p_over_n0, n_c, mu_t)?;
    if s == 0.0 {
        let mut m = low_power_metrics(&MomentPair::from_samples(gains)?, 0.0)?;
        m.regime = Regime::WidebandCaseI;
        m.method = Method::MonteCarlo;
        return Ok(m);
    }
    // ln E{exp(-s xi)} and ln E{xi^2 exp(-s xi)}, both via log-mean-exp.
    let tilts: Vec<f64> = gains.iter().map(|&xi| -s * xi).collect();
    let log_laplace = log_mean_exp(&tilts);
    let weighted: Vec<f64> = gains
        .iter()
        .map(|&xi| if xi > 0.0 { 2.0 * xi.ln() - s * xi } else { f64::NEG_INFINITY })
        .collect();
    let log_weighted = log_mean_exp(&weighted);
    if !log_weighted.is_finite() {
        return Err(Error::domain("all gain samples are zero"));
    }
    let eb = -s * LN_2 / log_laplace;
    let s0 = 2.0 / (s * s) * log_laplace * log_laplace * (log_laplace - log_weighted).exp();
    Ok(EeMetrics {
        eb_n0_min: eb,
        s0,
        regime: Regime::WidebandCaseI,
        method: Method::MonteCarlo,
    })
}

/// Wideband case-I metrics for a Gamma-approximated composite gain:
/// `Eb/N0_min = (μTP/(N0 N_c)) / (α ln(sβ + 1))` and
/// `S₀ = 2 α (β + 1/s)² ln²(sβ + 1) / ((α+1) β²)`.
pub fn wideband_case_i_metrics_closed(
    xi: &GammaParams,
    p_over_n0: f64,
    n_c: f64,
    mu_t: f64,
) -> Result<EeMetrics> {
    let s = wideband_rate(p_over_n0, n_c, mu_t)?;
    if s == 0.0 {
        let moments = MomentPair {
            m1: gamma_kth_moment(xi, 1),
            m2: gamma_kth_moment(xi, 2),
        };
        let mut m = low_power_metrics(&moments, 0.0)?;
        m.regime = Regime::WidebandCaseI;
        return Ok(m);
    }
    let log1p_sb = (s * xi.scale).ln_1p();
    let eb = s * LN_2 / (xi.shape * log1p_sb);
    let s0 = 2.0 * xi.shape * (xi.scale + 1.0 / s).powi(2) * log1p_sb * log1p_sb
        / ((xi.shape + 1.0) * xi.scale * xi.scale);
    Ok(EeMetrics {
        eb_n0_min: eb,
        s0,
        regime: Regime::WidebandCaseI,
        method: Method::ClosedForm,
    })
}

/// Wideband case-II metrics (subchannel count growing sublinearly without
/// bound): `Eb/N0_min = ln2/E{ξ}` and `S₀ = 2(E{ξ})²/E{ξ²}`, independent of
/// the QoS exponent. Identical to the low-power metrics at `μ = 0`.
pub fn wideband_case_ii_metrics(moments: &MomentPair) -> Result<EeMetrics> {
    let mut m = low_power_metrics(moments, 0.0)?;
    m.regime = Regime::WidebandCaseII;
    Ok(m)
}

/// The wideband case-I minimum, the low-power minimum, and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenGap {
    pub wideband: f64,
    pub low_power: f64,
    pub gap: f64,
}

/// Bit-energy penalty of multipath sparsity: the wideband case-I minimum
/// exceeds the low-power minimum, with equality only for a degenerate gain
/// distribution. Both sides are evaluated on the same samples, so the gap
/// is nonnegative by Jensen's inequality on the empirical law.
pub fn jensen_gap(gains: &[f64], p_over_n0: f64, n_c: f64, mu_t: f64) -> Result<JensenGap> {
    if !(mu_t > 0.0) {
        return Err(Error::domain(format!(
            "the Jensen comparison needs mu > 0, got muT = {mu_t}"
        )));
    }
    let wideband = wideband_case_i_metrics_mc(gains, p_over_n0, n_c, mu_t)?.eb_n0_min;
    let mean = pairwise_sum(gains) / gains.len() as f64;
    if !(mean > 0.0) {
        return Err(Error::domain("mean gain must be > 0"));
    }
    let low_power = LN_2 / mean;
    let gap = wideband - low_power;
    debug_assert!(gap >= -1e-12 * low_power);
    Ok(JensenGap {
        wideband,
        low_power,
        gap,
    })
}

/// Linear approximation of the spectral-efficiency/bit-energy curve:
/// `C_E = S₀/(10 log₁₀ 2) · (Eb/N0|dB − Eb/N0_min|dB)`, clipped at zero.
pub fn linear_approx_curve(metrics: &EeMetrics, eb_n0_db_grid: &[f64]) -> Vec<(f64, f64)> {
    let three_db = 10.0 * std::f64::consts::LOG10_2;
    let min_db = metrics.eb_n0_min_db();
    eb_n0_db_grid
        .iter()
        .map(|&db| (db, (metrics.s0 / three_db * (db - min_db)).max(0.0)))
        .collect()
}
