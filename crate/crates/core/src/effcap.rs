//! Monte-Carlo effective capacity and its derivatives at the zero-SNR
//! origin.
//!
//! The exponential moment is evaluated through a shifted log-mean-exp; the
//! QoS exponent times block length reaches a few hundred at typical
//! parameters, which underflows a naive mean of exponentials. All sample
//! reductions use indexed pairwise summation so results are bit-stable
//! regardless of how the caller parallelizes sample generation.

use crate::error::{Error, Result};
use crate::stats::MomentPair;

const LN_2: f64 = std::f64::consts::LN_2;

/// Statistical QoS constraint and block parameters: exponent `μ` (1/bit),
/// block duration `T` (s), bandwidth `B` (Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosConfig {
    pub mu: f64,
    pub block_duration_t: f64,
    pub bandwidth_b: f64,
}

impl QosConfig {
    pub fn new(mu: f64, block_duration_t: f64, bandwidth_b: f64) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(Error::domain(format!("mu must be >= 0, got {mu}")));
        }
        if !(block_duration_t > 0.0) || !(bandwidth_b > 0.0) {
            return Err(Error::domain(format!(
                "block duration and bandwidth must be > 0, got T = {block_duration_t}, B = {bandwidth_b}"
            )));
        }
        Ok(QosConfig {
            mu,
            block_duration_t,
            bandwidth_b,
        })
    }

    /// Dimensionless exponent `μTB`.
    pub fn mu_t_b(&self) -> f64 {
        self.mu * self.block_duration_t * self.bandwidth_b
    }
}

/// How the number of resolvable subchannels scales with bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubchannelGrowth {
    /// Rich multipath: `N_c` grows linearly, `B_c` fixed; low-power results
    /// carry over unchanged.
    Rich,
    /// Sparse multipath, bounded subchannel count: `N_c` fixed, `B_c` grows.
    SparseCaseI,
    /// Sparse multipath, sublinear growth: both `N_c` and `B_c` grow.
    SparseCaseII,
}

/// Wideband operating point: `P/N0` (Hz), subchannel count `N_c`, coherence
/// bandwidth `B_c` (Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidebandConfig {
    pub p_over_n0: f64,
    pub n_c: f64,
    pub b_c: f64,
    pub growth: SubchannelGrowth,
}

impl WidebandConfig {
    pub fn new(p_over_n0: f64, n_c: f64, b_c: f64, growth: SubchannelGrowth) -> Result<Self> {
        if !(p_over_n0 > 0.0) {
            return Err(Error::domain(format!(
                "P/N0 must be > 0, got {p_over_n0}"
            )));
        }
        if !(n_c >= 1.0) {
            return Err(Error::domain(format!("N_c must be >= 1, got {n_c}")));
        }
        if !(b_c > 0.0) {
            return Err(Error::domain(format!("B_c must be > 0, got {b_c}")));
        }
        Ok(WidebandConfig {
            p_over_n0,
            n_c,
            b_c,
            growth,
        })
    }

    /// Per-subchannel SNR `P / (N0 N_c B_c)`.
    pub fn subchannel_snr(&self) -> f64 {
        self.p_over_n0 / (self.n_c * self.b_c)
    }
}

/// Deterministic pairwise summation; the reduction tree depends only on the
/// slice length, never on thread scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `ln(mean(exp(t_i)))` with the maximum exponent shifted out.
pub fn log_mean_exp(exponents: &[f64]) -> f64 {
    debug_assert!(!exponents.is_empty());
    let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = exponents.iter().map(|t| (t - max).exp()).collect();
    max + (pairwise_sum(&shifted) / exponents.len() as f64).ln()
}

/// Normalized effective capacity (bit/s/Hz) over gain samples:
/// `−(1/μTB) ln E{exp(−μTB log₂(1 + SNR ξ))}`, with the `μTB = 0` case
/// evaluated as the ergodic mean of `log₂(1 + SNR ξ)`.
///
/// Negative `snr` is accepted as long as `1 + snr·ξ` stays positive for
/// every sample; derivative probes at the origin rely on this.
pub fn effective_capacity_mc(gains: &[f64], snr: f64, mu_t_b: f64) -> Result<f64> {
    if gains.is_empty() {
        return Err(Error::contract("effective capacity needs >= 1 gain sample"));
    }
    if !(mu_t_b >= 0.0) {
        return Err(Error::domain(format!("muTB must be >= 0, got {mu_t_b}")));
    }
    let rates: Vec<f64> = gains.iter().map(|&xi| (snr * xi).ln_1p() / LN_2).collect();
    if rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::domain(format!(
            "1 + snr*xi must be positive for every sample (snr = {snr})"
        )));
    }
    if mu_t_b == 0.0 {
        return Ok(pairwise_sum(&rates) / rates.len() as f64);
    }
    let exponents: Vec<f64> = rates.iter().map(|r| -mu_t_b * r).collect();
    Ok(-log_mean_exp(&exponents) / mu_t_b)
}

/// Normalized effective capacity (bit/s/Hz) in the wideband regime as a
/// function of the coherence bandwidth: exponent `μTB_c` and per-subchannel
/// SNR `P/(N0 N_c B_c)`.
pub fn effective_capacity_wideband(gains: &[f64], wb: &WidebandConfig, mu_t: f64) -> Result<f64> {
    if !(mu_t >= 0.0) {
        return Err(Error::domain(format!("muT must be >= 0, got {mu_t}")));
    }
    effective_capacity_mc(gains, wb.subchannel_snr(), mu_t * wb.b_c)
}

/// First and second derivatives of the normalized effective capacity at
/// `SNR = 0`, from the first two moments of `ξ`:
/// `Ċ_E(0) = E{ξ}/ln2` and
/// `C̈_E(0) = (μTB/ln²2)(E{ξ})² − (μTB/ln²2 + 1/ln2) E{ξ²}`.
pub fn c_e_derivatives_at_zero(moments: &MomentPair, mu_t_b: f64) -> (f64, f64) {
    let dot = moments.m1 / LN_2;
    let a = mu_t_b / (LN_2 * LN_2);
    let ddot = a * moments.m1 * moments.m1 - (a + 1.0 / LN_2) * moments.m2;
    (dot, ddot)
}

/// QoS threshold for [`qos_probability`]: queue length in bits, or a delay
/// bound with its arrival/service coupling factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QosThreshold {
    QueueBits(f64),
    Delay { delta: f64, d_max: f64 },
}

/// Exponential tail approximation of the violation probability:
/// `exp(−μ Q_max)` for queue overflow, `exp(−μ δ D_max)` for delay.
pub fn qos_probability(mu: f64, threshold: QosThreshold) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::domain(format!("mu must be >= 0, got {mu}")));
    }
    let exponent = match threshold {
        QosThreshold::QueueBits(q_max) => {
            if !(q_max >= 0.0) {
                return Err(Error::domain(format!("Q_max must be >= 0, got {q_max}")));
            }
            mu * q_max
        }
        QosThreshold::Delay { delta, d_max } => {
            if !(delta >= 0.0) || !(d_max >= 0.0) {
                return Err(Error::domain(format!(
                    "delta and D_max must be >= 0, got ({delta}, {d_max})"
                )));
            }
            mu * delta * d_max
        }
    };
    Ok((-exponent).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_nakagami_magnitude, StreamRng};

    fn two_point() -> Vec<f64> {
        vec![1.0, 3.0]
    }

    #[test]
    fn single_sample_is_shannon_rate() {
        let c = effective_capacity_mc(&[2.5], 1.2, 37.0).unwrap();
        assert!((c - (1.0f64 + 1.2 * 2.5).log2()).abs() < 1e-12);
    }

    #[test]
    fn two_point_law_hand_evaluation() {
        // mu T B = 1, SNR = 1: -ln((e^-1 + e^-2)/2).
        let c = effective_capacity_mc(&two_point(), 1.0, 1.0).unwrap();
        let expected = -((((-1f64).exp() + (-2f64).exp()) / 2.0).ln());
        assert!((c - expected).abs() < 1e-12);
        assert!((c - 1.3798).abs() < 1e-4);
    }

    #[test]
    fn large_exponent_approaches_worst_case_rate() {
        let c = effective_capacity_mc(&two_point(), 1.0, 1e6).unwrap();
        assert!((c - 1.0).abs() < 1e-5, "C_E = {c}");
    }

    #[test]
    fn rejects_empty_samples_and_negative_exponent() {
        assert!(matches!(
            effective_capacity_mc(&[], 1.0, 1.0),
            Err(Error::Contract(_))
        ));
        assert!(effective_capacity_mc(&[1.0], 1.0, -0.5).is_err());
    }

    #[test]
    fn negative_snr_allowed_within_analytic_domain() {
        let c = effective_capacity_mc(&two_point(), -1e-4, 2.0).unwrap();
        assert!(c < 0.0 && c.is_finite());
        // 1 + snr*xi crosses zero: domain error.
        assert!(effective_capacity_mc(&two_point(), -0.5, 2.0).is_err());
    }

    #[test]
    fn monotone_nonincreasing_in_qos_exponent() {
        let mut rng = StreamRng::for_index(71, 0);
        let gains: Vec<f64> = (0..2000)
            .map(|_| {
                sample_nakagami_magnitude(1.0, &mut rng).unwrap().powi(2)
            })
            .collect();
        for &snr in &[0.01, 1.0, 100.0] {
            let mut last = f64::INFINITY;
            for &mtb in &[0.0, 0.1, 1.0, 10.0, 100.0, 1e4] {
                let c = effective_capacity_mc(&gains, snr, mtb).unwrap();
                assert!(c <= last + 1e-12, "C_E increased at muTB = {mtb}");
                last = c;
            }
        }
    }

    #[test]
    fn jensen_sandwich() {
        let mut rng = StreamRng::for_index(73, 0);
        let gains: Vec<f64> = (0..5000)
            .map(|_| sample_nakagami_magnitude(2.0, &mut rng).unwrap().powi(2))
            .collect();
        let snr = 3.0;
        let ergodic = effective_capacity_mc(&gains, snr, 0.0).unwrap();
        let worst = (1.0 + snr * gains.iter().cloned().fold(f64::INFINITY, f64::min)).log2();
        for &mtb in &[1e-3, 1.0, 50.0, 1e4] {
            let c = effective_capacity_mc(&gains, snr, mtb).unwrap();
            assert!(c <= ergodic + 1e-12 && c >= worst - 1e-12);
        }
    }

    #[test]
    fn log_mean_exp_survives_extreme_exponents() {
        let gains: Vec<f64> = (1..=100).map(|i| i as f64 / 50.0).collect();
        let c = effective_capacity_mc(&gains, 1e6, 1e4).unwrap();
        assert!(c.is_finite() && c > 0.0);
        // Naive evaluation would underflow: muTB * log2(1 + snr*xi) ~ 1.4e5.
    }

    #[test]
    fn ergodic_limit_is_continuous_at_zero_mu() {
        let mut rng = StreamRng::for_index(79, 0);
        let gains: Vec<f64> = (0..10_000)
            .map(|_| sample_nakagami_magnitude(1.0, &mut rng).unwrap().powi(2))
            .collect();
        let ergodic = effective_capacity_mc(&gains, 2.0, 0.0).unwrap();
        let near_zero = effective_capacity_mc(&gains, 2.0, 1e-8).unwrap();
        assert!((ergodic - near_zero).abs() < 1e-6);
    }

    #[test]
    fn wideband_reduces_to_low_power_form() {
        let gains = two_point();
        let wb = WidebandConfig::new(2e4, 1.0, 1e5, SubchannelGrowth::SparseCaseI).unwrap();
        let mu_t = 2e-4;
        let direct = effective_capacity_mc(&gains, 2e4 / 1e5, mu_t * 1e5).unwrap();
        let via_wb = effective_capacity_wideband(&gains, &wb, mu_t).unwrap();
        assert_eq!(direct, via_wb);
    }

    #[test]
    fn wideband_limit_ratio_matches_closed_form() {
        // Deterministic xi = 1: at huge B_c the bit energy snr/C_E tends to
        // ln 2 (Jensen equality for a degenerate law).
        let gains = vec![1.0];
        let wb = WidebandConfig::new(1e5, 5.0, 1e9, SubchannelGrowth::SparseCaseI).unwrap();
        let c = effective_capacity_wideband(&gains, &wb, 2e-4).unwrap();
        let eb = wb.subchannel_snr() / c;
        assert!((eb - LN_2).abs() < 1e-4, "eb = {eb}");
    }

    #[test]
    fn wideband_ergodic_branch() {
        let gains = two_point();
        let wb = WidebandConfig::new(1e5, 5.0, 1e4, SubchannelGrowth::SparseCaseII).unwrap();
        let c = effective_capacity_wideband(&gains, &wb, 0.0).unwrap();
        let snr = wb.subchannel_snr();
        let expected = ((1.0 + snr).log2() + (1.0 + 3.0 * snr).log2()) / 2.0;
        assert!((c - expected).abs() < 1e-12);
    }

    #[test]
    fn derivative_values_at_origin() {
        let (dot, ddot) =
            c_e_derivatives_at_zero(&MomentPair { m1: 1.0, m2: 1.0 }, 0.0);
        assert!((dot - 1.0 / LN_2).abs() < 1e-15);
        assert!((ddot + 1.0 / LN_2).abs() < 1e-15);
        let (dot, ddot) =
            c_e_derivatives_at_zero(&MomentPair { m1: 1.0, m2: 2.0 }, 0.0);
        assert!((dot - 1.0 / LN_2).abs() < 1e-15);
        assert!((ddot + 2.0 / LN_2).abs() < 1e-15);
        // Curvature is strictly negative whenever E{xi^2} > 0.
        let (_, ddot) = c_e_derivatives_at_zero(&MomentPair { m1: 0.8, m2: 0.9 }, 123.0);
        assert!(ddot < 0.0);
    }

    #[test]
    fn finite_differences_reproduce_origin_derivatives() {
        // Common random numbers: the finite difference and the moment-based
        // derivatives use the same sample set.
        let mut rng = StreamRng::for_index(83, 0);
        let gains: Vec<f64> = (0..100_000)
            .map(|_| {
                let d = sample_nakagami_magnitude(2.0, &mut rng).unwrap();
                (0.03f64.sqrt() * d + 0.1 * 0.9).powi(2)
            })
            .collect();
        let moments = MomentPair::from_samples(&gains).unwrap();
        let mu_t_b = 20.0;
        let (dot, ddot) = c_e_derivatives_at_zero(&moments, mu_t_b);

        let h = 1e-4;
        let cp = effective_capacity_mc(&gains, h, mu_t_b).unwrap();
        let cm = effective_capacity_mc(&gains, -h, mu_t_b).unwrap();
        let fd1 = (cp - cm) / (2.0 * h);
        assert!((fd1 / dot - 1.0).abs() < 5e-3, "fd {fd1} vs {dot}");

        let h = 1e-2;
        let cp = effective_capacity_mc(&gains, h, mu_t_b).unwrap();
        let cm = effective_capacity_mc(&gains, -h, mu_t_b).unwrap();
        let fd2 = (cp + cm) / (h * h);
        assert!((fd2 / ddot - 1.0).abs() < 2e-2, "fd {fd2} vs {ddot}");
    }

    #[test]
    fn qos_probability_values() {
        assert_eq!(
            qos_probability(0.0, QosThreshold::QueueBits(123.0)).unwrap(),
            1.0
        );
        let p = qos_probability(0.1, QosThreshold::QueueBits(100.0)).unwrap();
        assert!((p - (-10f64).exp()).abs() < 1e-18);
        let p = qos_probability(
            1.0,
            QosThreshold::Delay {
                delta: 2.0,
                d_max: 5.0,
            },
        )
        .unwrap();
        assert!((p - (-10f64).exp()).abs() < 1e-18);
        assert!(qos_probability(-1.0, QosThreshold::QueueBits(1.0)).is_err());
        assert!(qos_probability(1.0, QosThreshold::QueueBits(-1.0)).is_err());
    }

    #[test]
    fn pairwise_sum_matches_sequential_on_benign_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let seq: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - seq).abs() < 1e-9);
    }
}
