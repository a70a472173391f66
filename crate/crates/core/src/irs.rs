//! Optimal and quantized IRS phase configurations and the composite channel
//! power gain `ξ` they induce.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::channel::{ChannelRealization, LinkGains};
use crate::error::{Error, Result};

/// Phase-shifter resolution of the IRS elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Ideal continuous phases; each element can align exactly.
    Continuous,
    /// `b`-bit uniform quantization of `[0, 2π)` into `2^b` levels.
    Discrete { bits: u32 },
}

impl PhaseMode {
    pub fn validate(&self) -> Result<()> {
        match self {
            PhaseMode::Continuous => Ok(()),
            PhaseMode::Discrete { bits } if *bits >= 1 => Ok(()),
            PhaseMode::Discrete { bits } => Err(Error::domain(format!(
                "discrete phase resolution requires bits >= 1, got {bits}"
            ))),
        }
    }
}

/// Composite power gain of one realization together with its decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    /// `ξ = |√(ℓ_f ℓ_g) Σ f_n g_n e^{jθ_n} + √ℓ_h h|²`.
    pub xi: f64,
    /// Direct-link magnitude `ξ_d = |h|`.
    pub xi_d: f64,
    /// Magnitude of the reflected sum, `|Σ |f_n||g_n| e^{jθ̂_n}|`; equals
    /// `Σ |f_n||g_n|` under optimal continuous phases.
    pub xi_r_effective: f64,
}

/// Per-element phases that align the reflected path with the direct path:
/// `θ*_n = arg(h) − arg(f_n) − arg(g_n)`, wrapped to `[0, 2π)`.
///
/// When `h = 0` its argument is taken as 0; any common reference then
/// maximizes the reflected sum alone.
pub fn optimal_phases(real: &ChannelRealization) -> Vec<f64> {
    let arg_h = if real.h.norm_sqr() == 0.0 {
        0.0
    } else {
        real.h.arg()
    };
    real.f
        .iter()
        .zip(&real.g)
        .map(|(fi, gi)| wrap_tau(arg_h - fi.arg() - gi.arg()))
        .collect()
}

fn wrap_tau(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself when theta is a tiny negative number.
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Rounds each phase to the nearest point of `ℱ = {0, Δθ, …, (2^b−1)Δθ}`
/// in circular distance, `Δθ = 2π/2^b`. Exact midpoints resolve to the
/// lower grid index.
pub fn quantize_phases(phases: &[f64], bits: u32) -> Result<Vec<f64>> {
    if bits < 1 {
        return Err(Error::domain(format!(
            "quantization requires bits >= 1, got {bits}"
        )));
    }
    let levels = (1u64 << bits) as f64;
    let step = TAU / levels;
    Ok(phases
        .iter()
        .map(|&theta| {
            let t = wrap_tau(theta);
            let k = (t / step).round();
            // `round` ties away from zero, i.e. to the upper index at exact
            // midpoints; shift those down for determinism.
            let k = if (t / step - k).abs() == 0.5 && k > t / step {
                k - 1.0
            } else {
                k
            };
            wrap_tau(k * step)
        })
        .collect())
}

/// Exact complex accumulation of the reflected sum plus the direct term,
/// then the squared magnitude.
pub fn composite_gain(
    real: &ChannelRealization,
    phases: &[f64],
    gains: &LinkGains,
) -> Result<GainSample> {
    if phases.len() != real.n_elements() {
        return Err(Error::contract(format!(
            "phase vector length {} does not match element count {}",
            phases.len(),
            real.n_elements()
        )));
    }
    let mut reflected = Complex64::new(0.0, 0.0);
    for ((fi, gi), &theta) in real.f.iter().zip(&real.g).zip(phases) {
        reflected += fi * gi * Complex64::from_polar(1.0, theta);
    }
    let composite = gains.reflected().sqrt() * reflected + gains.direct.sqrt() * real.h;
    Ok(GainSample {
        xi: composite.norm_sqr(),
        xi_d: real.h.norm(),
        xi_r_effective: reflected.norm(),
    })
}

/// Gain sample under the phase mode: optimal phases, quantized if discrete.
pub fn gain_with_mode(
    real: &ChannelRealization,
    mode: PhaseMode,
    gains: &LinkGains,
) -> Result<GainSample> {
    let theta = optimal_phases(real);
    let theta = match mode {
        PhaseMode::Continuous => theta,
        PhaseMode::Discrete { bits } => quantize_phases(&theta, bits)?,
    };
    composite_gain(real, &theta, gains)
}

/// Expected phasor shrinkage from `b`-bit quantization:
/// `E{e^{jθ̂}} = (2^b/π) sin(π/2^b)`. Strictly increasing in `b`, → 1.
pub fn quantization_loss_factor(bits: u32) -> f64 {
    if bits >= 40 {
        // sin(x)/x differs from 1 by less than x^2/6 < 2^-80 here.
        return 1.0;
    }
    let levels = (1u64 << bits) as f64;
    let x = std::f64::consts::PI / levels;
    // sin(x)/x, safe for the huge-b limit.
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel_indexed, FadingConfig, StreamRng};
    use rand_distr::{Distribution, Uniform};
    use std::f64::consts::PI;

    fn unit_gains() -> LinkGains {
        LinkGains {
            direct: 1.0,
            tx_irs: 1.0,
            irs_rx: 1.0,
        }
    }

    #[test]
    fn aligned_channel_needs_no_phase_shift() {
        let real = ChannelRealization {
            h: Complex64::new(1.5, 0.0),
            f: vec![Complex64::new(0.7, 0.0), Complex64::new(2.0, 0.0)],
            g: vec![Complex64::new(1.0, 0.0), Complex64::new(0.4, 0.0)],
        };
        for theta in optimal_phases(&real) {
            assert_eq!(theta, 0.0);
        }
    }

    #[test]
    fn optimal_phase_arg_arithmetic() {
        let real = ChannelRealization {
            h: Complex64::from_polar(1.0, PI / 2.0),
            f: vec![Complex64::from_polar(1.0, PI / 4.0)],
            g: vec![Complex64::from_polar(1.0, PI / 8.0)],
        };
        let theta = optimal_phases(&real);
        assert!((theta[0] - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn quantize_keeps_grid_points() {
        for bits in 1..=6 {
            let q = quantize_phases(&[0.0], bits).unwrap();
            assert_eq!(q[0], 0.0);
        }
    }

    #[test]
    fn quantize_uses_circular_distance() {
        // pi/2 - 0.01 is nearer to 0 than to pi on the 1-bit grid {0, pi}.
        let q = quantize_phases(&[PI / 2.0 - 0.01], 1).unwrap();
        assert_eq!(q[0], 0.0);
        // ... and pi/2 + 0.01 is nearer to pi.
        let q = quantize_phases(&[PI / 2.0 + 0.01], 1).unwrap();
        assert!((q[0] - PI).abs() < 1e-15);
        // Angles just below 2pi wrap to the 0 grid point.
        let q = quantize_phases(&[TAU - 0.01], 2).unwrap();
        assert_eq!(q[0], 0.0);
    }

    #[test]
    fn quantization_error_is_bounded() {
        let mut rng = StreamRng::for_index(31, 0);
        let uniform = Uniform::new(0.0, TAU).unwrap();
        for bits in 1..=4u32 {
            let half_step = PI / (1u64 << bits) as f64;
            for _ in 0..10_000 {
                let theta = uniform.sample(&mut rng);
                let q = quantize_phases(&[theta], bits).unwrap()[0];
                let mut err = q - theta;
                while err < -PI {
                    err += TAU;
                }
                while err >= PI {
                    err -= TAU;
                }
                assert!(
                    (-half_step..half_step).contains(&err),
                    "bits={bits} theta={theta} err={err}"
                );
            }
        }
    }

    #[test]
    fn quantization_error_is_uniform_on_its_interval() {
        // Kolmogorov-Smirnov against U[-pi/4, pi/4) for b = 2.
        let mut rng = StreamRng::for_index(37, 0);
        let uniform = Uniform::new(0.0, TAU).unwrap();
        let n = 100_000;
        let half = PI / 4.0;
        let mut errs: Vec<f64> = (0..n)
            .map(|_| {
                let theta = uniform.sample(&mut rng);
                let q = quantize_phases(&[theta], 2).unwrap()[0];
                let mut e = q - theta;
                if e < -PI {
                    e += TAU;
                }
                if e >= PI {
                    e -= TAU;
                }
                e
            })
            .collect();
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, e) in errs.iter().enumerate() {
            let cdf = (e + half) / (2.0 * half);
            let emp_hi = (i + 1) as f64 / n as f64;
            let emp_lo = i as f64 / n as f64;
            ks = ks.max((cdf - emp_lo).abs()).max((cdf - emp_hi).abs());
        }
        // 1% critical value ~ 1.63/sqrt(n) = 0.00516.
        assert!(ks < 1.63 / (n as f64).sqrt(), "KS statistic {ks}");
    }

    #[test]
    fn direct_only_gain_when_no_elements() {
        let real = ChannelRealization {
            h: Complex64::from_polar(1.3, 0.9),
            f: vec![],
            g: vec![],
        };
        let gains = LinkGains {
            direct: 0.5,
            tx_irs: 1.0,
            irs_rx: 1.0,
        };
        let s = composite_gain(&real, &[], &gains).unwrap();
        assert!((s.xi - 0.5 * 1.3 * 1.3).abs() < 1e-15);
        assert_eq!(s.xi_r_effective, 0.0);
    }

    #[test]
    fn optimal_gain_matches_closed_decomposition() {
        let fading = FadingConfig::new(2.0, 1.0, 1.0).unwrap();
        let gains = LinkGains {
            direct: 2.5e-7,
            tx_irs: 4.9e-6,
            irs_rx: 4.9e-6,
        };
        for i in 0..200 {
            let real = sample_channel_indexed(&fading, 24, 3, i).unwrap();
            let s = gain_with_mode(&real, PhaseMode::Continuous, &gains).unwrap();
            let xi_r: f64 = real
                .f
                .iter()
                .zip(&real.g)
                .map(|(fi, gi)| fi.norm() * gi.norm())
                .sum();
            let closed =
                (gains.direct.sqrt() * real.h.norm() + gains.reflected().sqrt() * xi_r).powi(2);
            assert!(
                (s.xi / closed - 1.0).abs() < 1e-12,
                "xi {} vs closed {closed}",
                s.xi
            );
            assert!((s.xi_r_effective / xi_r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_phases_never_beat_optimal() {
        let fading = FadingConfig::new(2.0, 1.0, 1.0).unwrap();
        let gains = unit_gains();
        let uniform = Uniform::new(0.0, TAU).unwrap();
        let mut rng = StreamRng::for_index(41, 0);
        for i in 0..200 {
            let real = sample_channel_indexed(&fading, 8, 13, i).unwrap();
            let best = gain_with_mode(&real, PhaseMode::Continuous, &gains)
                .unwrap()
                .xi;
            let phases: Vec<f64> = (0..8).map(|_| uniform.sample(&mut rng)).collect();
            let xi = composite_gain(&real, &phases, &gains).unwrap().xi;
            assert!(xi <= best * (1.0 + 1e-12), "random {xi} > optimal {best}");
        }
    }

    #[test]
    fn quantized_gain_mean_increases_with_resolution() {
        let fading = FadingConfig::new(2.0, 1.0, 1.0).unwrap();
        let gains = unit_gains();
        let n = 100_000u64;
        let (mut e1, mut e3, mut ec) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let real = sample_channel_indexed(&fading, 16, 17, i).unwrap();
            e1 += gain_with_mode(&real, PhaseMode::Discrete { bits: 1 }, &gains)
                .unwrap()
                .xi;
            e3 += gain_with_mode(&real, PhaseMode::Discrete { bits: 3 }, &gains)
                .unwrap()
                .xi;
            ec += gain_with_mode(&real, PhaseMode::Continuous, &gains).unwrap().xi;
        }
        assert!(e1 < e3 && e3 < ec, "E(b=1)={e1} E(b=3)={e3} E(cont)={ec}");
    }

    #[test]
    fn composite_gain_checks_phase_length() {
        let real = ChannelRealization {
            h: Complex64::new(1.0, 0.0),
            f: vec![Complex64::new(1.0, 0.0)],
            g: vec![Complex64::new(1.0, 0.0)],
        };
        assert!(matches!(
            composite_gain(&real, &[0.0, 0.0], &unit_gains()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn loss_factor_values() {
        assert!((quantization_loss_factor(1) - 2.0 / PI).abs() < 1e-15);
        assert!((quantization_loss_factor(2) - 2.0 * 2f64.sqrt() / PI).abs() < 1e-15);
        let eps = 1.0 - quantization_loss_factor(10);
        assert!(eps > 0.0 && eps < 1e-5, "1 - q(10) = {eps}");
        // Strictly increasing in b.
        for b in 1..=20 {
            assert!(quantization_loss_factor(b) < quantization_loss_factor(b + 1));
        }
    }
}
