//! Independent numerical references used by the validation suite and the
//! test oracles: a double-exponential quadrature for Gamma-weighted
//! expectations, and an exhaustive phase-grid search for the IRS alignment
//! optimum. Nothing here calls the closed forms it is used to check.

use num_complex::Complex64;

use crate::channel::{ChannelRealization, LinkGains};
use crate::error::{Error, Result};
use crate::stats::{ln_gamma, GammaParams};

/// `E{x^k exp(−s x)}` for `x ~ Gamma(α, β)` by direct numerical integration
/// of the density over `(0, ∞)`.
///
/// Uses exp-sinh (double-exponential) quadrature `x = exp(c·sinh t)`, with
/// the integrand assembled in log space so large shapes neither overflow nor
/// underflow. Step size is halved until the sum stabilizes to `tol`.
pub fn gamma_tilted_moment_quadrature(
    p: &GammaParams,
    s: f64,
    power: u32,
    tol: f64,
) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::domain(format!("rate must be >= 0, got {s}")));
    }
    let alpha = p.shape;
    let beta = p.scale;
    // log of x^(alpha-1+power) exp(-x/beta - s x) / (beta^alpha Gamma(alpha))
    // times the Jacobian x * c * cosh(t) of the exp-sinh substitution.
    let c = std::f64::consts::FRAC_PI_2;
    let norm = -alpha * beta.ln() - ln_gamma(alpha);
    let log_integrand = |t: f64| -> f64 {
        let ln_x = c * t.sinh();
        let x = ln_x.exp();
        norm + (alpha + power as f64) * ln_x - x / beta - s * x + (c * t.cosh()).ln()
    };

    let t_max = 4.0f64;
    let mut h = 0.25f64;
    let mut prev = f64::NAN;
    for _ in 0..8 {
        // Collect log-terms and reduce with a max shift.
        let steps = (t_max / h).ceil() as i64;
        let mut logs = Vec::with_capacity(2 * steps as usize + 1);
        for k in -steps..=steps {
            logs.push(log_integrand(k as f64 * h));
        }
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        let value = (max + sum.ln() + h.ln()).exp();
        if prev.is_finite() && (value - prev).abs() <= tol * value.abs() {
            return Ok(value);
        }
        prev = value;
        h *= 0.5;
    }
    Ok(prev)
}

/// Quadrature reference for the Gamma Laplace transform `E{exp(−sξ)}`.
pub fn gamma_laplace_quadrature(p: &GammaParams, s: f64, tol: f64) -> Result<f64> {
    gamma_tilted_moment_quadrature(p, s, 0, tol)
}

/// Quadrature reference for the tilted second moment `E{ξ² exp(−sξ)}`.
pub fn gamma_weighted_second_moment_quadrature(
    p: &GammaParams,
    s: f64,
    tol: f64,
) -> Result<f64> {
    gamma_tilted_moment_quadrature(p, s, 2, tol)
}

/// Quadrature reference for the plain k-th Gamma moment.
pub fn gamma_kth_moment_quadrature(p: &GammaParams, k: u32, tol: f64) -> Result<f64> {
    gamma_tilted_moment_quadrature(p, 0.0, k, tol)
}

/// Largest composite gain over an exhaustive per-element phase grid with
/// `points_per_element` equispaced candidates on `[0, 2π)`.
///
/// Cost grows as `points_per_element^N`; intended for small element counts
/// as a reference for the closed-form alignment.
pub fn grid_search_max_gain(
    real: &ChannelRealization,
    gains: &LinkGains,
    points_per_element: usize,
) -> Result<f64> {
    let n = real.n_elements();
    if n > 4 {
        return Err(Error::contract(format!(
            "exhaustive grid search is limited to N <= 4, got {n}"
        )));
    }
    if points_per_element < 1 {
        return Err(Error::domain("grid needs at least one point per element"));
    }
    let phasors: Vec<Complex64> = (0..points_per_element)
        .map(|k| {
            Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * k as f64 / points_per_element as f64,
            )
        })
        .collect();
    let terms: Vec<Complex64> = real
        .f
        .iter()
        .zip(&real.g)
        .map(|(fi, gi)| gains.reflected().sqrt() * fi * gi)
        .collect();
    let direct = gains.direct.sqrt() * real.h;

    fn recurse(terms: &[Complex64], phasors: &[Complex64], partial: Complex64, best: &mut f64) {
        match terms.split_first() {
            None => *best = best.max(partial.norm_sqr()),
            Some((first, rest)) => {
                for p in phasors {
                    recurse(rest, phasors, partial + first * p, best);
                }
            }
        }
    }

    let mut best = f64::NEG_INFINITY;
    recurse(&terms, &phasors, direct, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel_indexed, FadingConfig};
    use crate::irs::{gain_with_mode, PhaseMode};
    use crate::stats::{gamma_kth_moment, gamma_laplace_expectation};

    #[test]
    fn quadrature_recovers_plain_moments() {
        // Independent route: numeric integral against the rising factorial.
        for &(alpha, beta) in &[(0.7, 2.0), (1.0, 1.0), (5.5, 0.3), (25.0, 4.0)] {
            let p = GammaParams::new(alpha, beta).unwrap();
            for k in 1..=2u32 {
                let numeric = gamma_kth_moment_quadrature(&p, k, 1e-12).unwrap();
                let closed = gamma_kth_moment(&p, k);
                assert!(
                    (numeric / closed - 1.0).abs() < 1e-9,
                    "alpha={alpha} beta={beta} k={k}: {numeric} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn quadrature_normalization() {
        // s = 0, power = 0: total probability mass.
        let p = GammaParams::new(3.3, 0.8).unwrap();
        let mass = gamma_laplace_quadrature(&p, 0.0, 1e-12).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        let laplace = gamma_laplace_expectation(&p, 2.0).unwrap();
        let numeric = gamma_laplace_quadrature(&p, 2.0, 1e-12).unwrap();
        assert!((numeric / laplace - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_search_matches_direct_enumeration_for_one_element() {
        let fading = FadingConfig::new(2.0, 1.0, 1.0).unwrap();
        let gains = LinkGains {
            direct: 1.0,
            tx_irs: 1.0,
            irs_rx: 1.0,
        };
        let real = sample_channel_indexed(&fading, 1, 99, 0).unwrap();
        let k = 32;
        let mut best = f64::NEG_INFINITY;
        for i in 0..k {
            let theta = std::f64::consts::TAU * i as f64 / k as f64;
            let xi = crate::irs::composite_gain(&real, &[theta], &gains).unwrap().xi;
            best = best.max(xi);
        }
        let via_search = grid_search_max_gain(&real, &gains, k).unwrap();
        assert!((via_search - best).abs() < 1e-12);
        // The closed-form alignment can only do better.
        let opt = gain_with_mode(&real, PhaseMode::Continuous, &gains).unwrap().xi;
        assert!(opt >= via_search);
    }
}
