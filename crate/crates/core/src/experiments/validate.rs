//! Oracle validation suite: every closed form in the crate checked against
//! an independent numerical reference on the configured scenario.

use std::fmt;

use rand_distr::{Distribution, Uniform};

use crate::channel::{sample_channel_indexed, StreamRng};
use crate::ee::{jensen_gap, low_power_metrics_closed, non_irs_min_bit_energy};
use crate::effcap::{c_e_derivatives_at_zero, effective_capacity_mc};
use crate::error::Result;
use crate::experiments::oracles::{
    gamma_laplace_quadrature, gamma_weighted_second_moment_quadrature, grid_search_max_gain,
};
use crate::experiments::{sample_gain_table, GainVariant, ScenarioConfig};
use crate::irs::{gain_with_mode, PhaseMode};
use crate::stats::{
    gamma_laplace_expectation, gamma_weighted_second_moment, xi_moments_large_n, GammaParams,
    MomentPair,
};

/// Outcome of one oracle check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst measured error (check-specific scale, documented in `detail`).
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn from_measure(name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: measured.is_finite() && measured <= tolerance,
            measured,
            tolerance,
            detail,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {:.3e} (tolerance {:.3e}) - {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "{}/{} checks passed",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        )
    }
}

/// Relative disagreement between a closed-form moment pair and a sampled
/// one; shared by the moment check and its corruption test.
pub(crate) fn moment_check(
    name: &str,
    closed: &MomentPair,
    sampled: &MomentPair,
    tolerance: f64,
) -> CheckResult {
    let e1 = (closed.m1 / sampled.m1 - 1.0).abs();
    let e2 = (closed.m2 / sampled.m2 - 1.0).abs();
    CheckResult::from_measure(
        name,
        e1.max(e2),
        tolerance,
        format!(
            "closed ({:.6e}, {:.6e}) vs sampled ({:.6e}, {:.6e})",
            closed.m1, closed.m2, sampled.m1, sampled.m2
        ),
    )
}

fn check_phase_alignment(cfg: &ScenarioConfig) -> Result<CheckResult> {
    let gains = cfg.link_gains()?;
    let mut worst = 0.0f64;
    let mut tried = 0;
    for n in 1..=3usize {
        for i in 0..100u64 {
            let real =
                sample_channel_indexed(&cfg.fading, n, cfg.seed ^ 0x9e37, (n as u64) << 32 | i)?;
            let aligned = gain_with_mode(&real, PhaseMode::Continuous, &gains)?.xi;
            let grid = grid_search_max_gain(&real, &gains, 64)?;
            worst = worst.max((grid - aligned) / aligned.max(f64::MIN_POSITIVE));
            tried += 1;
        }
    }
    Ok(CheckResult::from_measure(
        "phase-alignment-optimality",
        worst.max(0.0),
        1e-12,
        format!("closed-form alignment vs 64-point exhaustive grid on {tried} realizations"),
    ))
}

fn check_composite_moments(cfg: &ScenarioConfig) -> Result<Vec<CheckResult>> {
    let link = cfg.link_gains()?;
    let modes = [PhaseMode::Continuous, PhaseMode::Discrete { bits: 2 }];
    let table = sample_gain_table(
        cfg,
        &[
            GainVariant::Mode(modes[0]),
            GainVariant::Mode(modes[1]),
        ],
    )?;
    let mut out = Vec::new();
    for (samples, mode) in table.iter().zip(modes) {
        let closed = xi_moments_large_n(&link, &cfg.fading, cfg.n_elements, mode)?;
        let sampled = MomentPair::from_samples(samples)?;
        let name = match mode {
            PhaseMode::Continuous => "composite-moments-continuous",
            PhaseMode::Discrete { .. } => "composite-moments-discrete-b2",
        };
        out.push(moment_check(name, &closed, &sampled, 0.02));
    }
    Ok(out)
}

fn check_origin_derivatives(cfg: &ScenarioConfig) -> Result<Vec<CheckResult>> {
    let gains = sample_gain_table(cfg, &[GainVariant::Mode(cfg.phase_mode)])?.remove(0);
    let moments = MomentPair::from_samples(&gains)?;
    let mu_t_b = cfg.qos.mu_t_b();
    let (dot, ddot) = c_e_derivatives_at_zero(&moments, mu_t_b);

    let h = 1e-4;
    let fd1 = (effective_capacity_mc(&gains, h, mu_t_b)?
        - effective_capacity_mc(&gains, -h, mu_t_b)?)
        / (2.0 * h);
    let h = 1e-2;
    let fd2 = (effective_capacity_mc(&gains, h, mu_t_b)?
        + effective_capacity_mc(&gains, -h, mu_t_b)?)
        / (h * h);

    Ok(vec![
        CheckResult::from_measure(
            "origin-derivative-first",
            (fd1 / dot - 1.0).abs(),
            5e-3,
            format!("central difference {fd1:.6e} vs moment form {dot:.6e}"),
        ),
        CheckResult::from_measure(
            "origin-derivative-second",
            (fd2 / ddot - 1.0).abs(),
            2e-2,
            format!("central difference {fd2:.6e} vs moment form {ddot:.6e}"),
        ),
    ])
}

fn check_gamma_laplace(cfg: &ScenarioConfig) -> Result<CheckResult> {
    let mut rng = StreamRng::for_stream(cfg.seed, 0xF0, 0);
    let alpha = Uniform::new(0.6, 30.0).unwrap();
    let beta = Uniform::new(0.1, 5.0).unwrap();
    let rate = Uniform::new(0.0, 10.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = GammaParams::new(alpha.sample(&mut rng), beta.sample(&mut rng))?;
        let s = rate.sample(&mut rng);
        let lap = gamma_laplace_expectation(&p, s)?;
        let lap_q = gamma_laplace_quadrature(&p, s, 1e-12)?;
        worst = worst.max((lap / lap_q - 1.0).abs());
        let w = gamma_weighted_second_moment(&p, s)?;
        let w_q = gamma_weighted_second_moment_quadrature(&p, s, 1e-12)?;
        worst = worst.max((w / w_q - 1.0).abs());
    }
    Ok(CheckResult::from_measure(
        "gamma-laplace-quadrature",
        worst,
        1e-8,
        "closed Laplace/tilted-moment forms vs double-exponential quadrature, 50 triples".into(),
    ))
}

fn check_inequalities(cfg: &ScenarioConfig) -> Result<CheckResult> {
    let link = cfg.link_gains()?;
    let baseline = non_irs_min_bit_energy(link.direct, cfg.fading.m_h)?;
    // Worst signed violation across the grid; anything above the FP slack
    // fails.
    let mut worst = 0.0f64;
    let mut detail = String::from("all inequalities hold");
    let mut note = |violation: f64, what: String| {
        if violation > worst {
            worst = violation;
            detail = what;
        }
    };

    for &n in &[4usize, 16, 64] {
        for &mu_t_b in &[0.2, 2.0, 20.0] {
            let cont = low_power_metrics_closed(&link, &cfg.fading, n, PhaseMode::Continuous, mu_t_b)?;
            note(
                (cont.eb_n0_min - baseline) / baseline,
                format!("direct-only minimum below IRS minimum at N={n}"),
            );
            let mut prev = f64::INFINITY;
            for bits in 1..=3u32 {
                let disc = low_power_metrics_closed(
                    &link,
                    &cfg.fading,
                    n,
                    PhaseMode::Discrete { bits },
                    mu_t_b,
                )?;
                note(
                    (cont.eb_n0_min - disc.eb_n0_min) / cont.eb_n0_min,
                    format!("discrete b={bits} minimum below continuous at N={n}"),
                );
                note(
                    (disc.eb_n0_min - prev) / disc.eb_n0_min,
                    format!("discrete minimum not monotone at b={bits}, N={n}"),
                );
                prev = disc.eb_n0_min;
            }
        }

        // Jensen gap on sampled gains for this element count.
        let sample_cfg = ScenarioConfig {
            n_elements: n,
            samples: cfg.samples.min(20_000),
            ..cfg.clone()
        };
        let gains = sample_gain_table(&sample_cfg, &[GainVariant::Mode(PhaseMode::Continuous)])?
            .remove(0);
        for &mu in &[0.001, 0.01, 0.1] {
            let g = jensen_gap(
                &gains,
                1e5,
                5.0,
                mu * cfg.qos.block_duration_t,
            )?;
            note(
                -g.gap / g.low_power,
                format!("Jensen gap negative at N={n}, mu={mu}"),
            );
        }
    }

    // Degenerate law: gap collapses to zero.
    let g = jensen_gap(&vec![0.37; 128], 1e5, 5.0, 2e-4)?;
    note(
        (g.gap.abs() - 1e-12 * g.low_power) / g.low_power,
        "Jensen gap not zero on a degenerate law".into(),
    );

    Ok(CheckResult::from_measure(
        "inequality-suite",
        worst,
        1e-9,
        detail,
    ))
}

/// Runs every oracle check on the scenario. Failures are report content,
/// not errors; the CLI maps them to a nonzero exit status.
pub fn run_validation(cfg: &ScenarioConfig) -> Result<ValidationReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    checks.push(check_phase_alignment(cfg)?);
    checks.extend(check_composite_moments(cfg)?);
    checks.extend(check_origin_derivatives(cfg)?);
    checks.push(check_gamma_laplace(cfg)?);
    checks.push(check_inequalities(cfg)?);
    Ok(ValidationReport { checks })
}
