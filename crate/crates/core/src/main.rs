//! Command-line interface: scenario metrics, figure-data sweeps, the oracle
//! validation suite, and the QoS probability utility.
//!
//! Exit codes: 0 on success, 1 when the validation suite reports a failure,
//! 2 on configuration or execution errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use irs_effcap::ee::{
    low_power_metrics, low_power_metrics_closed, non_irs_min_bit_energy,
    wideband_case_i_metrics_closed, wideband_case_i_metrics_mc, wideband_case_ii_metrics,
    EeMetrics,
};
use irs_effcap::effcap::{qos_probability, QosThreshold, SubchannelGrowth, WidebandConfig};
use irs_effcap::experiments::config::{parse_config, to_config_string};
use irs_effcap::experiments::sweep::{fmt_sig9, log_spaced_grid};
use irs_effcap::experiments::{
    element_count_sweep, irs_vs_baseline_sweep, run_validation, sample_gains, tradeoff_sweep,
    wideband_sweep, GrowthMap, ScenarioConfig, SweepCase, SweepResult,
};
use irs_effcap::irs::PhaseMode;
use irs_effcap::stats::{moment_match_gamma, xi_moments_large_n, MomentPair};

#[derive(Parser)]
#[command(
    name = "irs-effcap",
    version,
    about = "Spectral/energy-efficiency tradeoffs of an IRS-aided link under statistical QoS constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Preset scenario: paper (10^3 samples), paper-hp (10^5), or unit
    /// (1 m links, 10^5 samples).
    #[arg(long, default_value = "paper-hp")]
    preset: String,

    /// Scenario file (key = value lines); overrides --preset.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the realization count.
    #[arg(long)]
    samples: Option<usize>,

    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the element count.
    #[arg(long)]
    n_elements: Option<usize>,

    /// Override the QoS exponent (1/bit).
    #[arg(long)]
    mu: Option<f64>,

    /// Use b-bit discrete phase shifters instead of continuous ones.
    #[arg(long)]
    bits: Option<u32>,
}

impl ScenarioArgs {
    fn build(&self) -> irs_effcap::Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    irs_effcap::Error::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config(&text)?
            }
            None => ScenarioConfig::preset(&self.preset)?,
        };
        if let Some(s) = self.samples {
            cfg.samples = s;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.n_elements {
            cfg.n_elements = n;
        }
        if let Some(mu) = self.mu {
            cfg.qos = irs_effcap::effcap::QosConfig::new(
                mu,
                cfg.qos.block_duration_t,
                cfg.qos.bandwidth_b,
            )?;
        }
        if let Some(bits) = self.bits {
            cfg.phase_mode = PhaseMode::Discrete { bits };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    LowPower,
    WidebandI,
    WidebandIi,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    /// Effective capacity vs bit energy over QoS exponents.
    Tradeoff,
    /// IRS-aided link against the direct link on paired samples.
    Baseline,
    /// Closed-form minimum bit energy and slope vs element count.
    Elements,
    /// Sparse-multipath wideband, bounded subchannel count.
    WidebandI,
    /// Sparse-multipath wideband, sublinearly growing subchannel count.
    WidebandIi,
}

#[derive(Subcommand)]
enum Command {
    /// Print minimum bit energy and wideband slope for a scenario.
    Metrics {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = RegimeArg::LowPower)]
        regime: RegimeArg,
        #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
        method: MethodArg,
    },
    /// Generate figure data as CSV with a metadata sidecar.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Output CSV path; metadata goes to "<out>.meta".
        #[arg(long)]
        out: PathBuf,
        /// QoS exponents to sweep, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.001, 0.01, 0.1])]
        mu_list: Vec<f64>,
        /// SNR grid density for tradeoff sweeps.
        #[arg(long, default_value_t = 40)]
        per_decade: usize,
        /// Decades of SNR to cover above the low-SNR end.
        #[arg(long, default_value_t = 5.0)]
        decades: f64,
        /// Element counts for the elements sweep, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 10_000])]
        n_list: Vec<usize>,
        /// Discrete resolutions to add next to the continuous curve.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        bits_list: Vec<u32>,
        /// Coherence-bandwidth range for wideband sweeps (Hz).
        #[arg(long, default_value_t = 1e4)]
        b_c_lo: f64,
        #[arg(long, default_value_t = 1e7)]
        b_c_hi: f64,
    },
    /// Run the oracle validation suite; exits 1 if any check fails.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Queue-overflow or delay-violation probability for a QoS exponent.
    Probe {
        #[arg(long)]
        mu: f64,
        /// Queue length bound (bits).
        #[arg(long)]
        q_max: Option<f64>,
        /// Arrival/service coupling factor of the delay form.
        #[arg(long)]
        delta: Option<f64>,
        /// Delay bound (seconds).
        #[arg(long)]
        d_max: Option<f64>,
    },
}

fn print_metrics(m: &EeMetrics, extra: Option<(&str, f64)>) {
    println!("regime = {}", m.regime.tag());
    println!("method = {}", m.method.tag());
    println!("eb_n0_min = {}", fmt_sig9(m.eb_n0_min));
    if m.eb_n0_min > 0.0 && m.eb_n0_min.is_finite() {
        println!("eb_n0_min_db = {}", fmt_sig9(m.eb_n0_min_db()));
    } else {
        println!("eb_n0_min_db =");
    }
    println!("s0 = {}", fmt_sig9(m.s0));
    println!("saturated = {}", u8::from(m.is_saturated()));
    if let Some((key, v)) = extra {
        println!("{key} = {}", fmt_sig9(v));
    }
}

fn wideband_block(cfg: &ScenarioConfig) -> WidebandConfig {
    cfg.wideband.unwrap_or(
        // Reference wideband operating point when the scenario omits one.
        WidebandConfig {
            p_over_n0: 1e5,
            n_c: 5.0,
            b_c: 1e4,
            growth: SubchannelGrowth::SparseCaseI,
        },
    )
}

fn run_metrics(
    scenario: &ScenarioArgs,
    regime: RegimeArg,
    method: MethodArg,
) -> irs_effcap::Result<()> {
    let cfg = scenario.build()?;
    let link = cfg.link_gains()?;
    let mu_t_b = cfg.qos.mu_t_b();
    let closed_moments = || xi_moments_large_n(&link, &cfg.fading, cfg.n_elements, cfg.phase_mode);

    let metrics = match (regime, method) {
        (RegimeArg::LowPower, MethodArg::ClosedForm) => {
            low_power_metrics_closed(&link, &cfg.fading, cfg.n_elements, cfg.phase_mode, mu_t_b)?
        }
        (RegimeArg::LowPower, MethodArg::MonteCarlo) => {
            let gains = sample_gains(&cfg)?;
            let mut m = low_power_metrics(&MomentPair::from_samples(&gains)?, mu_t_b)?;
            m.method = irs_effcap::ee::Method::MonteCarlo;
            m
        }
        (RegimeArg::WidebandI, MethodArg::ClosedForm) => {
            let wb = wideband_block(&cfg);
            let params = moment_match_gamma(closed_moments()?)?;
            wideband_case_i_metrics_closed(
                &params,
                wb.p_over_n0,
                wb.n_c,
                cfg.qos.mu * cfg.qos.block_duration_t,
            )?
        }
        (RegimeArg::WidebandI, MethodArg::MonteCarlo) => {
            let wb = wideband_block(&cfg);
            let gains = sample_gains(&cfg)?;
            wideband_case_i_metrics_mc(
                &gains,
                wb.p_over_n0,
                wb.n_c,
                cfg.qos.mu * cfg.qos.block_duration_t,
            )?
        }
        (RegimeArg::WidebandIi, MethodArg::ClosedForm) => {
            wideband_case_ii_metrics(&closed_moments()?)?
        }
        (RegimeArg::WidebandIi, MethodArg::MonteCarlo) => {
            let gains = sample_gains(&cfg)?;
            let mut m = wideband_case_ii_metrics(&MomentPair::from_samples(&gains)?)?;
            m.method = irs_effcap::ee::Method::MonteCarlo;
            m
        }
    };
    let baseline = non_irs_min_bit_energy(link.direct, cfg.fading.m_h)?;
    print_metrics(&metrics, Some(("direct_only_eb_n0_min", baseline)));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    scenario: &ScenarioArgs,
    kind: SweepKind,
    out: &PathBuf,
    mu: &[f64],
    per_decade: usize,
    decades: f64,
    n_list: &[usize],
    bits_list: &[u32],
    b_c_lo: f64,
    b_c_hi: f64,
) -> irs_effcap::Result<()> {
    let cfg = scenario.build()?;
    let link = cfg.link_gains()?;

    let result: SweepResult = match kind {
        SweepKind::Tradeoff | SweepKind::Baseline => {
            // Anchor the grid below the closed-form minimum bit energy so
            // the flat low-SNR end of the curve is always covered.
            let moments =
                xi_moments_large_n(&link, &cfg.fading, cfg.n_elements.max(1), cfg.phase_mode)?;
            let snr_lo = 0.01 * std::f64::consts::LN_2 / moments.m1;
            let grid = log_spaced_grid(snr_lo, snr_lo * 10f64.powf(decades), per_decade)?;
            match kind {
                SweepKind::Tradeoff => tradeoff_sweep(&cfg, mu, &grid)?,
                _ => irs_vs_baseline_sweep(&cfg, mu, &grid)?,
            }
        }
        SweepKind::Elements => {
            let mut modes = vec![PhaseMode::Continuous];
            modes.extend(bits_list.iter().map(|&bits| PhaseMode::Discrete { bits }));
            element_count_sweep(&cfg, n_list, &modes)?
        }
        SweepKind::WidebandI | SweepKind::WidebandIi => {
            let mut cfg = cfg.clone();
            cfg.wideband = Some(wideband_block(&cfg));
            let grid = log_spaced_grid(b_c_lo, b_c_hi, per_decade.max(4))?;
            let case = match kind {
                SweepKind::WidebandI => SweepCase::I,
                _ => SweepCase::II,
            };
            wideband_sweep(&cfg, case, mu, &grid, GrowthMap::default_sparse())?
        }
    };

    let io_err = |e: std::io::Error| irs_effcap::Error::Config(format!("write failed: {e}"));
    std::fs::write(out, result.csv_string()).map_err(io_err)?;
    let meta_path = {
        let mut p = out.as_os_str().to_owned();
        p.push(".meta");
        PathBuf::from(p)
    };
    let meta = format!("{}{}", result.metadata_string(), to_config_string(&cfg));
    std::fs::write(&meta_path, meta).map_err(io_err)?;
    eprintln!(
        "wrote {} rows to {} (metadata: {})",
        result.rows.len(),
        out.display(),
        meta_path.display()
    );
    Ok(())
}

fn run_probe(mu: f64, q_max: Option<f64>, delta: Option<f64>, d_max: Option<f64>) -> irs_effcap::Result<()> {
    let threshold = match (q_max, delta, d_max) {
        (Some(q), None, None) => QosThreshold::QueueBits(q),
        (None, Some(delta), Some(d)) => QosThreshold::Delay { delta, d_max: d },
        _ => {
            return Err(irs_effcap::Error::Config(
                "probe needs either --q-max or both --delta and --d-max".into(),
            ))
        }
    };
    println!("probability = {}", fmt_sig9(qos_probability(mu, threshold)?));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Metrics {
            scenario,
            regime,
            method,
        } => run_metrics(scenario, *regime, *method).map(|()| ExitCode::SUCCESS),
        Command::Sweep {
            scenario,
            kind,
            out,
            mu_list,
            per_decade,
            decades,
            n_list,
            bits_list,
            b_c_lo,
            b_c_hi,
        } => run_sweep(
            scenario, *kind, out, mu_list, *per_decade, *decades, n_list, bits_list, *b_c_lo,
            *b_c_hi,
        )
        .map(|()| ExitCode::SUCCESS),
        Command::Validate { scenario } => scenario.build().and_then(|cfg| {
            let report = run_validation(&cfg)?;
            println!("{report}");
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }),
        Command::Probe {
            mu,
            q_max,
            delta,
            d_max,
        } => run_probe(*mu, *q_max, *delta, *d_max).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
