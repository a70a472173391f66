//! Figure-data sweeps and their CSV/metadata serialization.

use std::fmt::Write as _;

use crate::ee::{low_power_metrics_closed, EeMetrics};
use crate::effcap::{effective_capacity_mc, effective_capacity_wideband, WidebandConfig};
use crate::error::{Error, Result};
use crate::experiments::{sample_gain_table, GainVariant, ScenarioConfig};
use crate::irs::PhaseMode;

/// One output row. Tradeoff-style sweeps fill `c_e`; metrics-style sweeps
/// fill `s0` and report the minimum bit energy in `eb_n0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_var: f64,
    pub eb_n0: f64,
    pub c_e: Option<f64>,
    pub s0: Option<f64>,
    pub mu: f64,
    pub n_elements: usize,
    pub mode: String,
    pub saturated: bool,
}

/// Provenance attached to every sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub kind: String,
    pub seed: u64,
    pub samples: usize,
    pub build: String,
}

impl SweepMetadata {
    fn new(kind: &str, cfg: &ScenarioConfig) -> Self {
        SweepMetadata {
            kind: kind.into(),
            seed: cfg.seed,
            samples: cfg.samples,
            build: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

/// Nine significant digits, scientific notation.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

impl SweepResult {
    pub const CSV_HEADER: &'static str =
        "sweep_var,eb_n0,eb_n0_db,c_e,s0,mu,n_elements,mode,saturated";

    /// CSV body; sentinel rows carry the `saturated` flag and leave the
    /// non-finite energy fields empty rather than printing infinities.
    pub fn csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let eb_fields = if r.eb_n0.is_finite() && r.eb_n0 > 0.0 {
                format!("{},{}", fmt_sig9(r.eb_n0), fmt_sig9(10.0 * r.eb_n0.log10()))
            } else if r.eb_n0 == 0.0 {
                format!("{},", fmt_sig9(0.0))
            } else {
                ",".into()
            };
            let c_e = r.c_e.map(fmt_sig9).unwrap_or_default();
            let s0 = r
                .s0
                .filter(|s| s.is_finite())
                .map(fmt_sig9)
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_sig9(r.sweep_var),
                eb_fields,
                c_e,
                s0,
                fmt_sig9(r.mu),
                r.n_elements,
                r.mode,
                u8::from(r.saturated),
            );
        }
        out
    }

    /// Key/value sidecar with the provenance fields.
    pub fn metadata_string(&self) -> String {
        format!(
            "kind = {}\nseed = {}\nsamples = {}\nbuild = {}\nrows = {}\n",
            self.metadata.kind,
            self.metadata.seed,
            self.metadata.samples,
            self.metadata.build,
            self.rows.len()
        )
    }
}

/// Log-spaced grid between `lo` and `hi` with a point density per decade.
pub fn log_spaced_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::domain(format!(
            "grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let decades = (hi / lo).log10();
    let points = (decades * per_decade as f64).ceil() as usize + 1;
    Ok((0..points)
        .map(|i| lo * 10f64.powf(decades * i as f64 / (points - 1) as f64))
        .collect())
}

fn tradeoff_rows(
    gains: &[f64],
    snr_grid: &[f64],
    mu: f64,
    mu_t_b: f64,
    n_elements: usize,
    mode: &str,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(snr_grid.len());
    for &snr in snr_grid {
        if !(snr > 0.0) {
            return Err(Error::domain(format!(
                "SNR grid must be strictly positive, got {snr}"
            )));
        }
        let c_e = effective_capacity_mc(gains, snr, mu_t_b)?;
        let eb = if c_e > 0.0 { snr / c_e } else { f64::INFINITY };
        rows.push(SweepRow {
            sweep_var: snr,
            eb_n0: eb,
            c_e: Some(c_e),
            s0: None,
            mu,
            n_elements,
            mode: mode.into(),
            saturated: !eb.is_finite(),
        });
    }
    Ok(rows)
}

fn check_snr_grid(snr_grid: &[f64]) -> Result<()> {
    if snr_grid.is_empty() {
        return Err(Error::contract("SNR grid must not be empty"));
    }
    if snr_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::contract("SNR grid must be strictly increasing"));
    }
    Ok(())
}

/// Normalized effective capacity against bit energy over an SNR grid, one
/// curve per QoS exponent, all curves on common gain samples.
pub fn tradeoff_sweep(
    cfg: &ScenarioConfig,
    mu_list: &[f64],
    snr_grid: &[f64],
) -> Result<SweepResult> {
    check_snr_grid(snr_grid)?;
    let gains = sample_gain_table(cfg, &[GainVariant::Mode(cfg.phase_mode)])?;
    let mode = GainVariant::Mode(cfg.phase_mode).tag();
    let tb = cfg.qos.block_duration_t * cfg.qos.bandwidth_b;
    let mut rows = Vec::new();
    for &mu in mu_list {
        rows.extend(tradeoff_rows(
            &gains[0],
            snr_grid,
            mu,
            mu * tb,
            cfg.n_elements,
            &mode,
        )?);
    }
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata::new("tradeoff", cfg),
    })
}

/// The tradeoff curves of the IRS-aided link and of the direct link alone,
/// paired on the same realizations.
pub fn irs_vs_baseline_sweep(
    cfg: &ScenarioConfig,
    mu_list: &[f64],
    snr_grid: &[f64],
) -> Result<SweepResult> {
    check_snr_grid(snr_grid)?;
    let variants = [GainVariant::Mode(cfg.phase_mode), GainVariant::DirectOnly];
    let table = sample_gain_table(cfg, &variants)?;
    let tb = cfg.qos.block_duration_t * cfg.qos.bandwidth_b;
    let mut rows = Vec::new();
    for (gains, variant) in table.iter().zip(&variants) {
        let (tag, n) = match variant {
            GainVariant::DirectOnly => ("baseline".to_string(), 0),
            v => (v.tag(), cfg.n_elements),
        };
        for &mu in mu_list {
            rows.extend(tradeoff_rows(gains, snr_grid, mu, mu * tb, n, &tag)?);
        }
    }
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata::new("irs_vs_baseline", cfg),
    })
}

/// Closed-form minimum bit energy and wideband slope against the element
/// count, one row per (N, phase mode).
pub fn element_count_sweep(
    cfg: &ScenarioConfig,
    n_list: &[usize],
    modes: &[PhaseMode],
) -> Result<SweepResult> {
    if n_list.is_empty() || modes.is_empty() {
        return Err(Error::contract("element sweep needs N values and modes"));
    }
    let gains = cfg.link_gains()?;
    let mu_t_b = cfg.qos.mu_t_b();
    let mut rows = Vec::new();
    for &n in n_list {
        for &mode in modes {
            let m: EeMetrics = low_power_metrics_closed(&gains, &cfg.fading, n, mode, mu_t_b)?;
            rows.push(SweepRow {
                sweep_var: n as f64,
                eb_n0: m.eb_n0_min,
                c_e: None,
                s0: Some(m.s0),
                mu: cfg.qos.mu,
                n_elements: n,
                mode: GainVariant::Mode(mode).tag(),
                saturated: m.is_saturated(),
            });
        }
    }
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata::new("element_count", cfg),
    })
}

/// Which sparse-multipath wideband case a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepCase {
    /// Bounded subchannel count: `N_c` stays at the configured value.
    I,
    /// Sublinear growth: `N_c` follows a [`GrowthMap`] of `B_c`.
    II,
}

/// Subchannel count as a function of coherence bandwidth, interpolated
/// linearly in log-log coordinates between two anchor points (a power law,
/// sublinear for the default anchors) and clamped outside them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthMap {
    pub b_c_start: f64,
    pub n_c_start: f64,
    pub b_c_end: f64,
    pub n_c_end: f64,
}

impl GrowthMap {
    /// Default anchors: 5 subchannels at 10 kHz growing to 50 at 10 MHz
    /// (power law with exponent 1/3).
    pub fn default_sparse() -> Self {
        GrowthMap {
            b_c_start: 1e4,
            n_c_start: 5.0,
            b_c_end: 1e7,
            n_c_end: 50.0,
        }
    }

    pub fn n_c_at(&self, b_c: f64) -> f64 {
        let b = b_c.clamp(self.b_c_start, self.b_c_end);
        let t = (b / self.b_c_start).ln() / (self.b_c_end / self.b_c_start).ln();
        self.n_c_start * (self.n_c_end / self.n_c_start).powf(t)
    }
}

/// Effective capacity against bit energy as the coherence bandwidth grows,
/// for the sparse-multipath wideband regime. Case I keeps the configured
/// subchannel count; case II grows it along `growth`.
pub fn wideband_sweep(
    cfg: &ScenarioConfig,
    case: SweepCase,
    mu_list: &[f64],
    b_c_grid: &[f64],
    growth: GrowthMap,
) -> Result<SweepResult> {
    if b_c_grid.is_empty() || b_c_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::contract("B_c grid must be strictly increasing"));
    }
    let wb0 = cfg.wideband.ok_or_else(|| {
        Error::Config("wideband sweep needs the wideband block of the scenario".into())
    })?;
    let gains = sample_gain_table(cfg, &[GainVariant::Mode(cfg.phase_mode)])?;
    let mode = GainVariant::Mode(cfg.phase_mode).tag();
    let mut rows = Vec::new();
    for &mu in mu_list {
        let mu_t = mu * cfg.qos.block_duration_t;
        for &b_c in b_c_grid {
            let n_c = match case {
                SweepCase::I => wb0.n_c,
                SweepCase::II => growth.n_c_at(b_c),
            };
            let wb = WidebandConfig::new(wb0.p_over_n0, n_c, b_c, wb0.growth)?;
            let c_e = effective_capacity_wideband(&gains[0], &wb, mu_t)?;
            let snr = wb.subchannel_snr();
            let eb = if c_e > 0.0 { snr / c_e } else { f64::INFINITY };
            rows.push(SweepRow {
                sweep_var: b_c,
                eb_n0: eb,
                c_e: Some(c_e),
                s0: None,
                mu,
                n_elements: cfg.n_elements,
                mode: mode.clone(),
                saturated: !eb.is_finite(),
            });
        }
    }
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata::new(
            match case {
                SweepCase::I => "wideband_case_i",
                SweepCase::II => "wideband_case_ii",
            },
            cfg,
        ),
    })
}
