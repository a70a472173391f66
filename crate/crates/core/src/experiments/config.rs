//! Human-readable key/value scenario files.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys mirror the
//! scenario fields; positions take two numbers. Unspecified keys keep the
//! high-precision preset defaults. Units: meters, Hz, seconds, dB.
//!
//! ```text
//! # example scenario
//! tx_pos = 0.0 0.0
//! rx_pos = 10.0 0.0
//! irs_pos = 5.0 10.0
//! l0_db = -30.0
//! exp_direct = 3.6
//! exp_tx_irs = 2.2
//! exp_irs_rx = 2.2
//! m_h = 2.0
//! m_g = 1.0
//! m_f = 1.0
//! n_elements = 100
//! phase_mode = continuous      # or: discrete
//! phase_bits = 2               # used by discrete mode
//! mu = 0.1
//! block_duration_t = 2e-3
//! bandwidth_b = 1e5
//! p_over_n0 = 1e5              # wideband block, optional
//! n_c = 5
//! b_c = 1e4
//! growth = sparse_case_i       # rich | sparse_case_i | sparse_case_ii
//! samples = 100000
//! seed = 7240911
//! ```

use std::collections::BTreeMap;

use crate::channel::{FadingConfig, Geometry, PathLossModel};
use crate::effcap::{QosConfig, SubchannelGrowth, WidebandConfig};
use crate::error::{Error, Result};
use crate::experiments::ScenarioConfig;
use crate::irs::PhaseMode;

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("key '{key}': cannot parse '{value}' as a number")))
}

fn parse_pos(key: &str, value: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "key '{key}': expected two coordinates, got '{value}'"
        )));
    }
    Ok([parse_f64(key, parts[0])?, parse_f64(key, parts[1])?])
}

/// Parses a scenario file body on top of the high-precision defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }

    let defaults = ScenarioConfig::high_precision();
    let mut tx = defaults.geometry.tx_pos;
    let mut rx = defaults.geometry.rx_pos;
    let mut irs = defaults.geometry.irs_pos;
    let mut l0_db = defaults.path_loss.l0_db;
    let mut exp_direct = defaults.path_loss.exp_direct;
    let mut exp_tx_irs = defaults.path_loss.exp_tx_irs;
    let mut exp_irs_rx = defaults.path_loss.exp_irs_rx;
    let mut m_h = defaults.fading.m_h;
    let mut m_g = defaults.fading.m_g;
    let mut m_f = defaults.fading.m_f;
    let mut n_elements = defaults.n_elements;
    let mut phase_mode = String::from("continuous");
    let mut phase_bits = 2u32;
    let mut mu = defaults.qos.mu;
    let mut block_t = defaults.qos.block_duration_t;
    let mut bandwidth = defaults.qos.bandwidth_b;
    let mut samples = defaults.samples;
    let mut seed = defaults.seed;
    let mut p_over_n0: Option<f64> = None;
    let mut n_c = 5.0f64;
    let mut b_c = 1e4f64;
    let mut growth = SubchannelGrowth::SparseCaseI;

    for (key, value) in &pairs {
        match key.as_str() {
            "tx_pos" => tx = parse_pos(key, value)?,
            "rx_pos" => rx = parse_pos(key, value)?,
            "irs_pos" => irs = parse_pos(key, value)?,
            "l0_db" => l0_db = parse_f64(key, value)?,
            "exp_direct" => exp_direct = parse_f64(key, value)?,
            "exp_tx_irs" => exp_tx_irs = parse_f64(key, value)?,
            "exp_irs_rx" => exp_irs_rx = parse_f64(key, value)?,
            "m_h" => m_h = parse_f64(key, value)?,
            "m_g" => m_g = parse_f64(key, value)?,
            "m_f" => m_f = parse_f64(key, value)?,
            "n_elements" => {
                n_elements = value.parse().map_err(|_| {
                    Error::Config(format!("key 'n_elements': bad count '{value}'"))
                })?
            }
            "phase_mode" => phase_mode = value.clone(),
            "phase_bits" => {
                phase_bits = value.parse().map_err(|_| {
                    Error::Config(format!("key 'phase_bits': bad count '{value}'"))
                })?
            }
            "mu" => mu = parse_f64(key, value)?,
            "block_duration_t" => block_t = parse_f64(key, value)?,
            "bandwidth_b" => bandwidth = parse_f64(key, value)?,
            "samples" => {
                samples = value.parse().map_err(|_| {
                    Error::Config(format!("key 'samples': bad count '{value}'"))
                })?
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("key 'seed': bad integer '{value}'")))?
            }
            "p_over_n0" => p_over_n0 = Some(parse_f64(key, value)?),
            "n_c" => n_c = parse_f64(key, value)?,
            "b_c" => b_c = parse_f64(key, value)?,
            "growth" => {
                growth = match value.as_str() {
                    "rich" => SubchannelGrowth::Rich,
                    "sparse_case_i" => SubchannelGrowth::SparseCaseI,
                    "sparse_case_ii" => SubchannelGrowth::SparseCaseII,
                    other => {
                        return Err(Error::Config(format!(
                            "key 'growth': unknown value '{other}'"
                        )))
                    }
                }
            }
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
    }

    let phase_mode = match phase_mode.as_str() {
        "continuous" => PhaseMode::Continuous,
        "discrete" => PhaseMode::Discrete { bits: phase_bits },
        other => {
            return Err(Error::Config(format!(
                "phase_mode must be 'continuous' or 'discrete', got '{other}'"
            )))
        }
    };
    let wideband = match p_over_n0 {
        None => None,
        Some(p) => Some(WidebandConfig::new(p, n_c, b_c, growth).map_err(to_config)?),
    };

    let cfg = ScenarioConfig {
        geometry: Geometry::new(tx, rx, irs).map_err(to_config)?,
        path_loss: PathLossModel::new(l0_db, exp_direct, exp_tx_irs, exp_irs_rx)
            .map_err(to_config)?,
        fading: FadingConfig::new(m_h, m_g, m_f).map_err(to_config)?,
        n_elements,
        phase_mode,
        qos: QosConfig::new(mu, block_t, bandwidth).map_err(to_config)?,
        wideband,
        samples,
        seed,
    };
    cfg.validate().map_err(to_config)?;
    Ok(cfg)
}

fn to_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

/// Serializes a scenario back into the key/value format.
pub fn to_config_string(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let g = &cfg.geometry;
    out.push_str(&format!("tx_pos = {} {}\n", g.tx_pos[0], g.tx_pos[1]));
    out.push_str(&format!("rx_pos = {} {}\n", g.rx_pos[0], g.rx_pos[1]));
    out.push_str(&format!("irs_pos = {} {}\n", g.irs_pos[0], g.irs_pos[1]));
    let p = &cfg.path_loss;
    out.push_str(&format!("l0_db = {}\n", p.l0_db));
    out.push_str(&format!("exp_direct = {}\n", p.exp_direct));
    out.push_str(&format!("exp_tx_irs = {}\n", p.exp_tx_irs));
    out.push_str(&format!("exp_irs_rx = {}\n", p.exp_irs_rx));
    out.push_str(&format!("m_h = {}\n", cfg.fading.m_h));
    out.push_str(&format!("m_g = {}\n", cfg.fading.m_g));
    out.push_str(&format!("m_f = {}\n", cfg.fading.m_f));
    out.push_str(&format!("n_elements = {}\n", cfg.n_elements));
    match cfg.phase_mode {
        PhaseMode::Continuous => out.push_str("phase_mode = continuous\n"),
        PhaseMode::Discrete { bits } => {
            out.push_str("phase_mode = discrete\n");
            out.push_str(&format!("phase_bits = {bits}\n"));
        }
    }
    out.push_str(&format!("mu = {}\n", cfg.qos.mu));
    out.push_str(&format!("block_duration_t = {}\n", cfg.qos.block_duration_t));
    out.push_str(&format!("bandwidth_b = {}\n", cfg.qos.bandwidth_b));
    if let Some(wb) = &cfg.wideband {
        out.push_str(&format!("p_over_n0 = {}\n", wb.p_over_n0));
        out.push_str(&format!("n_c = {}\n", wb.n_c));
        out.push_str(&format!("b_c = {}\n", wb.b_c));
        out.push_str(&format!(
            "growth = {}\n",
            match wb.growth {
                SubchannelGrowth::Rich => "rich",
                SubchannelGrowth::SparseCaseI => "sparse_case_i",
                SubchannelGrowth::SparseCaseII => "sparse_case_ii",
            }
        ));
    }
    out.push_str(&format!("samples = {}\n", cfg.samples));
    out.push_str(&format!("seed = {}\n", cfg.seed));
    out
}
