//! Large-scale path loss from geometry and Nakagami-m small-scale fading
//! with reproducible, counter-based random streams.

use num_complex::Complex64;
use rand::rand_core::TryRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Gamma, Uniform};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Planar positions of the three terminals, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub tx_pos: [f64; 2],
    pub rx_pos: [f64; 2],
    pub irs_pos: [f64; 2],
}

impl Geometry {
    /// Validates that all pairwise distances are strictly positive.
    pub fn new(tx_pos: [f64; 2], rx_pos: [f64; 2], irs_pos: [f64; 2]) -> Result<Self> {
        let g = Geometry {
            tx_pos,
            rx_pos,
            irs_pos,
        };
        for (d, name) in [
            (g.direct_distance(), "tx-rx"),
            (g.tx_irs_distance(), "tx-irs"),
            (g.irs_rx_distance(), "irs-rx"),
        ] {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::domain(format!(
                    "{name} distance must be strictly positive, got {d}"
                )));
            }
        }
        Ok(g)
    }

    pub fn direct_distance(&self) -> f64 {
        dist(self.tx_pos, self.rx_pos)
    }

    pub fn tx_irs_distance(&self) -> f64 {
        dist(self.tx_pos, self.irs_pos)
    }

    pub fn irs_rx_distance(&self) -> f64 {
        dist(self.irs_pos, self.rx_pos)
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Which of the three links a path-loss query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Direct,
    TxIrs,
    IrsRx,
}

/// Distance-dependent path loss `ℓ = L0 · d^(−ϑ)` with a per-link exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    /// Reference gain at 1 m, in dB (typically negative).
    pub l0_db: f64,
    /// Exponent for the direct tx-rx link.
    pub exp_direct: f64,
    /// Exponent for the tx-IRS link.
    pub exp_tx_irs: f64,
    /// Exponent for the IRS-rx link.
    pub exp_irs_rx: f64,
}

impl PathLossModel {
    pub fn new(l0_db: f64, exp_direct: f64, exp_tx_irs: f64, exp_irs_rx: f64) -> Result<Self> {
        if !l0_db.is_finite() {
            return Err(Error::domain("l0_db must be finite"));
        }
        for (e, name) in [
            (exp_direct, "exp_direct"),
            (exp_tx_irs, "exp_tx_irs"),
            (exp_irs_rx, "exp_irs_rx"),
        ] {
            if !(e > 0.0) {
                return Err(Error::domain(format!("{name} must be > 0, got {e}")));
            }
        }
        Ok(PathLossModel {
            l0_db,
            exp_direct,
            exp_tx_irs,
            exp_irs_rx,
        })
    }

    fn exponent(&self, link: Link) -> f64 {
        match link {
            Link::Direct => self.exp_direct,
            Link::TxIrs => self.exp_tx_irs,
            Link::IrsRx => self.exp_irs_rx,
        }
    }
}

/// Linear power gain of one link at the given distance (meters).
pub fn path_loss(model: &PathLossModel, distance: f64, link: Link) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::domain(format!(
            "distance must be strictly positive, got {distance}"
        )));
    }
    let l0 = 10f64.powf(model.l0_db / 10.0);
    Ok(l0 * distance.powf(-model.exponent(link)))
}

/// Linear power gains of the three links: `ℓ_h` (direct), `ℓ_g` (tx-IRS),
/// `ℓ_f` (IRS-rx).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub direct: f64,
    pub tx_irs: f64,
    pub irs_rx: f64,
}

impl LinkGains {
    pub fn from_geometry(geometry: &Geometry, model: &PathLossModel) -> Result<Self> {
        Ok(LinkGains {
            direct: path_loss(model, geometry.direct_distance(), Link::Direct)?,
            tx_irs: path_loss(model, geometry.tx_irs_distance(), Link::TxIrs)?,
            irs_rx: path_loss(model, geometry.irs_rx_distance(), Link::IrsRx)?,
        })
    }

    /// Product `ℓ_f · ℓ_g` of the two reflected-path hops.
    pub fn reflected(&self) -> f64 {
        self.tx_irs * self.irs_rx
    }
}

/// Nakagami shape parameters of the three links; the spread is fixed at 1,
/// so squared magnitudes have unit mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingConfig {
    pub m_h: f64,
    pub m_g: f64,
    pub m_f: f64,
}

impl FadingConfig {
    pub fn new(m_h: f64, m_g: f64, m_f: f64) -> Result<Self> {
        for (m, name) in [(m_h, "m_h"), (m_g, "m_g"), (m_f, "m_f")] {
            if !(m >= 0.5) {
                return Err(Error::domain(format!(
                    "Nakagami shape {name} must be >= 0.5, got {m}"
                )));
            }
        }
        Ok(FadingConfig { m_h, m_g, m_f })
    }
}

/// One draw of the small-scale coefficients: scalar direct link `h`, and
/// per-element vectors `f` (IRS-rx) and `g` (tx-IRS).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Complex64,
    pub f: Vec<Complex64>,
    pub g: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn n_elements(&self) -> usize {
        debug_assert_eq!(self.f.len(), self.g.len());
        self.f.len()
    }
}

/// SplitMix64 output function; mixes one 64-bit word.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based random stream: the state is a pure function of
/// `(seed, stream, index)`, so realizations are reproducible under any
/// degree of parallelism and independent of worker count.
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: Xoshiro256PlusPlus,
}

impl StreamRng {
    /// Stream for realization `index` of the default stream of `seed`.
    pub fn for_index(seed: u64, index: u64) -> Self {
        Self::for_stream(seed, 0, index)
    }

    /// Stream for realization `index` of a named substream (sweep point,
    /// oracle fixture, ...) of `seed`.
    pub fn for_stream(seed: u64, stream: u64, index: u64) -> Self {
        let mut word = splitmix64(seed);
        word = splitmix64(word ^ stream.wrapping_mul(0xd129_0d3b_bcf7_222d));
        word = splitmix64(word ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        StreamRng {
            inner: Xoshiro256PlusPlus::seed_from_u64(word),
        }
    }
}

impl TryRng for StreamRng {
    type Error = std::convert::Infallible;

    fn try_next_u32(&mut self) -> std::result::Result<u32, Self::Error> {
        self.inner.try_next_u32()
    }

    fn try_next_u64(&mut self) -> std::result::Result<u64, Self::Error> {
        self.inner.try_next_u64()
    }

    fn try_fill_bytes(&mut self, dst: &mut [u8]) -> std::result::Result<(), Self::Error> {
        self.inner.try_fill_bytes(dst)
    }
}

/// Draws a Nakagami(m, 1) magnitude: the squared value is Gamma-distributed
/// with shape `m` and scale `1/m`, so `E{X²} = 1`.
pub fn sample_nakagami_magnitude(m: f64, rng: &mut StreamRng) -> Result<f64> {
    if !(m >= 0.5) {
        return Err(Error::domain(format!(
            "Nakagami shape must be >= 0.5, got {m}"
        )));
    }
    let power = Gamma::new(m, 1.0 / m)
        .map_err(|e| Error::domain(format!("gamma sampler: {e}")))?
        .sample(rng);
    Ok(power.sqrt())
}

/// Draws one channel realization: magnitudes Nakagami per `fading`, phases
/// independent uniform on `[0, 2π)`. Draw order is fixed (h, then f, then g)
/// so paired variants can share the stream.
pub fn sample_channel(
    fading: &FadingConfig,
    n_elements: usize,
    rng: &mut StreamRng,
) -> Result<ChannelRealization> {
    let phase = Uniform::new(0.0, std::f64::consts::TAU)
        .map_err(|e| Error::domain(format!("uniform sampler: {e}")))?;
    let mut draw = |m: f64| -> Result<Complex64> {
        let mag = sample_nakagami_magnitude(m, rng)?;
        let arg = phase.sample(rng);
        Ok(Complex64::from_polar(mag, arg))
    };
    let h = draw(fading.m_h)?;
    let f = (0..n_elements)
        .map(|_| draw(fading.m_f))
        .collect::<Result<Vec<_>>>()?;
    let g = (0..n_elements)
        .map(|_| draw(fading.m_g))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelRealization { h, f, g })
}

/// Convenience wrapper that encodes the determinism contract: the result is
/// a pure function of `(fading, n_elements, seed, index)`.
pub fn sample_channel_indexed(
    fading: &FadingConfig,
    n_elements: usize,
    seed: u64,
    index: u64,
) -> Result<ChannelRealization> {
    sample_channel(fading, n_elements, &mut StreamRng::for_index(seed, index))
}
