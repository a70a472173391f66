//! Link-level analysis of an IRS-aided wireless channel under statistical
//! QoS constraints.
//!
//! The library is organized around the composite channel power gain `ξ` of a
//! single-antenna link assisted by an intelligent reflecting surface (IRS)
//! with `N` passive phase-shifting elements:
//!
//! * [`channel`] — geometry, distance-dependent path loss, and Nakagami-m
//!   small-scale fading with reproducible counter-based random streams.
//! * [`irs`] — optimal and quantized phase configurations and the resulting
//!   composite gain samples.
//! * [`stats`] — closed-form moments of the gain components, Gamma moment
//!   matching, and Gamma Laplace-transform expectations.
//! * [`effcap`] — Monte-Carlo effective capacity (log-mean-exp based) and its
//!   derivatives at the zero-SNR origin.
//! * [`ee`] — minimum bit energy and wideband slope for the low-power and
//!   wideband regimes, plus the linear spectral-efficiency approximation.
//! * [`experiments`] — scenario configuration, figure-data sweeps, the oracle
//!   validation suite, and CSV output.

// Validation deliberately writes `!(x > 0.0)` so NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod ee;
pub mod effcap;
pub mod error;
pub mod experiments;
pub mod irs;
pub mod stats;

pub use error::{Error, Result};
