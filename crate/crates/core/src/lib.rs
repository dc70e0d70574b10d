//! Core library for the `mander` toolkit.
//!
//! The model under study places `k * n` voters on a circle, each casting an
//! independent uniform ±1 vote, and asks how many districts a partisan
//! mapmaker can carry when districts must be contiguous arcs of exactly `n`
//! voters. The crate provides:
//!
//! * [`voter_model`] — vote generation, the optimal contiguous gerrymander,
//!   and exact brute-force enumeration of the district-count distribution;
//! * [`exact_analysis`] — exact rational win probabilities for two districts
//!   and the window/walk statistics behind them;
//! * [`limit_constants`] — the limiting probability `1/(1+e^pi)` computed by
//!   three independent numeric routes;
//! * [`monte_carlo`] — seeded, schedule-independent simulation harnesses;
//! * [`compactness`] — polygon compactness scores and the half-disk
//!   optimality constants;
//! * [`splitline`] — partisan split-line districting over weighted planar
//!   election data.

pub mod compactness;
pub mod error;
pub mod exact_analysis;
pub mod limit_constants;
pub mod monte_carlo;
pub mod quadrature;
pub mod splitline;
pub mod voter_model;

pub use error::{Error, Result};
