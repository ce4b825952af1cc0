//! Blind moment-based spectrum sensing under McLeish noise.
//!
//! The McLeish family (a.k.a. generalized symmetric Laplace / variance-gamma)
//! spans Gaussian (`v -> inf`), Laplacian (`v = 1`) and heavier impulsive
//! regimes through a single non-Gaussianity parameter `v`, while keeping every
//! moment finite. This crate implements a blind spectrum sensor for that noise
//! family end to end:
//!
//! * [`specfun`] — the scalar special-function kernel (Gamma, modified Bessel
//!   K of real order, Gaussian Q and its inverse, double factorials).
//! * [`mcleish`] — noise density, moments, circularly-symmetric sampler and
//!   moment-based parameter fitting.
//! * [`moments`] — closed-form moments of the received signal under both
//!   hypotheses (constellation x fading x noise).
//! * [`detector`] — the moment-based detector (test statistic, CLT
//!   asymptotics, CFAR threshold, false-alarm and detection probabilities)
//!   and the energy-detector baseline.
//! * [`simulator`] — deterministic seeded Monte-Carlo trial harness for
//!   empirical Pf/Pd, ROC and Pd-vs-SNR curves.
//!
//! The crate is `no_std` (with `alloc`); float math is routed through `libm`,
//! so results are bit-identical with or without the standard library.
//!
//! ```
//! use mdsense::detector::{md_decide, md_threshold, MdConfig};
//! use mdsense::mcleish::sample_ccs;
//! use mdsense::{Hypothesis, McLeishParams};
//!
//! // Laplacian-tailed noise (v = 1), CFAR target 10%
//! let noise = McLeishParams::new(1.0, 1.0).unwrap();
//! let config = MdConfig { noise, sample_count: 4000, pf_target: 0.1 };
//!
//! let buffer = sample_ccs(&noise, config.sample_count, 42).unwrap();
//! let outcome = md_decide(&buffer, &config).unwrap();
//! assert_eq!(outcome.decision, Hypothesis::H0); // noise-only input
//! assert_eq!(outcome.threshold, md_threshold(0.1, 1.0).unwrap());
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod detector;
pub mod mcleish;
pub mod moments;
pub mod simulator;
pub mod specfun;

pub use error::{Error, Result};
pub use mcleish::{ComplexSampleBuffer, McLeishParams};
pub use moments::{Hypothesis, MomentSet, RealMomentSet, SignalModel};
pub use num_complex::Complex64;

/// Crate version, recorded in CLI output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
