//! Closed-form moment engine for the received signal under both hypotheses.
//!
//! Under signal transmission each quadrature of the received sample is
//! `Re{y} = s * Re{h} + Re{w}` with an M-level amplitude `s`, a zero-mean
//! Gaussian fade `Re{h} ~ N(0, sigma_h^2/2)` and a real McLeish noise
//! component, all independent; the two quadratures are i.i.d. (see the
//! simulator docs for the matching generation model). Moments of `Re{y}`
//! follow from the binomial expansion over the independent factors, and the
//! even absolute moments of `|y|` follow from expanding `(Re^2 + Im^2)^k`.

use crate::math;
use crate::mcleish::McLeishParams;
use crate::specfun;
use crate::{Error, Result};

/// The binary sensing hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Noise only.
    H0,
    /// Signal present.
    H1,
}

/// Transmit-side description: M equally spaced real amplitudes per
/// dimension in [-s_p, s_p], peak amplitude s_p, and the total variance of
/// the complex fading coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalModel {
    levels_per_dimension: u32,
    amplitude: f64,
    fading_variance: f64,
}

impl SignalModel {
    pub fn new(levels_per_dimension: u32, amplitude: f64, fading_variance: f64) -> Result<Self> {
        if levels_per_dimension < 2 {
            return Err(Error::Domain("constellation needs at least 2 levels"));
        }
        if !amplitude.is_finite() || amplitude <= 0.0 {
            return Err(Error::Domain("amplitude must be finite and > 0"));
        }
        if !fading_variance.is_finite() || fading_variance <= 0.0 {
            return Err(Error::Domain("fading variance must be finite and > 0"));
        }
        Ok(Self {
            levels_per_dimension,
            amplitude,
            fading_variance,
        })
    }

    /// Number of equally spaced real amplitudes per dimension.
    pub fn levels_per_dimension(&self) -> u32 {
        self.levels_per_dimension
    }

    /// Peak amplitude `s_p` (so SNR = s_p^2 / sigma_w^2).
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Total variance of the complex fading coefficient.
    pub fn fading_variance(&self) -> f64 {
        self.fading_variance
    }
}

/// Moments of Re{y} at orders 2, 4, 6, 8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMomentSet {
    pub m2: f64,
    pub m4: f64,
    pub m6: f64,
    pub m8: f64,
}

impl RealMomentSet {
    /// Checks positivity and the Cauchy-Schwarz moment chain
    /// m2^2 <= m4, m4^2 <= m2 m6, m6^2 <= m4 m8 (with float slack).
    pub fn validate(&self) -> Result<()> {
        let vals = [self.m2, self.m4, self.m6, self.m8];
        if vals.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::Domain("real moments must be finite and >= 0"));
        }
        if self.m2 <= 0.0 {
            return Err(Error::Degenerate("zero second moment"));
        }
        const SLACK: f64 = 1.0 + 1e-9;
        if self.m2 * self.m2 > self.m4 * SLACK
            || self.m4 * self.m4 > self.m2 * self.m6 * SLACK
            || self.m6 * self.m6 > self.m4 * self.m8 * SLACK
        {
            return Err(Error::Domain("invalid moment sequence"));
        }
        Ok(())
    }
}

/// Even absolute moments of |y| at orders 2, 4, 6, 8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mu2: f64,
    pub mu4: f64,
    pub mu6: f64,
    pub mu8: f64,
}

impl MomentSet {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.mu2, self.mu4, self.mu6, self.mu8];
        if vals.iter().any(|m| !m.is_finite() || *m <= 0.0) {
            return Err(Error::Domain("absolute moments must be finite and > 0"));
        }
        const SLACK: f64 = 1.0 + 1e-9;
        if self.mu2 * self.mu2 > self.mu4 * SLACK
            || self.mu4 * self.mu4 > self.mu2 * self.mu6 * SLACK
            || self.mu6 * self.mu6 > self.mu4 * self.mu8 * SLACK
        {
            return Err(Error::Domain("invalid moment sequence"));
        }
        Ok(())
    }
}

/// n-th moment of the discrete uniform amplitude over M equally spaced
/// levels in [-s_p, s_p]:
/// `sum_l (-1)^n (M-2l-1)^n s_p^n / (M (M-1)^n)`.
pub fn constellation_moment(n: u32, model: &SignalModel) -> f64 {
    let m = model.levels_per_dimension() as i64;
    let den = m as f64 * math::powi((m - 1) as f64, n);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    for l in 0..m {
        sum += sign * math::powi((m - 2 * l - 1) as f64, n) * math::powi(model.amplitude(), n);
    }
    sum / den
}

/// n-th moment of Re{h} for a circularly-symmetric fade with total variance
/// sigma_h^2: the Gaussian moments `(n-1)!! (sigma_h^2/2)^{n/2}` for even n,
/// zero for odd n. The double factorial is accumulated in f64 so very large
/// orders overflow to infinity instead of panicking.
pub fn fading_real_moment(n: u32, model: &SignalModel) -> f64 {
    if !n.is_multiple_of(2) {
        return 0.0;
    }
    let mut dfact = 1.0;
    let mut i = n as i64 - 1;
    while i > 1 {
        dfact *= i as f64;
        i -= 2;
    }
    dfact * math::powi(0.5 * model.fading_variance(), n / 2)
}

/// Noise-component factor of the binomial expansion: the k-th moment of one
/// noise quadrature,
/// `Gamma(v + k/2) Gamma((1+k)/2) / (Gamma(v) Gamma(1/2)) * (sigma_w^2/v)^{k/2}`
/// (even k; odd k vanish by symmetry). Both Gamma ratios have integer
/// offsets for even k, so they reduce to the exact products
/// `v (v+1) ... (v + k/2 - 1)` and `(k-1)!! / 2^{k/2}` — stable for
/// arbitrarily large `v`, unlike log-Gamma differencing.
fn noise_moment_factor(k: u32, noise: &McLeishParams) -> f64 {
    if !k.is_multiple_of(2) {
        return 0.0;
    }
    let v = noise.non_gaussianity();
    let m = k / 2;
    let mut rising = 1.0;
    for j in 0..m {
        rising *= v + j as f64;
    }
    let dfact = specfun::double_factorial(k as i64 - 1).expect("small k") as f64;
    math::powi(noise.variance() / v, m) * rising * dfact / math::powi(2.0, m)
}

/// n-th moment of Re{y}.
///
/// Under H1 this is the binomial sum over the independent signal and noise
/// parts; under H0 only the pure-noise term survives. Odd orders are zero.
pub fn received_real_moment(
    n: u32,
    model: Option<&SignalModel>,
    noise: &McLeishParams,
    hypothesis: Hypothesis,
) -> Result<f64> {
    if n > 8 {
        return Err(Error::Domain(
            "received_real_moment supports orders up to 8",
        ));
    }
    if !n.is_multiple_of(2) {
        return Ok(0.0);
    }
    match hypothesis {
        Hypothesis::H0 => Ok(noise_moment_factor(n, noise)),
        Hypothesis::H1 => {
            let model = model.ok_or(Error::Domain("H1 moments require a signal model"))?;
            let mut sum = 0.0;
            for k in (0..=n).step_by(2) {
                sum += specfun::binomial(n as u64, k as u64) as f64
                    * noise_moment_factor(k, noise)
                    * fading_real_moment(n - k, model)
                    * constellation_moment(n - k, model);
            }
            Ok(sum)
        }
    }
}

/// Moments of Re{y} at all orders the detector needs.
pub fn real_moments(
    model: Option<&SignalModel>,
    noise: &McLeishParams,
    hypothesis: Hypothesis,
) -> Result<RealMomentSet> {
    Ok(RealMomentSet {
        m2: received_real_moment(2, model, noise, hypothesis)?,
        m4: received_real_moment(4, model, noise, hypothesis)?,
        m6: received_real_moment(6, model, noise, hypothesis)?,
        m8: received_real_moment(8, model, noise, hypothesis)?,
    })
}

/// Even absolute moments of |y| from the i.i.d.-quadrature expansion:
/// mu(2) = 2 m2, mu(4) = 2(m4 + m2^2), mu(6) = 2 m6 + 6 m4 m2,
/// mu(8) = 2 m8 + 8 m6 m2 + 6 m4^2.
pub fn abs_moments(
    model: Option<&SignalModel>,
    noise: &McLeishParams,
    hypothesis: Hypothesis,
) -> Result<MomentSet> {
    let r = real_moments(model, noise, hypothesis)?;
    Ok(MomentSet {
        mu2: 2.0 * r.m2,
        mu4: 2.0 * (r.m4 + r.m2 * r.m2),
        mu6: 2.0 * r.m6 + 6.0 * r.m4 * r.m2,
        mu8: 2.0 * r.m8 + 8.0 * r.m6 * r.m2 + 6.0 * r.m4 * r.m4,
    })
}
