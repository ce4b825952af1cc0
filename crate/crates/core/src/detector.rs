//! Moment-based detector and energy-detector baseline.
//!
//! The moment-based test statistic is the negated ratio of the 4th to the
//! squared 2nd absolute sample moments, `T = -mu(4)/mu(2)^2`. Under noise
//! only it concentrates at `-(2 + 3/(2v))` independently of the noise power,
//! which is what makes the detector immune to noise-power uncertainty. The
//! decision statistic used throughout is the CLT-normalized
//! `Z = sqrt(N) (T_hat + 2 + 3/(2v))`, which is asymptotically
//! `N(0, sigma2_h0(v))` under H0, so the CFAR threshold is
//! `lambda = sigma_h0 * Qinv(pf_target)` and the closed-form Pf/Pd follow.
//!
//! The energy detector normalizes the average power by an *assumed* noise
//! power; its threshold is designed from the H0 statistics at the assumed
//! power while the actual false-alarm/detection probabilities are driven by
//! the true noise law, which is how power uncertainty degrades it.

use num_complex::Complex64;

use crate::math;
use crate::mcleish::McLeishParams;
use crate::moments::{self, Hypothesis, MomentSet, RealMomentSet, SignalModel};
use crate::specfun;
use crate::{Error, Result};

/// Operating point of the moment-based detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdConfig {
    /// Noise description; the non-Gaussianity parameter is assumed known.
    pub noise: McLeishParams,
    /// Samples per sensing decision.
    pub sample_count: usize,
    /// Constant false-alarm rate target.
    pub pf_target: f64,
}

impl MdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::Domain("sample count must be >= 1"));
        }
        if !(self.pf_target > 0.0 && self.pf_target < 1.0) {
            return Err(Error::Domain("pf target must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Operating point of the energy detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdConfig {
    /// Noise power the detector believes in (possibly uncertainty-corrupted).
    pub assumed_noise_power: f64,
    /// The actual noise law driving the samples.
    pub true_noise: McLeishParams,
    /// Samples per sensing decision.
    pub sample_count: usize,
    /// Constant false-alarm rate target.
    pub pf_target: f64,
}

impl EdConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.assumed_noise_power.is_finite() || self.assumed_noise_power <= 0.0 {
            return Err(Error::Domain("assumed noise power must be > 0"));
        }
        if self.sample_count == 0 {
            return Err(Error::Domain("sample count must be >= 1"));
        }
        if !(self.pf_target > 0.0 && self.pf_target < 1.0) {
            return Err(Error::Domain("pf target must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// One sensing decision: the compared statistic, the threshold and the
/// resulting hypothesis (H1 exactly when the statistic exceeds the
/// threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionOutcome {
    pub statistic_value: f64,
    pub threshold: f64,
    pub decision: Hypothesis,
}

impl DecisionOutcome {
    pub fn new(statistic_value: f64, threshold: f64) -> Self {
        let decision = if statistic_value > threshold {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        };
        Self {
            statistic_value,
            threshold,
            decision,
        }
    }
}

/// n-th absolute sample moment `(1/N) sum |y[u]|^n`.
pub fn sample_abs_moment(samples: &[Complex64], n: u32) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("empty sample buffer"));
    }
    if n == 0 {
        return Err(Error::Domain("moment order must be >= 1"));
    }
    let mut sum = 0.0;
    if n.is_multiple_of(2) {
        for y in samples {
            sum += math::powi(y.norm_sqr(), n / 2);
        }
    } else {
        for y in samples {
            sum += math::powi(math::sqrt(y.norm_sqr()), n);
        }
    }
    Ok(sum / samples.len() as f64)
}

/// Moment-based test statistic `T_hat = -mu_hat(4) / mu_hat(2)^2`.
///
/// Scale-free: multiplying every sample by a constant leaves it unchanged.
pub fn test_statistic(samples: &[Complex64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("empty sample buffer"));
    }
    let mut sum2 = 0.0;
    let mut sum4 = 0.0;
    for y in samples {
        let r2 = y.norm_sqr();
        sum2 += r2;
        sum4 += r2 * r2;
    }
    let n = samples.len() as f64;
    let mu2 = sum2 / n;
    if mu2 == 0.0 {
        return Err(Error::Degenerate("zero second sample moment"));
    }
    Ok(-(sum4 / n) / (mu2 * mu2))
}

/// Noise-only mean of the test statistic, `-(2 + 3/(2v))`.
pub fn t_h0(v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Domain("v must be finite and > 0"));
    }
    Ok(-(2.0 + 3.0 / (2.0 * v)))
}

/// Signal-present mean of the test statistic,
/// `-m4/(2 m2^2) - 1/2` with `m_n` the closed-form moments of Re{y}.
pub fn t_h1(model: &SignalModel, noise: &McLeishParams) -> Result<f64> {
    let m = moments::real_moments(Some(model), noise, Hypothesis::H1)?;
    Ok(-m.m4 / (2.0 * m.m2 * m.m2) - 0.5)
}

/// CLT-normalized decision statistic `Z = sqrt(N) (T_hat - T_h0)`.
pub fn decision_statistic(samples: &[Complex64], v: f64) -> Result<f64> {
    let t = test_statistic(samples)?;
    Ok(math::sqrt(samples.len() as f64) * (t - t_h0(v)?))
}

/// Asymptotic variance of Z under H0:
/// `(16 v^3 + 120 v^2 + 294 v + 189) / (4 v^3)`.
pub fn sigma2_h0(v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Domain("v must be finite and > 0"));
    }
    let v2 = v * v;
    let v3 = v2 * v;
    Ok((16.0 * v3 + 120.0 * v2 + 294.0 * v + 189.0) / (4.0 * v3))
}

/// Asymptotic variance of Z under H1 from the moments of Re{y}:
/// `[2 m2^6 - 4 m4 m2^4 + (m4^2 + m8) m2^2 - 4 m4 m6 m2 + 4 m4^3] / (8 m2^6)`.
pub fn sigma2_h1(m: &RealMomentSet) -> Result<f64> {
    m.validate()?;
    let m2_2 = m.m2 * m.m2;
    let m2_4 = m2_2 * m2_2;
    let m2_6 = m2_4 * m2_2;
    let num = 2.0 * m2_6 - 4.0 * m.m4 * m2_4 + (m.m4 * m.m4 + m.m8) * m2_2
        - 4.0 * m.m4 * m.m6 * m.m2
        + 4.0 * m.m4 * m.m4 * m.m4;
    Ok(num / (8.0 * m2_6))
}

/// Delta-method variance of Z from the absolute moments of |y|:
/// gradient `c = [2 mu4/mu2^3, -1/mu2^2]`, moment covariance `Sigma`, and
/// the quadratic form `c Sigma c^T`.
pub fn delta_method_variance(mu: &MomentSet) -> Result<f64> {
    mu.validate()?;
    let c1 = 2.0 * mu.mu4 / math::powi(mu.mu2, 3);
    let c2 = -1.0 / (mu.mu2 * mu.mu2);
    let s11 = mu.mu4 - mu.mu2 * mu.mu2;
    let s12 = mu.mu6 - mu.mu2 * mu.mu4;
    let s22 = mu.mu8 - mu.mu4 * mu.mu4;
    Ok(c1 * c1 * s11 + 2.0 * c1 * c2 * s12 + c2 * c2 * s22)
}

/// False-alarm probability of the normalized statistic at threshold
/// `lambda`: `Q(lambda / sigma_h0(v))`. Independent of the noise power.
pub fn pf(threshold: f64, v: f64) -> Result<f64> {
    if !threshold.is_finite() {
        return Err(Error::Domain("threshold must be finite"));
    }
    specfun::gaussian_q(threshold / math::sqrt(sigma2_h0(v)?))
}

/// CFAR threshold: `sigma_h0(v) * Qinv(pf_target)`, so that
/// `pf(md_threshold(p, v), v) = p`.
pub fn md_threshold(pf_target: f64, v: f64) -> Result<f64> {
    let q = specfun::inverse_gaussian_q(pf_target)?;
    Ok(q * math::sqrt(sigma2_h0(v)?))
}

/// Closed-form detection probability of the moment-based detector.
pub fn md_pd(config: &MdConfig, model: &SignalModel) -> Result<f64> {
    config.validate()?;
    let v = config.noise.non_gaussianity();
    let m = moments::real_moments(Some(model), &config.noise, Hypothesis::H1)?;
    let t1 = -m.m4 / (2.0 * m.m2 * m.m2) - 0.5;
    let sigma1 = math::sqrt(sigma2_h1(&m)?);
    let lambda = md_threshold(config.pf_target, v)?;
    let shift = math::sqrt(config.sample_count as f64) * (t1 - t_h0(v)?);
    specfun::gaussian_q((lambda - shift) / sigma1)
}

/// Runs the moment-based detector on a buffer: normalized statistic against
/// the CFAR threshold.
pub fn md_decide(samples: &[Complex64], config: &MdConfig) -> Result<DecisionOutcome> {
    config.validate()?;
    if samples.len() != config.sample_count {
        return Err(Error::Domain("buffer length differs from configured N"));
    }
    let z = decision_statistic(samples, config.noise.non_gaussianity())?;
    let lambda = md_threshold(config.pf_target, config.noise.non_gaussianity())?;
    Ok(DecisionOutcome::new(z, lambda))
}

/// Normalized energy statistic `(1/(N sigma_hat^2)) sum |y[u]|^2`.
pub fn ed_statistic(samples: &[Complex64], assumed_noise_power: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("empty sample buffer"));
    }
    if !assumed_noise_power.is_finite() || assumed_noise_power <= 0.0 {
        return Err(Error::Domain("assumed noise power must be > 0"));
    }
    let sum2: f64 = samples.iter().map(|y| y.norm_sqr()).sum();
    Ok(sum2 / (samples.len() as f64 * assumed_noise_power))
}

/// Gaussian-approximation mean and deviation of the ED statistic when the
/// samples follow `law` but the detector normalizes by `normalizer`.
fn ed_gaussian(law: &MomentSet, normalizer: f64, sample_count: usize) -> (f64, f64) {
    let mean = law.mu2 / normalizer;
    let var = (law.mu4 - law.mu2 * law.mu2) / (sample_count as f64 * normalizer * normalizer);
    (mean, math::sqrt(var))
}

/// ED threshold designed from the H0 statistics at the *assumed* power:
/// `lambda = E + Qinv(pf_target) * sqrt(Var)` with E and Var the believed
/// mean/variance of the normalized statistic.
pub fn ed_threshold(config: &EdConfig) -> Result<f64> {
    config.validate()?;
    let believed = McLeishParams::new(
        config.assumed_noise_power,
        config.true_noise.non_gaussianity(),
    )?;
    let mu = moments::abs_moments(None, &believed, Hypothesis::H0)?;
    let (mean, dev) = ed_gaussian(&mu, config.assumed_noise_power, config.sample_count);
    Ok(mean + specfun::inverse_gaussian_q(config.pf_target)? * dev)
}

/// ED false-alarm probability at threshold `lambda` under the true noise law.
pub fn ed_pf(lambda: f64, config: &EdConfig) -> Result<f64> {
    config.validate()?;
    let mu = moments::abs_moments(None, &config.true_noise, Hypothesis::H0)?;
    let (mean, dev) = ed_gaussian(&mu, config.assumed_noise_power, config.sample_count);
    specfun::gaussian_q((lambda - mean) / dev)
}

/// ED detection probability at threshold `lambda` under the true signal law.
pub fn ed_pd(lambda: f64, config: &EdConfig, model: &SignalModel) -> Result<f64> {
    config.validate()?;
    let mu = moments::abs_moments(Some(model), &config.true_noise, Hypothesis::H1)?;
    let (mean, dev) = ed_gaussian(&mu, config.assumed_noise_power, config.sample_count);
    specfun::gaussian_q((lambda - mean) / dev)
}

/// Runs the energy detector on a buffer.
pub fn ed_decide(samples: &[Complex64], config: &EdConfig) -> Result<DecisionOutcome> {
    config.validate()?;
    if samples.len() != config.sample_count {
        return Err(Error::Domain("buffer length differs from configured N"));
    }
    let t = ed_statistic(samples, config.assumed_noise_power)?;
    let lambda = ed_threshold(config)?;
    Ok(DecisionOutcome::new(t, lambda))
}
