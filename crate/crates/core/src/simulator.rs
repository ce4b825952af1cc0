//! Deterministic seeded Monte-Carlo harness for empirical Pf/Pd, ROC and
//! Pd-vs-SNR curves.
//!
//! Two generation models are provided. The **flat** model draws every sample
//! independently with the two quadratures generated as independent rails,
//! `Re{y} = s1 * a + u` and `Im{y} = s2 * b + q`, where `s1, s2` are
//! independent M-PAM amplitudes, `a, b ~ N(0, sigma_h^2/2)` fades and
//! `(u, q)` a McLeish noise pair. The quadratures of the received sample are
//! then i.i.d. with exactly the closed-form moments of [`crate::moments`]
//! (for BPSK this coincides with multiplying one symbol by a complex
//! Gaussian fade). The **SRRC** model runs the physical chain instead:
//! pulse-shaped symbol stream at F samples per symbol, per-sample fading and
//! noise, matched receiver filter, and every output sample handed to the
//! detector without decimation (a blind sensor has no symbol timing).
//!
//! Every trial draws from its own ChaCha8 stream derived from the master
//! seed and the trial index, so results are reproducible and independent of
//! execution order.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::detector;
use crate::math;
use crate::mcleish::{CcsSampler, McLeishParams};
use crate::moments::{Hypothesis, SignalModel};
use crate::{Error, Result};

/// Modulation alphabet (M levels per real dimension).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Qam16,
}

impl Modulation {
    /// Equally spaced real amplitudes per dimension.
    pub fn levels_per_dimension(&self) -> u32 {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qam16 => 4,
        }
    }
}

/// Transmit pulse shaping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShaping {
    /// Symbol-rate i.i.d. samples (the model the closed forms describe).
    Flat,
    /// Square-root raised-cosine chain at both ends.
    Srrc {
        rolloff: f64,
        oversampling: u32,
        span_taps: u32,
    },
}

impl PulseShaping {
    /// The default SRRC configuration: roll-off 0.2, F = 4, length 4F + 1.
    pub fn default_srrc() -> Self {
        PulseShaping::Srrc {
            rolloff: 0.2,
            oversampling: 4,
            span_taps: 17,
        }
    }
}

/// Transmitter description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxSpec {
    pub modulation: Modulation,
    pub amplitude: f64,
    pub pulse_shaping: PulseShaping,
}

impl TxSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() || self.amplitude <= 0.0 {
            return Err(Error::Domain("amplitude must be finite and > 0"));
        }
        if let PulseShaping::Srrc {
            rolloff,
            oversampling,
            span_taps,
        } = self.pulse_shaping
        {
            validate_srrc(rolloff, oversampling, span_taps)?;
        }
        Ok(())
    }
}

/// Per-sample independent complex Gaussian fading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub fading_variance: f64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            fading_variance: 1.0,
        }
    }
}

/// Noise-power uncertainty: the assumed power is the true power times a
/// factor drawn uniformly in dB on [-L, L], one draw per trial. Calibration
/// errors beyond L = 2 dB are outside the usual modeling range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintySpec {
    pub half_range_db: f64,
}

impl Default for UncertaintySpec {
    fn default() -> Self {
        Self { half_range_db: 0.0 }
    }
}

impl UncertaintySpec {
    pub fn validate(&self) -> Result<()> {
        if !self.half_range_db.is_finite() || self.half_range_db < 0.0 {
            return Err(Error::Domain("uncertainty half-range must be >= 0 dB"));
        }
        Ok(())
    }
}

/// Which detector a batch drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorKind {
    Md,
    Ed,
}

/// A Monte-Carlo run descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialBatch {
    pub trials: usize,
    pub samples_per_trial: usize,
    pub master_seed: u64,
    pub detector: DetectorKind,
    pub hypothesis: Hypothesis,
}

impl TrialBatch {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("at least one trial required"));
        }
        if self.samples_per_trial < 4 {
            return Err(Error::Domain("at least 4 samples per trial required"));
        }
        Ok(())
    }
}

/// Everything the chain needs besides the batch descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub tx: TxSpec,
    pub channel: ChannelSpec,
    pub noise: McLeishParams,
    pub uncertainty: UncertaintySpec,
    pub pf_target: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.tx.validate()?;
        self.uncertainty.validate()?;
        if !self.channel.fading_variance.is_finite() || self.channel.fading_variance <= 0.0 {
            return Err(Error::Domain("fading variance must be finite and > 0"));
        }
        if !(self.pf_target > 0.0 && self.pf_target < 1.0) {
            return Err(Error::Domain("pf target must lie in (0, 1)"));
        }
        Ok(())
    }

    /// The closed-form signal model matching this scenario.
    pub fn signal_model(&self) -> Result<SignalModel> {
        SignalModel::new(
            self.tx.modulation.levels_per_dimension(),
            self.tx.amplitude,
            self.channel.fading_variance,
        )
    }
}

/// Empirical decision rate of one batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchResult {
    /// Fraction of trials decided H1.
    pub detection_rate: f64,
    /// 95% binomial half-width (normal approximation).
    pub ci_halfwidth: f64,
    pub trials: usize,
}

/// One point of an ROC or Pd-vs-SNR curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Pf target for ROC curves, SNR in dB for sweeps.
    pub x: f64,
    pub pd: f64,
    pub pf_empirical: f64,
    pub ci_halfwidth: f64,
}

fn validate_srrc(rolloff: f64, oversampling: u32, span_taps: u32) -> Result<()> {
    if !(rolloff > 0.0 && rolloff <= 1.0) {
        return Err(Error::Domain("rolloff must lie in (0, 1]"));
    }
    if oversampling < 1 {
        return Err(Error::Domain("oversampling factor must be >= 1"));
    }
    if span_taps < 3 || span_taps.is_multiple_of(2) {
        return Err(Error::Domain("filter length must be odd and >= 3"));
    }
    Ok(())
}

/// Unit-energy square-root raised-cosine impulse response sampled at
/// `oversampling` points per symbol, centered, `span_taps` long. The
/// removable singularities at t = 0 and |t| = 1/(4 rolloff) are evaluated
/// by their limits.
pub fn srrc_taps(rolloff: f64, oversampling: u32, span_taps: u32) -> Result<Vec<f64>> {
    validate_srrc(rolloff, oversampling, span_taps)?;
    let mid = (span_taps as i64 - 1) / 2;
    let pi = core::f64::consts::PI;
    let mut taps = Vec::with_capacity(span_taps as usize);
    for k in 0..span_taps as i64 {
        let t = (k - mid) as f64 / oversampling as f64;
        let g = if t == 0.0 {
            1.0 - rolloff + 4.0 * rolloff / pi
        } else if math::abs(math::abs(4.0 * rolloff * t) - 1.0) < 1e-9 {
            let arg = pi / (4.0 * rolloff);
            rolloff / core::f64::consts::SQRT_2
                * ((1.0 + 2.0 / pi) * math::sin(arg) + (1.0 - 2.0 / pi) * math::cos(arg))
        } else {
            let four_at = 4.0 * rolloff * t;
            (math::sin(pi * t * (1.0 - rolloff)) + four_at * math::cos(pi * t * (1.0 + rolloff)))
                / (pi * t * (1.0 - four_at * four_at))
        };
        taps.push(g);
    }
    let energy: f64 = taps.iter().map(|g| g * g).sum();
    let norm = 1.0 / math::sqrt(energy);
    for g in &mut taps {
        *g *= norm;
    }
    Ok(taps)
}

/// Full convolution of a complex signal with real taps.
fn convolve(signal: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); signal.len() + taps.len() - 1];
    for (i, s) in signal.iter().enumerate() {
        for (j, &g) in taps.iter().enumerate() {
            out[i + j] += s * g;
        }
    }
    out
}

/// One uniform M-PAM amplitude in [-amplitude, amplitude].
fn pam_level<R: Rng + ?Sized>(rng: &mut R, levels: u32, amplitude: f64) -> f64 {
    let m = levels as i64;
    let l = rng.random_range(0..m);
    (2 * l + 1 - m) as f64 / (m - 1) as f64 * amplitude
}

fn gen_received_with<R: Rng + ?Sized>(
    rng: &mut R,
    tx: &TxSpec,
    ch: &ChannelSpec,
    noise: &McLeishParams,
    hypothesis: Hypothesis,
    n: usize,
) -> Result<Vec<Complex64>> {
    let sampler = CcsSampler::new(noise)?;
    if hypothesis == Hypothesis::H0 {
        return Ok((0..n).map(|_| sampler.sample(rng)).collect());
    }

    let levels = tx.modulation.levels_per_dimension();
    let half_fade = math::sqrt(0.5 * ch.fading_variance);

    match tx.pulse_shaping {
        PulseShaping::Flat => {
            let mut buf = Vec::with_capacity(n);
            for _ in 0..n {
                let s_i = pam_level(rng, levels, tx.amplitude);
                let a: f64 = StandardNormal.sample(rng);
                let s_q = pam_level(rng, levels, tx.amplitude);
                let b: f64 = StandardNormal.sample(rng);
                let w = sampler.sample(rng);
                buf.push(Complex64::new(
                    s_i * a * half_fade + w.re,
                    s_q * b * half_fade + w.im,
                ));
            }
            Ok(buf)
        }
        PulseShaping::Srrc {
            rolloff,
            oversampling,
            span_taps,
        } => {
            let taps = srrc_taps(rolloff, oversampling, span_taps)?;
            let span = taps.len();
            let f = oversampling as usize;
            let n_symbols = (n + 4 * span) / f + 2;

            // complex symbol stream; BPSK rides the real rail only
            let mut symbols = Vec::with_capacity(n_symbols);
            for _ in 0..n_symbols {
                let s_i = pam_level(rng, levels, tx.amplitude);
                let s_q = match tx.modulation {
                    Modulation::Bpsk => 0.0,
                    Modulation::Qam16 => pam_level(rng, levels, tx.amplitude),
                };
                symbols.push(Complex64::new(s_i, s_q));
            }

            // upsample by F and pulse-shape; the sqrt(F) keeps the average
            // per-sample power equal to the symbol power under unit-energy taps
            let mut upsampled = vec![Complex64::new(0.0, 0.0); n_symbols * f];
            let root_f = math::sqrt(f as f64);
            for (k, s) in symbols.iter().enumerate() {
                upsampled[k * f] = s * root_f;
            }
            let shaped = convolve(&upsampled, &taps);

            // per-sample fading and noise
            let mut received = Vec::with_capacity(shaped.len());
            for x in &shaped {
                let g_i: f64 = StandardNormal.sample(rng);
                let g_q: f64 = StandardNormal.sample(rng);
                let h = Complex64::new(g_i * half_fade, g_q * half_fade);
                received.push(h * x + sampler.sample(rng));
            }

            // matched filter at the receiver, then a steady-state crop
            let filtered = convolve(&received, &taps);
            let start = 2 * span;
            debug_assert!(start + n <= filtered.len());
            Ok(filtered[start..start + n].to_vec())
        }
    }
}

/// Generates a received-signal buffer: pure noise under H0, the configured
/// signal chain under H1. Deterministic in `seed`.
pub fn gen_received(
    tx: &TxSpec,
    ch: &ChannelSpec,
    noise: &McLeishParams,
    hypothesis: Hypothesis,
    n: usize,
    seed: u64,
) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::Domain("sample count must be >= 1"));
    }
    tx.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_received_with(&mut rng, tx, ch, noise, hypothesis, n)
}

fn apply_noise_uncertainty_with<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &UncertaintySpec,
    true_power: f64,
) -> f64 {
    if spec.half_range_db == 0.0 {
        return true_power;
    }
    let beta_db = (2.0 * rng.random::<f64>() - 1.0) * spec.half_range_db;
    true_power * math::powf(10.0, beta_db / 10.0)
}

/// Draws the uncertainty-corrupted assumed noise power for one trial:
/// `true_power * 10^(beta_dB/10)` with `beta_dB ~ Uniform(-L, L)`.
pub fn apply_noise_uncertainty(spec: &UncertaintySpec, true_power: f64, trial_seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    apply_noise_uncertainty_with(&mut rng, spec, true_power)
}

/// 95% binomial half-width with a continuity guard at rates 0 and 1.
fn binomial_ci_halfwidth(count: usize, trials: usize) -> f64 {
    let t = trials as f64;
    let guarded = (count as f64).max(0.5).min(t - 0.5);
    let p = guarded / t;
    1.96 * math::sqrt(p * (1.0 - p) / t)
}

/// Runs one trial of a batch and reports whether it decided H1.
///
/// Each trial draws from ChaCha8 stream `trial_index` seeded with the batch
/// master seed, so trials are independent of execution order.
pub fn run_trial(batch: &TrialBatch, scenario: &Scenario, trial_index: u64) -> Result<bool> {
    batch.validate()?;
    scenario.validate()?;
    let v = scenario.noise.non_gaussianity();
    let threshold = match batch.detector {
        DetectorKind::Md => detector::md_threshold(scenario.pf_target, v)?,
        DetectorKind::Ed => detector::ed_threshold(&detector::EdConfig {
            assumed_noise_power: scenario.noise.variance(),
            true_noise: scenario.noise,
            sample_count: batch.samples_per_trial,
            pf_target: scenario.pf_target,
        })?,
    };
    run_trial_at(batch, scenario, trial_index, threshold)
}

fn run_trial_at(
    batch: &TrialBatch,
    scenario: &Scenario,
    trial_index: u64,
    threshold: f64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(batch.master_seed);
    rng.set_stream(trial_index);

    let assumed_power = match batch.detector {
        DetectorKind::Md => scenario.noise.variance(),
        DetectorKind::Ed => {
            apply_noise_uncertainty_with(&mut rng, &scenario.uncertainty, scenario.noise.variance())
        }
    };

    let buffer = gen_received_with(
        &mut rng,
        &scenario.tx,
        &scenario.channel,
        &scenario.noise,
        batch.hypothesis,
        batch.samples_per_trial,
    )?;

    let statistic = match batch.detector {
        DetectorKind::Md => {
            detector::decision_statistic(&buffer, scenario.noise.non_gaussianity())?
        }
        DetectorKind::Ed => detector::ed_statistic(&buffer, assumed_power)?,
    };
    Ok(statistic > threshold)
}

/// Runs all trials of a batch and reports the empirical H1-decision rate.
///
/// The reduction is a plain count of per-trial indicators, so the result does
/// not depend on trial ordering and is a pure function of the configuration
/// and the master seed. The decision threshold is computed once per batch —
/// for the MD from the CFAR target, for the ED from the assumed-power design
/// (where it is power-free); noise uncertainty enters the ED through the
/// per-trial statistic normalization.
pub fn run_batch(batch: &TrialBatch, scenario: &Scenario) -> Result<BatchResult> {
    batch.validate()?;
    scenario.validate()?;
    let v = scenario.noise.non_gaussianity();
    let threshold = match batch.detector {
        DetectorKind::Md => detector::md_threshold(scenario.pf_target, v)?,
        DetectorKind::Ed => detector::ed_threshold(&detector::EdConfig {
            assumed_noise_power: scenario.noise.variance(),
            true_noise: scenario.noise,
            sample_count: batch.samples_per_trial,
            pf_target: scenario.pf_target,
        })?,
    };

    let mut count = 0usize;
    for t in 0..batch.trials {
        if run_trial_at(batch, scenario, t as u64, threshold)? {
            count += 1;
        }
    }
    Ok(BatchResult {
        detection_rate: count as f64 / batch.trials as f64,
        ci_halfwidth: binomial_ci_halfwidth(count, batch.trials),
        trials: batch.trials,
    })
}

/// splitmix64 finalizer for deriving per-point seeds.
fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn curve_point(
    x: f64,
    batch: &TrialBatch,
    scenario: &Scenario,
    point_index: u64,
) -> Result<CurvePoint> {
    let h1 = TrialBatch {
        hypothesis: Hypothesis::H1,
        master_seed: mix_seed(batch.master_seed, 2 * point_index + 1),
        ..*batch
    };
    let h0 = TrialBatch {
        hypothesis: Hypothesis::H0,
        master_seed: mix_seed(batch.master_seed, 2 * point_index + 2),
        ..*batch
    };
    let pd = run_batch(&h1, scenario)?;
    let pf = run_batch(&h0, scenario)?;
    Ok(CurvePoint {
        x,
        pd: pd.detection_rate,
        pf_empirical: pf.detection_rate,
        ci_halfwidth: pd.ci_halfwidth,
    })
}

/// Empirical ROC: one H1 batch and one H0 companion batch per Pf target.
pub fn roc_curve(
    pf_targets: &[f64],
    batch: &TrialBatch,
    scenario: &Scenario,
) -> Result<Vec<CurvePoint>> {
    if pf_targets.is_empty() {
        return Err(Error::Domain("empty pf grid"));
    }
    let mut points = Vec::with_capacity(pf_targets.len());
    for (i, &p) in pf_targets.iter().enumerate() {
        let scen = Scenario {
            pf_target: p,
            ..*scenario
        };
        points.push(curve_point(p, batch, &scen, i as u64)?);
    }
    Ok(points)
}

/// Empirical Pd over an SNR grid at a fixed Pf target. The amplitude is set
/// per point from SNR = s_p^2 / sigma_w^2.
pub fn pd_vs_snr(
    snr_db: &[f64],
    batch: &TrialBatch,
    scenario: &Scenario,
) -> Result<Vec<CurvePoint>> {
    if snr_db.is_empty() {
        return Err(Error::Domain("empty SNR grid"));
    }
    let mut points = Vec::with_capacity(snr_db.len());
    for (i, &snr) in snr_db.iter().enumerate() {
        let amplitude = math::sqrt(math::powf(10.0, snr / 10.0) * scenario.noise.variance());
        let scen = Scenario {
            tx: TxSpec {
                amplitude,
                ..scenario.tx
            },
            ..*scenario
        };
        points.push(curve_point(snr, batch, &scen, i as u64)?);
    }
    Ok(points)
}
