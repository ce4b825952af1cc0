//! Ensemble validation of the CLT asymptotics and statistic invariances.

mod common;

use common::{mean, variance};
use mdsense::detector::{decision_statistic, sigma2_h0, sigma2_h1, test_statistic};
use mdsense::moments::{abs_moments, real_moments};
use mdsense::simulator::{gen_received, ChannelSpec, Modulation, PulseShaping, TxSpec};
use mdsense::{Complex64, Hypothesis, McLeishParams, SignalModel};
use proptest::prelude::*;

/// Second-order delta-method bias of the normalized statistic:
/// sqrt(N) E[T_hat - T] ~ b / sqrt(N) with
/// b = -3 mu4 (mu4 - mu2^2)/mu2^4 + 2 (mu6 - mu2 mu4)/mu2^3.
fn z_mean_bias(mu2: f64, mu4: f64, mu6: f64) -> f64 {
    -3.0 * mu4 * (mu4 - mu2 * mu2) / mu2.powi(4) + 2.0 * (mu6 - mu2 * mu4) / mu2.powi(3)
}

#[test]
fn h0_ensembles_follow_the_clt_law() {
    // 1e4 independent noise buffers of N = 2000 samples: the empirical mean
    // of Z sits at the O(1/sqrt(N)) ratio-estimator bias and the empirical
    // variance within 10% of the closed form.
    let trials = 10_000;
    let n = 2000usize;
    let tx = TxSpec {
        modulation: Modulation::Bpsk,
        amplitude: 1.0,
        pulse_shaping: PulseShaping::Flat,
    };
    for &v in &[1.0, 5.0] {
        let noise = McLeishParams::new(1.0, v).unwrap();
        let mu = abs_moments(None, &noise, Hypothesis::H0).unwrap();
        let predicted_bias = z_mean_bias(mu.mu2, mu.mu4, mu.mu6) / (n as f64).sqrt();
        let sigma2 = sigma2_h0(v).unwrap();

        let zs: Vec<f64> = (0..trials)
            .map(|t| {
                let buf = gen_received(
                    &tx,
                    &ChannelSpec::default(),
                    &noise,
                    Hypothesis::H0,
                    n,
                    800_000 + t,
                )
                .unwrap();
                decision_statistic(&buf, v).unwrap()
            })
            .collect();

        let m = mean(&zs);
        let tol = 4.0 * (sigma2 / trials as f64).sqrt();
        assert!(
            (m - predicted_bias).abs() <= tol,
            "v={v}: mean {m:.4} vs bias {predicted_bias:.4} (tol {tol:.4})"
        );
        let var = variance(&zs);
        assert!(
            (var / sigma2 - 1.0).abs() <= 0.10,
            "v={v}: var {var:.2} vs sigma2 {sigma2:.2}"
        );
    }
}

#[test]
fn h1_ensemble_mean_matches_the_shift() {
    // flat BPSK, v = 1, SNR 0 dB: E[Z] ~ sqrt(N) * 1.125 plus the
    // second-order bias, within Monte-Carlo resolution
    let trials = 2000;
    let n = 2000usize;
    let noise = McLeishParams::new(1.0, 1.0).unwrap();
    let model = SignalModel::new(2, 1.0, 1.0).unwrap();
    let tx = TxSpec {
        modulation: Modulation::Bpsk,
        amplitude: 1.0,
        pulse_shaping: PulseShaping::Flat,
    };

    let mu = abs_moments(Some(&model), &noise, Hypothesis::H1).unwrap();
    let shift = (n as f64).sqrt() * 1.125;
    let bias = z_mean_bias(mu.mu2, mu.mu4, mu.mu6) / (n as f64).sqrt();
    let m_set = real_moments(Some(&model), &noise, Hypothesis::H1).unwrap();
    let sigma1 = sigma2_h1(&m_set).unwrap().sqrt();

    let zs: Vec<f64> = (0..trials)
        .map(|t| {
            let buf = gen_received(
                &tx,
                &ChannelSpec::default(),
                &noise,
                Hypothesis::H1,
                n,
                31_000 + t,
            )
            .unwrap();
            decision_statistic(&buf, 1.0).unwrap()
        })
        .collect();

    let m = mean(&zs);
    let tol = 4.0 * sigma1 / (trials as f64).sqrt();
    assert!(
        (m - (shift + bias)).abs() <= tol,
        "mean {m:.3} vs shift {shift:.3} + bias {bias:.3} (tol {tol:.3})"
    );
}

#[test]
fn pure_noise_statistic_converges_to_closed_form() {
    // 1e6 noise samples: T_hat near -(2 + 3/(2v))
    let tx = TxSpec {
        modulation: Modulation::Bpsk,
        amplitude: 1.0,
        pulse_shaping: PulseShaping::Flat,
    };
    for (v, want, tol) in [(1.0, -3.5, 0.05), (1e9, -2.0, 0.01)] {
        let noise = McLeishParams::new(1.0, v).unwrap();
        let buf = gen_received(
            &tx,
            &ChannelSpec::default(),
            &noise,
            Hypothesis::H0,
            1_000_000,
            606,
        )
        .unwrap();
        let t = test_statistic(&buf).unwrap();
        assert!((t - want).abs() < tol, "v={v}: t={t}");
    }
}

#[test]
fn energy_statistic_is_one_for_matched_noise_power() {
    let noise = McLeishParams::new(2.5, 1.0).unwrap();
    let buf = mdsense::mcleish::sample_ccs(&noise, 1_000_000, 11).unwrap();
    let t = mdsense::detector::ed_statistic(&buf, 2.5).unwrap();
    assert!((t - 1.0).abs() < 0.01, "t={t}");
}

proptest! {
    #[test]
    fn statistic_agrees_with_sample_moment_route(seed in 0u64..1_000) {
        // the fused accumulation inside test_statistic and the generic
        // sample_abs_moment path must stay consistent
        let noise = McLeishParams::new(1.3, 0.7).unwrap();
        let buf = mdsense::mcleish::sample_ccs(&noise, 257, seed).unwrap();
        let t = test_statistic(&buf).unwrap();
        let mu2 = mdsense::detector::sample_abs_moment(&buf, 2).unwrap();
        let mu4 = mdsense::detector::sample_abs_moment(&buf, 4).unwrap();
        let route = -mu4 / (mu2 * mu2);
        prop_assert!(((t - route) / route).abs() < 1e-12, "t={} route={}", t, route);
    }

    #[test]
    fn statistic_is_invariant_under_positive_scaling(
        seed in 0u64..1_000,
        scale in 0.01f64..100.0,
    ) {
        let noise = McLeishParams::new(1.0, 1.0).unwrap();
        let buf = mdsense::mcleish::sample_ccs(&noise, 256, seed).unwrap();
        let scaled: Vec<Complex64> = buf.iter().map(|w| w * scale).collect();
        let a = test_statistic(&buf).unwrap();
        let b = test_statistic(&scaled).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-12, "a={} b={}", a, b);
    }
}
