//! Independent numerical oracles shared by the integration tests: adaptive
//! quadrature, bisection, closed-form references and sample statistics.
//! Nothing here calls into the implementation paths under test.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson refinement.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn estimate(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = estimate(fa, flm, fm, m - a);
        let right = estimate(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = estimate(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Integral over [a0, +inf) by doubling panels until two consecutive panels
/// contribute less than the tolerance.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: &F, a0: f64, eps: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a0;
    let mut hi = if a0 < 1.0 { 1.0 } else { 2.0 * a0 };
    let mut small_panels = 0;
    for _ in 0..64 {
        let panel = adaptive_simpson(f, lo, hi, eps / 16.0);
        total += panel;
        if panel.abs() < eps / 8.0 {
            small_panels += 1;
            if small_panels >= 2 {
                break;
            }
        } else {
            small_panels = 0;
        }
        lo = hi;
        hi *= 2.0;
    }
    total
}

/// Bisection root finding for a function with a sign change on [lo, hi].
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    assert!(
        (flo <= 0.0) != (f(hi) <= 0.0),
        "bisect needs a bracketing interval"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return mid;
        }
        if (f(mid) <= 0.0) == (flo <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form half-integer-order modified Bessel function
/// K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_k (n+k)! / (k! (n-k)! (2x)^k),
/// with the coefficient built by the ratio recurrence
/// c_k = c_{k-1} (n+k)(n-k+1)/k.
pub fn half_order_bessel_k(n: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut c = 1.0;
    for k in 0..=n {
        if k > 0 {
            c *= (n + k) as f64 * (n - k + 1) as f64 / k as f64;
        }
        sum += c / (2.0 * x).powi(k as i32);
    }
    (core::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

/// (E|w|^2, E|w|^4/(E|w|^2)^2, kurtosis of the real part) of a buffer.
pub fn ccs_stats(buf: &[mdsense::Complex64]) -> (f64, f64, f64) {
    let n = buf.len() as f64;
    let (mut s2, mut s4, mut r2, mut r4) = (0.0, 0.0, 0.0, 0.0);
    for w in buf {
        let m = w.norm_sqr();
        s2 += m;
        s4 += m * m;
        let re2 = w.re * w.re;
        r2 += re2;
        r4 += re2 * re2;
    }
    let power = s2 / n;
    let ratio = (s4 / n) / (power * power);
    let kurt = (r4 / n) / ((r2 / n) * (r2 / n));
    (power, ratio, kurt)
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Biased (population) sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}
