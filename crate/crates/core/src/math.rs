//! Float math routed through `libm` so the crate works without `std` and
//! produces bit-identical results on every build.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Exact binary exponentiation for small integer powers.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut n = n;
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub(crate) fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[inline]
pub(crate) fn tgamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// log |Gamma(x)|; callers only use it for x > 0 where Gamma is positive.
#[inline]
pub(crate) fn lgamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}
