// Thin wrappers so the rest of the crate reads like ordinary float code.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
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
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `|x|^e` with the convention `0^e = 0` for `e > 0` and `0^0 = 1`.
#[inline]
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    let a = x.abs();
    if e == 0.0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else if e == 1.0 {
        a
    } else {
        powf(a, e)
    }
}
