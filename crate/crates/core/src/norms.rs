//! Sobolev, Lebesgue, directional and Gevrey-weighted norms.
//!
//! Everything except the Lᵖ family is an exact coefficient sum in the
//! normalized measure `dx/4π²`. Lᵖ norms use grid quadrature, which is
//! exact up to rounding for `p = 2` and spectrally accurate otherwise.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::math::{abs_pow, exp, powf, sqrt};
use crate::params::DissipParams;
use crate::spectral::{gevrey_symbol, SpectralContext};

/// Largest weight exponent evaluated before a Gevrey norm is flagged as
/// saturated.
pub const WEIGHT_EXPONENT_CAP: f64 = 700.0;

/// Coordinate direction for directional seminorms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

#[inline]
fn k_squared(k: (i64, i64)) -> f64 {
    (k.0 * k.0 + k.1 * k.1) as f64
}

/// `(1 + |k|²)^s`.
#[inline]
pub fn bessel_weight(k: (i64, i64), s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        powf(1.0 + k_squared(k), s)
    }
}

/// `|k|^{2s}`, zero at `k = 0`.
#[inline]
pub fn riesz_weight(k: (i64, i64), s: f64) -> f64 {
    if k == (0, 0) {
        0.0
    } else if s == 0.0 {
        1.0
    } else {
        powf(k_squared(k), s)
    }
}

fn weighted_sum<W: Fn((i64, i64)) -> f64>(f: &SpectralField, weight: W) -> f64 {
    let grid = f.grid();
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let n = c.norm_sqr();
            if n == 0.0 {
                0.0
            } else {
                weight(grid.wavenumber(idx)) * n
            }
        })
        .sum()
}

/// `H^s` norm with weight `(1+|k|²)^s`, or the `Ḣ^s` norm with weight
/// `|k|^{2s}` (the `k = 0` term dropped) when `homogeneous` is set.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> f64 {
    if homogeneous {
        sqrt(weighted_sum(f, |k| riesz_weight(k, s)))
    } else {
        sqrt(weighted_sum(f, |k| bessel_weight(k, s)))
    }
}

/// Result of a Gevrey-weighted norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    /// The norm, or `+∞` when saturated.
    pub value: f64,
    /// First wavenumber (in storage order) whose weight exponent exceeded
    /// [`WEIGHT_EXPONENT_CAP`] on a nonzero coefficient.
    pub saturated: Option<(i64, i64)>,
}

impl WeightedNorm {
    pub fn is_saturated(&self) -> bool {
        self.saturated.is_some()
    }
}

/// `H^s` norm of the field with coefficients `e^{(t/2)B(k)} f̂_k`.
pub fn gevrey_weighted_norm(
    f: &SpectralField,
    t: f64,
    s: f64,
    p: &DissipParams,
) -> Result<WeightedNorm> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let grid = f.grid();
    let mut sum = 0.0;
    for (idx, c) in f.coeffs().iter().enumerate() {
        let n = c.norm_sqr();
        if n == 0.0 {
            continue;
        }
        let k = grid.wavenumber(idx);
        let e = 0.5 * t * gevrey_symbol(k, p);
        if e > WEIGHT_EXPONENT_CAP {
            return Ok(WeightedNorm {
                value: f64::INFINITY,
                saturated: Some(k),
            });
        }
        sum += exp(2.0 * e) * bessel_weight(k, s) * n;
    }
    Ok(WeightedNorm {
        value: sqrt(sum),
        saturated: None,
    })
}

/// Gevrey–Sobolev norm `‖e^{a|k|^{1/σ}}(1+|k|²)^{s/2} f̂‖_{ℓ²}`.
///
/// Returns `+∞` if any weight exponent on a nonzero coefficient exceeds
/// [`WEIGHT_EXPONENT_CAP`].
pub fn gevrey_sobolev_norm(f: &SpectralField, a: f64, sigma: f64, s: f64) -> f64 {
    let grid = f.grid();
    let mut sum = 0.0;
    for (idx, c) in f.coeffs().iter().enumerate() {
        let n = c.norm_sqr();
        if n == 0.0 {
            continue;
        }
        let k = grid.wavenumber(idx);
        let e = a * powf(k_squared(k), 0.5 / sigma);
        if e > WEIGHT_EXPONENT_CAP {
            return f64::INFINITY;
        }
        sum += exp(2.0 * e) * bessel_weight(k, s) * n;
    }
    sqrt(sum)
}

/// `Ḣ^s` norm of `|∂_axis|^exponent f`.
pub fn directional_seminorm(f: &SpectralField, axis: Axis, exponent: f64, s: f64) -> f64 {
    sqrt(weighted_sum(f, |k| {
        let ka = match axis {
            Axis::X1 => k.0,
            Axis::X2 => k.1,
        } as f64;
        let m = abs_pow(ka, exponent);
        m * m * riesz_weight(k, s)
    }))
}

/// `(mean |v|ᵖ)^{1/p}` over grid samples.
pub(crate) fn lp_of_samples<I: Iterator<Item = f64> + Clone>(values: I, p: f64) -> f64 {
    let (mut max, mut count) = (0.0f64, 0usize);
    for v in values.clone() {
        max = max.max(v.abs());
        count += 1;
    }
    if max == 0.0 {
        return 0.0;
    }
    // scale by the maximum so large p cannot overflow
    let mean = values.map(|v| powf(v.abs() / max, p)).sum::<f64>() / count as f64;
    max * powf(mean, 1.0 / p)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "Lebesgue exponent must lie in [1, ∞)",
        })
    }
}

/// `(⨍|f|ᵖ)^{1/p}` by quadrature on the transform grid.
pub fn lp_norm(ctx: &SpectralContext, f: &SpectralField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let values = ctx.to_physical(f)?;
    Ok(lp_of_samples(values.iter().copied(), p))
}

/// `(⨍(f² + g²)^{p/2})^{1/p}`, the Lᵖ norm of the vector field `(f, g)`.
pub fn vector_lp_norm(
    ctx: &SpectralContext,
    f: &SpectralField,
    g: &SpectralField,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    let (a, b) = ctx.to_physical_pair(f, g)?;
    Ok(lp_of_samples(
        a.iter().zip(&b).map(|(x, y)| crate::math::hypot(*x, *y)),
        p,
    ))
}

/// A norm selection that can be evaluated on any field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormRequest {
    Hs {
        s: f64,
    },
    HsDot {
        s: f64,
    },
    Lp {
        p: f64,
    },
    Directional {
        axis: Axis,
        exponent: f64,
        s: f64,
    },
    GevreyWeighted {
        t: f64,
        s: f64,
        params: DissipParams,
    },
    GevreySobolev {
        a: f64,
        sigma: f64,
        s: f64,
    },
}

impl NormRequest {
    /// Evaluates the requested norm. Saturated Gevrey weights yield `+∞`.
    pub fn evaluate(&self, ctx: &SpectralContext, f: &SpectralField) -> Result<f64> {
        match *self {
            NormRequest::Hs { s } => Ok(sobolev_norm(f, s, false)),
            NormRequest::HsDot { s } => Ok(sobolev_norm(f, s, true)),
            NormRequest::Lp { p } => lp_norm(ctx, f, p),
            NormRequest::Directional { axis, exponent, s } => {
                Ok(directional_seminorm(f, axis, exponent, s))
            }
            NormRequest::GevreyWeighted { t, s, params } => {
                Ok(gevrey_weighted_norm(f, t, s, &params)?.value)
            }
            NormRequest::GevreySobolev { a, sigma, s } => {
                if sigma <= 1.0 {
                    return Err(Error::InvalidParameter {
                        name: "sigma",
                        value: sigma,
                        reason: "must exceed 1",
                    });
                }
                Ok(gevrey_sobolev_norm(f, a, sigma, s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use num_complex::Complex64;

    fn grid() -> GridSpec {
        GridSpec::square(16).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sobolev_examples() {
        let g = grid();
        assert_eq!(sobolev_norm(&SpectralField::zeros(g), 1.3, false), 0.0);
        let f = SpectralField::sine(g, 1, 0, 1.0);
        assert!(close(sobolev_norm(&f, 0.0, false), 0.5f64.sqrt(), 1e-15));
        assert!(close(sobolev_norm(&f, 1.0, false), 1.0, 1e-15));
        assert!(close(sobolev_norm(&f, 1.0, true), 0.5f64.sqrt(), 1e-15));
    }

    #[test]
    fn homogeneous_norm_drops_mean() {
        let g = grid();
        let f = SpectralField::from_modes(g, &[((0, 0), Complex64::new(3.0, 0.0))]);
        assert_eq!(sobolev_norm(&f, 0.5, true), 0.0);
        assert_eq!(sobolev_norm(&f, 0.5, false), 3.0);
    }

    #[test]
    fn gevrey_weighted_examples() {
        let g = grid();
        let p = DissipParams::unit(0.75, 0.75, 0.0).unwrap();
        let f = &SpectralField::sine(g, 1, 0, 1.0) + &SpectralField::cosine(g, 2, 3, 0.4);
        let w0 = gevrey_weighted_norm(&f, 0.0, 0.7, &p).unwrap();
        assert_eq!(w0.value, sobolev_norm(&f, 0.7, false));
        let single = SpectralField::sine(g, 1, 0, 1.0);
        let w = gevrey_weighted_norm(&single, 1.0, 0.0, &p).unwrap();
        assert!(close(w.value, 1f64.exp() / 2f64.sqrt(), 1e-14));
        assert!((w.value - 1.92211).abs() < 1e-5);
        let half = gevrey_weighted_norm(&f, 0.5, 1.0, &p).unwrap().value;
        let one = gevrey_weighted_norm(&f, 1.0, 1.0, &p).unwrap().value;
        assert!(half <= one);
    }

    #[test]
    fn gevrey_weighted_flags_saturation() {
        let g = GridSpec::square(64).unwrap();
        let p = DissipParams::unit(0.75, 0.75, 0.0).unwrap();
        let f = SpectralField::cosine(g, 30, 0, 1.0);
        let w = gevrey_weighted_norm(&f, 100.0, 0.0, &p).unwrap();
        assert!(w.is_saturated());
        assert_eq!(w.value, f64::INFINITY);
        let k = w.saturated.unwrap();
        assert_eq!(k.0.abs(), 30);
        assert!(gevrey_weighted_norm(&f, -1.0, 0.0, &p).is_err());
    }

    #[test]
    fn gevrey_sobolev_matches_weighted_norm_on_axis_modes() {
        // With α = β the weight e^{(t/2)B} on a single-axis mode is
        // e^{t|k|^α}, i.e. the Gevrey–Sobolev weight with a = t, σ = 1/α.
        let g = grid();
        let alpha = 0.6;
        let p = DissipParams::unit(alpha, alpha, 0.0).unwrap();
        for (k1, k2) in [(3, 0), (0, -4), (5, 0)] {
            let f = SpectralField::cosine(g, k1, k2, 1.0);
            for t in [0.1, 0.4, 1.3] {
                let lhs = gevrey_weighted_norm(&f, t, 0.8, &p).unwrap().value;
                let rhs = gevrey_sobolev_norm(&f, t, 1.0 / alpha, 0.8);
                assert!(close(lhs, rhs, 1e-13), "{k1},{k2},{t}");
            }
        }
    }

    #[test]
    fn lp_examples() {
        let g = grid();
        let ctx = SpectralContext::new(g);
        let one = SpectralField::from_modes(g, &[((0, 0), Complex64::new(1.0, 0.0))]);
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            assert!(close(lp_norm(&ctx, &one, p).unwrap(), 1.0, 1e-15));
        }
        let f = SpectralField::sine(g, 1, 0, 1.0);
        assert!(close(lp_norm(&ctx, &f, 2.0).unwrap(), 0.5f64.sqrt(), 1e-14));
        let p4 = lp_norm(&ctx, &f, 4.0).unwrap();
        assert!(close(p4, 0.375f64.powf(0.25), 1e-14));
        assert!((p4 - 0.78254).abs() < 1e-5);
        assert!(lp_norm(&ctx, &f, 0.5).is_err());
    }

    #[test]
    fn directional_examples() {
        let g = grid();
        assert_eq!(
            directional_seminorm(&SpectralField::sine(g, 0, 1, 1.0), Axis::X1, 0.75, 0.0),
            0.0
        );
        let f = SpectralField::sine(g, 1, 0, 1.0);
        assert!(close(
            directional_seminorm(&f, Axis::X1, 0.75, 0.0),
            0.5f64.sqrt(),
            1e-15
        ));
        let f2 = SpectralField::sine(g, 2, 0, 1.0);
        assert!(close(
            directional_seminorm(&f2, Axis::X1, 0.5, 0.0),
            1.0,
            1e-15
        ));
    }

    #[test]
    fn norm_request_dispatch() {
        let g = grid();
        let ctx = SpectralContext::new(g);
        let f = SpectralField::sine(g, 2, 1, 1.0);
        let p = DissipParams::unit(0.7, 0.8, 1.0).unwrap();
        let req = [
            (NormRequest::Hs { s: 1.0 }, sobolev_norm(&f, 1.0, false)),
            (NormRequest::HsDot { s: 0.5 }, sobolev_norm(&f, 0.5, true)),
            (NormRequest::Lp { p: 2.0 }, sobolev_norm(&f, 0.0, false)),
            (
                NormRequest::Directional {
                    axis: Axis::X2,
                    exponent: 0.8,
                    s: 0.0,
                },
                directional_seminorm(&f, Axis::X2, 0.8, 0.0),
            ),
            (
                NormRequest::GevreyWeighted {
                    t: 0.2,
                    s: 1.0,
                    params: p,
                },
                gevrey_weighted_norm(&f, 0.2, 1.0, &p).unwrap().value,
            ),
            (
                NormRequest::GevreySobolev {
                    a: 0.1,
                    sigma: 1.5,
                    s: 0.0,
                },
                gevrey_sobolev_norm(&f, 0.1, 1.5, 0.0),
            ),
        ];
        for (r, expected) in req {
            assert!(
                close(r.evaluate(&ctx, &f).unwrap(), expected, 1e-13),
                "{r:?}"
            );
        }
        assert!(NormRequest::GevreySobolev {
            a: 0.1,
            sigma: 1.0,
            s: 0.0
        }
        .evaluate(&ctx, &f)
        .is_err());
    }
}
