use crate::math::{exp, powf};
use crate::params::{DissipParams, Regime};

use super::ConstantsTable;

/// `ln(3/2)`; weighted horizons stay strictly below it.
pub const STRICT_WEIGHTED_CAP: f64 = 0.405_465_108_108_164_4;

/// Relative bracket width at which bisection stops.
const BISECTION_RTOL: f64 = 1e-12;

const STEP1_FOUR_TERM: usize = 4;

/// Outcome of an existence-time computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceTime {
    /// Largest admissible horizon; `+∞` for the zero field, `0` when some
    /// condition cannot be met.
    pub time: f64,
    pub regime: Regime,
    /// True when a short-time factor has a nonpositive exponent, so no
    /// positive horizon satisfies it.
    pub unsatisfiable: bool,
}

/// Exponents of `T^{(s−2+2α)/2α} + T^{(s−2+2β)/2β}`.
pub(crate) fn two_term_exponents(p: &DissipParams) -> [f64; 2] {
    [
        (p.s - 2.0 + 2.0 * p.alpha) / (2.0 * p.alpha),
        (p.s - 2.0 + 2.0 * p.beta) / (2.0 * p.beta),
    ]
}

/// Exponents of the `s ∈ [1, 2)` factor, with the interior margin
/// `ε = (2α−1)/2` already substituted.
pub(crate) fn four_term_exponents(p: &DissipParams) -> [f64; STEP1_FOUR_TERM] {
    let (a, b) = (p.alpha, p.beta);
    [
        (2.0 * a - 1.0) / (2.0 * a),
        (2.0 * b - 1.0) / (2.0 * b),
        (2.0 * a - 1.0) / (4.0 * a),
        (4.0 * b - 2.0 * a - 1.0) / (4.0 * b),
    ]
}

pub(crate) fn power_sum(exponents: &[f64], t: f64) -> f64 {
    exponents.iter().map(|&a| powf(t, a)).sum()
}

fn bisect<F: Fn(f64) -> f64>(lhs: F, rhs: f64) -> f64 {
    if rhs.is_infinite() {
        return f64::INFINITY;
    }
    // geometric bracketing, then bisection
    let mut lo;
    let mut hi = 1.0;
    if lhs(hi) <= rhs {
        lo = hi;
        hi *= 2.0;
        while lhs(hi) <= rhs {
            lo = hi;
            hi *= 2.0;
            if hi.is_infinite() {
                return f64::INFINITY;
            }
        }
    } else {
        while lhs(hi * 0.5) > rhs {
            hi *= 0.5;
            if hi < f64::MIN_POSITIVE {
                return 0.0;
            }
        }
        lo = hi * 0.5;
    }
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) <= rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest `T` with `Σ T^{aᵢ} ≤ rhs`, to relative precision 1e-12.
///
/// Returns `None` if an exponent is nonpositive (the sum does not vanish as
/// `T → 0`) or `rhs` is not positive.
pub fn largest_time_under(exponents: &[f64], rhs: f64) -> Option<f64> {
    if exponents.iter().any(|&a| !(a > 0.0)) || !(rhs > 0.0) {
        return None;
    }
    Some(bisect(|t| power_sum(exponents, t), rhs))
}

fn largest_weighted_time_under(exponents: &[f64], rhs: f64) -> Option<f64> {
    if exponents.iter().any(|&a| !(a > 0.0)) || !(rhs > 0.0) {
        return None;
    }
    Some(bisect(|t| power_sum(exponents, t) * exp(t), rhs))
}

/// Largest horizon on which the smallness conditions hold for an initial
/// datum of `H^s` norm `theta0_norm`.
///
/// Plain mode intersects the two-term condition with constant `C1` and,
/// when `s ≥ 1`, the four-term condition with `C2`, each with right-hand
/// side `1/(8C‖θ⁰‖)`. Weighted mode further intersects the same shapes
/// multiplied by `e^T` (constants `C3`, `C4`) and enforces `T < ln(3/2)`.
pub fn existence_time(
    theta0_norm: f64,
    p: &DissipParams,
    c: &ConstantsTable,
    weighted: bool,
) -> ExistenceTime {
    let regime = p.regime();
    let cap = |t: f64| {
        if weighted && t >= STRICT_WEIGHTED_CAP {
            STRICT_WEIGHTED_CAP * (1.0 - 1e-12)
        } else {
            t
        }
    };
    if theta0_norm <= 0.0 {
        return ExistenceTime {
            time: cap(f64::INFINITY),
            regime,
            unsatisfiable: false,
        };
    }
    let four_term = p.s >= 1.0;
    let rhs = |constant: f64| 1.0 / (8.0 * constant * theta0_norm);

    let mut conditions = alloc::vec![largest_time_under(&two_term_exponents(p), rhs(c.c1))];
    if four_term {
        conditions.push(largest_time_under(&four_term_exponents(p), rhs(c.c2)));
    }
    if weighted {
        conditions.push(largest_weighted_time_under(
            &two_term_exponents(p),
            rhs(c.c3),
        ));
        if four_term {
            conditions.push(largest_weighted_time_under(
                &four_term_exponents(p),
                rhs(c.c4),
            ));
        }
    }
    if conditions.iter().any(Option::is_none) {
        return ExistenceTime {
            time: 0.0,
            regime,
            unsatisfiable: true,
        };
    }
    let t = conditions
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    ExistenceTime {
        time: cap(t),
        regime,
        unsatisfiable: false,
    }
}
