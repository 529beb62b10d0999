//! Crossing point of a weighted buyer survival curve and seller CDF.
//!
//! `h(p) = buyer_weight * Pr[v >= p] - seller_weight * Pr[w <= p]` is
//! nonincreasing. The returned price is `c = inf { p : h(p) <= 0 }`, which
//! maximises `min(buyer_weight * F̄(p), seller_weight * G(p))`: to the left of
//! `c` the seller side binds and only shrinks, to the right the buyer side
//! binds and only shrinks.

use crate::dist::{Distribution, Money};
use crate::quad;

/// Absolute price tolerance of the bisection.
pub const PRICE_TOLERANCE: f64 = 1e-10;

pub(crate) fn crossing(
    buyer: &Distribution,
    seller: &Distribution,
    buyer_weight: f64,
    seller_weight: f64,
) -> Money {
    let h = |p: f64| buyer_weight * buyer.survival(p) - seller_weight * seller.cdf(p);
    // right limit h(t+) and left limit h(t-)
    let h_right = |p: f64| buyer_weight * buyer.survival_strict(p) - seller_weight * seller.cdf(p);
    let h_left = |p: f64| buyer_weight * buyer.survival(p) - seller_weight * seller.cdf_strict(p);

    let knots = quad::merge_knots(buyer.knots(), seller.knots());
    if h(knots[0]) <= 0.0 {
        return knots[0];
    }
    for seg in knots.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if h_right(a) <= 0.0 {
            return a;
        }
        if h_left(b) < 0.0 {
            return bisect(&h, a, b);
        }
        if h(b) <= 0.0 {
            return b;
        }
    }
    *knots.last().expect("distributions have knots")
}

/// Smallest `p` in `(a, b)` with `h(p) <= 0`, given `h > 0` near `a` and `h < 0` near `b`.
fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= PRICE_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
