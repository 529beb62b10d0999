//! Exact integration of piecewise polynomials.
//!
//! All integrands in this crate are products of at most two piecewise-linear
//! CDF/survival functions, i.e. polynomials of degree <= 2 between knots. Two-point
//! Gauss-Legendre is exact up to degree 3 and never evaluates at a knot, so
//! jumps at atoms are harmless.

const GL_OFFSET: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

/// Integrates `phi` over `[a, b]`, splitting at every knot inside the interval.
pub(crate) fn integrate<F>(knots: &[f64], a: f64, b: f64, phi: F) -> f64
where
    F: Fn(f64) -> f64,
{
    if !(b > a) {
        return 0.0;
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(knots.len() + 2);
    cuts.push(a);
    cuts.extend(knots.iter().copied().filter(|&k| k > a && k < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            half * (phi(mid - half * GL_OFFSET) + phi(mid + half * GL_OFFSET))
        })
        .sum()
}

/// Sorted, deduplicated union of knot sets.
pub(crate) fn merge_knots(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_piecewise_quadratics() {
        // x^2 on [0,1] then constant 3 on (1,2]
        let phi = |x: f64| if x < 1.0 { x * x } else { 3.0 };
        let got = integrate(&[1.0], 0.0, 2.0, phi);
        assert!((got - (1.0 / 3.0 + 3.0)).abs() < 1e-15);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate(&[], 1.0, 1.0, |_| 1.0), 0.0);
        assert_eq!(integrate(&[], 2.0, 1.0, |_| 1.0), 0.0);
    }
}
