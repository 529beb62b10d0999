//! Instance generators: seeded random corpora and the geometric lower-bound family.

use rand::Rng;
use serde::Serialize;

use crate::bilateral::BilateralInstance;
use crate::dist::{Distribution, Money, Probability};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Largest support size of the lower-bound family; `10^-N` terms beyond this lose
/// too much precision against the leading masses.
pub const MAX_LOWER_BOUND_N: usize = 15;
/// Smallest admissible offset `ε` of the buyer atoms.
pub const MIN_LOWER_BOUND_EPSILON: f64 = 5.0 / 36.0;

/// Number of points on the value grid `{0, 0.1, ..., 10}` used by discrete instances.
pub const DISCRETE_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundSpec {
    pub n: usize,
    pub epsilon: f64,
}

impl LowerBoundSpec {
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if n == 0 || n > MAX_LOWER_BOUND_N {
            return Err(Error::domain(format!(
                "N must lie in 1..={MAX_LOWER_BOUND_N} (N capped at {MAX_LOWER_BOUND_N}), got {n}"
            )));
        }
        if !(MIN_LOWER_BOUND_EPSILON..1.0).contains(&epsilon) {
            return Err(Error::domain(format!(
                "epsilon must lie in [5/36, 1), got {epsilon}"
            )));
        }
        Ok(LowerBoundSpec { n, epsilon })
    }

    /// Normaliser `α = Σ_{x=0}^{N-1} 10^-x`.
    pub fn alpha(&self) -> f64 {
        self.terms().iter().sum()
    }

    // 10^0, 10^-1, ..., 10^-(N-1)
    fn terms(&self) -> Vec<f64> {
        (0..self.n).map(|x| 10f64.powi(-(x as i32))).collect()
    }
}

/// Seller atoms at `1..=N` with mass `10^(w-N)/α`; buyer atoms at `k+ε` with mass
/// `10^-(k-1)/α`. Each atom outweighs everything further from the bulk.
pub fn lower_bound_instance(spec: &LowerBoundSpec) -> Result<BilateralInstance> {
    let spec = LowerBoundSpec::new(spec.n, spec.epsilon)?;
    let terms = spec.terms();
    let alpha = spec.alpha();
    let n = spec.n;
    let seller: Vec<(Money, Probability)> =
        (1..=n).map(|w| (w as f64, terms[n - w] / alpha)).collect();
    let buyer: Vec<(Money, Probability)> = (1..=n)
        .map(|k| (k as f64 + spec.epsilon, terms[k - 1] / alpha))
        .collect();
    Ok(BilateralInstance::new(
        Distribution::discrete(&buyer)?,
        Distribution::discrete(&seller)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub spec: LowerBoundSpec,
    pub r: Probability,
    pub opt: Money,
    pub best_price: Money,
    pub best_gft: Money,
    /// `OPT / GFT(best price)`.
    pub ratio: f64,
    pub quarter_n: f64,
    /// `10^(-N+ε)`.
    pub r_floor: f64,
    pub ratio_holds: bool,
    pub r_floor_holds: bool,
    /// `(p, GFT(p))` over every support point of either side.
    pub table: Vec<(Money, Money)>,
}

pub fn lower_bound_report(spec: &LowerBoundSpec) -> Result<LowerBoundReport> {
    let inst = lower_bound_instance(spec)?;
    let opt = inst.opt_gft();
    let (best_price, best_gft) = inst.best_fixed_price();
    let ratio = opt / best_gft;
    let r = inst.trade_probability();
    let quarter_n = spec.n as f64 / 4.0;
    let r_floor = 10f64.powf(-(spec.n as f64) + spec.epsilon);

    let mut prices: Vec<Money> = inst
        .buyer()
        .knots()
        .iter()
        .chain(inst.seller().knots())
        .copied()
        .collect();
    prices.sort_by(f64::total_cmp);
    prices.dedup();
    let table = prices.into_iter().map(|p| (p, inst.gft_at(p))).collect();

    Ok(LowerBoundReport {
        spec: *spec,
        r,
        opt,
        best_price,
        best_gft,
        ratio,
        quarter_n,
        r_floor,
        ratio_holds: ratio >= quarter_n,
        r_floor_holds: r >= r_floor,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Atoms on the grid `{0, 0.1, ..., 10}`.
    Discrete,
    /// Piecewise-uniform densities on random increasing breakpoints.
    Piecewise,
    /// Discrete buyer against piecewise-uniform seller.
    Mixed,
}

/// Seeded random instance with `size` atoms or cells per side.
///
/// Masses are normalised exponential draws (flat Dirichlet). Discrete supports are
/// `size` distinct grid points, so `size` may not exceed [`DISCRETE_GRID_POINTS`].
pub fn random_instance(kind: InstanceKind, size: usize, seed: u64) -> Result<BilateralInstance> {
    if size == 0 {
        return Err(Error::domain("instance size must be >= 1"));
    }
    if kind != InstanceKind::Piecewise && size > DISCRETE_GRID_POINTS {
        return Err(Error::domain(format!(
            "discrete size must be <= {DISCRETE_GRID_POINTS}, got {size}"
        )));
    }
    let mut rng = RngStream::new(seed);
    let (buyer, seller) = match kind {
        InstanceKind::Discrete => (
            random_discrete(&mut rng, size)?,
            random_discrete(&mut rng, size)?,
        ),
        InstanceKind::Piecewise => (
            random_piecewise(&mut rng, size)?,
            random_piecewise(&mut rng, size)?,
        ),
        InstanceKind::Mixed => (
            random_discrete(&mut rng, size)?,
            random_piecewise(&mut rng, size)?,
        ),
    };
    Ok(BilateralInstance::new(buyer, seller))
}

fn random_masses(rng: &mut RngStream, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.unit_open_closed().ln()).collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    }
}

fn random_discrete(rng: &mut RngStream, size: usize) -> Result<Distribution> {
    let mut slots: Vec<usize> =
        rand::seq::index::sample(rng, DISCRETE_GRID_POINTS, size).into_vec();
    slots.sort_unstable();
    let masses = random_masses(rng, size);
    let points: Vec<(f64, f64)> = slots.iter().map(|&s| s as f64 / 10.0).zip(masses).collect();
    Distribution::discrete(&points)
}

fn random_piecewise(rng: &mut RngStream, size: usize) -> Result<Distribution> {
    let mut breakpoints = vec![rng.random_range(0.0..5.0)];
    for _ in 0..size {
        let last = breakpoints[breakpoints.len() - 1];
        breakpoints.push(last + rng.random_range(0.05..2.0));
    }
    let masses = random_masses(rng, size);
    Distribution::piecewise_uniform(&breakpoints, &masses)
}
