//! One-dimensional valuation distributions.
//!
//! A [`Distribution`] is either a finite set of point masses or a
//! piecewise-uniform density. Both carry the same query surface: CDF,
//! survival, generalized inverses, partial expectations, conditioning on a
//! window, and inverse-transform sampling.
//!
//! Conventions: `cdf(t) = Pr[X <= t]` and `survival(t) = Pr[X >= t]` are both
//! closed at `t`, so an atom sitting exactly at a posted price trades on
//! either side of the market.

use crate::error::{Error, Result};
use crate::quad;
use crate::rng::RngStream;

pub type Money = f64;
pub type Probability = f64;

/// Masses must sum to one within this tolerance at construction.
pub const MASS_TOLERANCE: f64 = 1e-12;

// Slack when comparing a target probability against accumulated masses.
const LEVEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Discrete,
    PiecewiseUniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    kind: Kind,
    /// Atom locations (discrete) or cell breakpoints (piecewise uniform).
    knots: Vec<Money>,
    /// One mass per atom, or one mass per cell (`knots.len() - 1` of them).
    masses: Vec<Probability>,
    /// `head[i]` = mass of atoms/cells `0..i`.
    head: Vec<Probability>,
    /// `tail[i]` = mass of atoms/cells `i..`.
    tail: Vec<Probability>,
    /// `head_moment[i]` = E[X; atoms/cells `0..i`].
    head_moment: Vec<Money>,
    tail_moment: Vec<Money>,
}

impl Distribution {
    /// Point masses at strictly increasing, non-negative values.
    pub fn discrete(points: &[(Money, Probability)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid(
                "discrete distribution needs at least one point",
            ));
        }
        let (knots, masses): (Vec<_>, Vec<_>) = points.iter().copied().unzip();
        check_knots(&knots, "value")?;
        let moments: Vec<f64> = knots.iter().zip(&masses).map(|(v, m)| v * m).collect();
        Self::build(Kind::Discrete, knots, masses, &moments)
    }

    /// Density constant on each `[b[i], b[i+1])`, with `masses[i]` on that cell.
    pub fn piecewise_uniform(breakpoints: &[Money], masses: &[Probability]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid(
                "piecewise uniform needs at least two breakpoints",
            ));
        }
        if masses.len() + 1 != breakpoints.len() {
            return Err(Error::invalid(format!(
                "{} breakpoints need {} cell masses, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                masses.len()
            )));
        }
        check_knots(breakpoints, "breakpoint")?;
        let moments: Vec<f64> = breakpoints
            .windows(2)
            .zip(masses)
            .map(|(b, m)| m * 0.5 * (b[0] + b[1]))
            .collect();
        Self::build(
            Kind::PiecewiseUniform,
            breakpoints.to_vec(),
            masses.to_vec(),
            &moments,
        )
    }

    pub fn uniform(lo: Money, hi: Money) -> Result<Self> {
        Self::piecewise_uniform(&[lo, hi], &[1.0])
    }

    pub fn point_mass(value: Money) -> Result<Self> {
        Self::discrete(&[(value, 1.0)])
    }

    fn build(
        kind: Kind,
        knots: Vec<Money>,
        masses: Vec<Probability>,
        moments: &[Money],
    ) -> Result<Self> {
        for (i, &m) in masses.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::invalid(format!(
                    "mass #{i} is {m}, must be finite and >= 0"
                )));
            }
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("masses sum to {total}, expected 1")));
        }
        Ok(Distribution {
            kind,
            head: prefix_sums(&masses),
            tail: suffix_sums(&masses),
            head_moment: prefix_sums(moments),
            tail_moment: suffix_sums(moments),
            knots,
            masses,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_atomless(&self) -> bool {
        self.kind == Kind::PiecewiseUniform
    }

    /// Atom locations or cell breakpoints.
    pub fn knots(&self) -> &[Money] {
        &self.knots
    }

    pub fn masses(&self) -> &[Probability] {
        &self.masses
    }

    /// `(value, mass)` pairs of a discrete distribution; empty otherwise.
    pub fn points(&self) -> Vec<(Money, Probability)> {
        match self.kind {
            Kind::Discrete => self
                .knots
                .iter()
                .copied()
                .zip(self.masses.iter().copied())
                .collect(),
            Kind::PiecewiseUniform => Vec::new(),
        }
    }

    /// Smallest and largest point of the support (positive-mass atoms or cells).
    pub fn support(&self) -> (Money, Money) {
        let first = self.masses.iter().position(|&m| m > 0.0).unwrap_or(0);
        let last = self
            .masses
            .iter()
            .rposition(|&m| m > 0.0)
            .unwrap_or(self.masses.len() - 1);
        match self.kind {
            Kind::Discrete => (self.knots[first], self.knots[last]),
            Kind::PiecewiseUniform => (self.knots[first], self.knots[last + 1]),
        }
    }

    pub fn mean(&self) -> Money {
        self.head_moment[self.masses.len()]
    }

    pub fn median(&self) -> Money {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    /// Mass of the atom exactly at `t` (always zero for densities).
    pub fn mass_at(&self, t: Money) -> Probability {
        match self.kind {
            Kind::Discrete => self
                .knots
                .binary_search_by(|x| x.total_cmp(&t))
                .map(|i| self.masses[i])
                .unwrap_or(0.0),
            Kind::PiecewiseUniform => 0.0,
        }
    }

    /// `Pr[X <= t]`.
    pub fn cdf(&self, t: Money) -> Probability {
        match self.kind {
            Kind::Discrete => self.head[self.knots.partition_point(|&x| x <= t)],
            Kind::PiecewiseUniform => self.cell_split(t).map_or_else(
                |edge| edge.below,
                |(i, frac)| self.head[i] + self.masses[i] * frac,
            ),
        }
    }

    /// `Pr[X < t]`.
    pub fn cdf_strict(&self, t: Money) -> Probability {
        match self.kind {
            Kind::Discrete => self.head[self.knots.partition_point(|&x| x < t)],
            Kind::PiecewiseUniform => self.cdf(t),
        }
    }

    /// `Pr[X >= t]`.
    pub fn survival(&self, t: Money) -> Probability {
        match self.kind {
            Kind::Discrete => self.tail[self.knots.partition_point(|&x| x < t)],
            Kind::PiecewiseUniform => self.cell_split(t).map_or_else(
                |edge| edge.above,
                |(i, frac)| self.tail[i + 1] + self.masses[i] * (1.0 - frac),
            ),
        }
    }

    /// `Pr[X > t]`.
    pub fn survival_strict(&self, t: Money) -> Probability {
        match self.kind {
            Kind::Discrete => self.tail[self.knots.partition_point(|&x| x <= t)],
            Kind::PiecewiseUniform => self.survival(t),
        }
    }

    /// `E[X 1(X <= t)]`.
    pub fn partial_expectation_below(&self, t: Money) -> Money {
        match self.kind {
            Kind::Discrete => self.head_moment[self.knots.partition_point(|&x| x <= t)],
            Kind::PiecewiseUniform => self.cell_split(t).map_or_else(
                |edge| if edge.below > 0.0 { self.mean() } else { 0.0 },
                |(i, frac)| self.head_moment[i] + self.masses[i] * frac * 0.5 * (self.knots[i] + t),
            ),
        }
    }

    /// `E[X 1(X >= t)]`.
    pub fn partial_expectation_above(&self, t: Money) -> Money {
        match self.kind {
            Kind::Discrete => self.tail_moment[self.knots.partition_point(|&x| x < t)],
            Kind::PiecewiseUniform => self.cell_split(t).map_or_else(
                |edge| if edge.above > 0.0 { self.mean() } else { 0.0 },
                |(i, frac)| {
                    self.tail_moment[i + 1]
                        + self.masses[i] * (1.0 - frac) * 0.5 * (t + self.knots[i + 1])
                },
            ),
        }
    }

    /// `E[X | X >= t]`, or `t` itself when the event has no mass.
    pub fn conditional_mean_above(&self, t: Money) -> Money {
        let s = self.survival(t);
        if s > 0.0 {
            self.partial_expectation_above(t) / s
        } else {
            t
        }
    }

    /// `E[X | X <= t]`, or `t` itself when the event has no mass.
    pub fn conditional_mean_below(&self, t: Money) -> Money {
        let c = self.cdf(t);
        if c > 0.0 {
            self.partial_expectation_below(t) / c
        } else {
            t
        }
    }

    /// Generalized inverse of the CDF: the smallest `t` with `cdf(t) >= u`.
    ///
    /// Supports are bounded, so `quantile(1)` is the top of the support and the
    /// `+inf` sentinel for an unattained level never arises.
    pub fn quantile(&self, u: Probability) -> Result<Money> {
        check_level(u)?;
        let target = u - LEVEL_TOLERANCE;
        // smallest item i whose cumulative mass head[i+1] reaches the target
        let mut i = self.head[1..]
            .partition_point(|&c| c < target)
            .min(self.masses.len() - 1);
        while self.masses[i] <= 0.0 && i + 1 < self.masses.len() {
            i += 1;
        }
        Ok(match self.kind {
            Kind::Discrete => self.knots[i],
            Kind::PiecewiseUniform => {
                let (a, b) = (self.knots[i], self.knots[i + 1]);
                let frac = ((u - self.head[i]) / self.masses[i]).clamp(0.0, 1.0);
                (a + frac * (b - a)).clamp(a, b)
            }
        })
    }

    /// The largest `t` with `survival(t) >= u`.
    pub fn survival_inverse(&self, u: Probability) -> Result<Money> {
        check_level(u)?;
        let target = u - LEVEL_TOLERANCE;
        // tail[i] is nonincreasing; the last item whose tail still reaches the target
        let count = self.tail[..self.masses.len()].partition_point(|&s| s >= target);
        let mut i = count.saturating_sub(1);
        while self.masses[i] <= 0.0 && i > 0 {
            i -= 1;
        }
        Ok(match self.kind {
            Kind::Discrete => self.knots[i],
            Kind::PiecewiseUniform => {
                let (a, b) = (self.knots[i], self.knots[i + 1]);
                let frac = ((u - self.tail[i + 1]) / self.masses[i]).clamp(0.0, 1.0);
                (b - frac * (b - a)).clamp(a, b)
            }
        })
    }

    /// Conditional law of `X` given `lo <= X <= hi`. Either bound may be infinite.
    pub fn restrict(&self, lo: Money, hi: Money) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(format!("invalid window [{lo}, {hi}]")));
        }
        let empty = || Error::EmptyConditioningEvent { lo, hi };
        match self.kind {
            Kind::Discrete => {
                let kept: Vec<(f64, f64)> = self
                    .points()
                    .into_iter()
                    .filter(|&(x, m)| x >= lo && x <= hi && m > 0.0)
                    .collect();
                let total: f64 = kept.iter().map(|p| p.1).sum();
                if !(total > 0.0) {
                    return Err(empty());
                }
                let scaled: Vec<_> = kept.into_iter().map(|(x, m)| (x, m / total)).collect();
                Self::discrete(&scaled)
            }
            Kind::PiecewiseUniform => {
                let mut cells: Vec<(f64, f64, f64)> = Vec::new();
                for (i, &m) in self.masses.iter().enumerate() {
                    let (a, b) = (self.knots[i], self.knots[i + 1]);
                    let (ca, cb) = (a.max(lo), b.min(hi));
                    if cb > ca {
                        cells.push((ca, cb, m * (cb - ca) / (b - a)));
                    }
                }
                while cells.first().is_some_and(|c| c.2 <= 0.0) {
                    cells.remove(0);
                }
                while cells.last().is_some_and(|c| c.2 <= 0.0) {
                    cells.pop();
                }
                let total: f64 = cells.iter().map(|c| c.2).sum();
                if !(total > 0.0) {
                    return Err(empty());
                }
                let mut breakpoints = vec![cells[0].0];
                breakpoints.extend(cells.iter().map(|c| c.1));
                let masses: Vec<f64> = cells.iter().map(|c| c.2 / total).collect();
                Self::piecewise_uniform(&breakpoints, &masses)
            }
        }
    }

    /// Replaces each atom `(v, m)` by a uniform cell of mass `m` on `[v, v + width]`.
    /// Overlapping cells add their densities.
    pub fn smooth(&self, width: Money) -> Result<Self> {
        if self.kind != Kind::Discrete {
            return Err(Error::domain(
                "smooth() applies to discrete distributions only",
            ));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::domain(format!(
                "smoothing width must be > 0, got {width}"
            )));
        }
        let atoms = self.points();
        let ends: Vec<f64> = atoms.iter().map(|&(v, _)| v + width).collect();
        let breakpoints = quad::merge_knots(&self.knots, &ends);
        let masses: Vec<f64> = breakpoints
            .windows(2)
            .map(|seg| {
                atoms
                    .iter()
                    .map(|&(v, m)| {
                        let overlap = seg[1].min(v + width) - seg[0].max(v);
                        if overlap > 0.0 {
                            m * overlap / width
                        } else {
                            0.0
                        }
                    })
                    .sum()
            })
            .collect();
        let total: f64 = masses.iter().sum();
        let masses: Vec<f64> = masses.iter().map(|m| m / total).collect();
        Self::piecewise_uniform(&breakpoints, &masses)
    }

    /// Law of `pivot - X`. `pivot` must be at least the largest knot.
    pub(crate) fn reflect(&self, pivot: Money) -> Result<Self> {
        let knots: Vec<f64> = self.knots.iter().rev().map(|x| pivot - x).collect();
        let masses: Vec<f64> = self.masses.iter().rev().copied().collect();
        match self.kind {
            Kind::Discrete => {
                let points: Vec<_> = knots.into_iter().zip(masses).collect();
                Self::discrete(&points)
            }
            Kind::PiecewiseUniform => Self::piecewise_uniform(&knots, &masses),
        }
    }

    /// One inverse-transform draw.
    pub fn sample_one(&self, stream: &mut RngStream) -> Money {
        let u = stream.unit_open_closed();
        self.quantile(u).expect("unit draw lies in (0, 1]")
    }

    /// `k` i.i.d. draws.
    pub fn sample(&self, stream: &mut RngStream, k: usize) -> Vec<Money> {
        (0..k).map(|_| self.sample_one(stream)).collect()
    }

    /// Locates `t` inside the piecewise-uniform grid: `Ok((cell, fraction))`
    /// when inside, `Err(edge)` with the mass below/above when outside.
    fn cell_split(&self, t: Money) -> std::result::Result<(usize, f64), Edge> {
        let k = self.masses.len();
        if t <= self.knots[0] {
            return Err(Edge {
                below: 0.0,
                above: 1.0,
            });
        }
        if t >= self.knots[k] {
            return Err(Edge {
                below: 1.0,
                above: 0.0,
            });
        }
        let i = self.knots.partition_point(|&b| b <= t) - 1;
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        Ok((i, (t - a) / (b - a)))
    }
}

struct Edge {
    below: f64,
    above: f64,
}

/// `r = Pr[v >= w]` for independent buyer value `v ~ buyer` and seller value `w ~ seller`.
pub fn trade_probability(buyer: &Distribution, seller: &Distribution) -> Probability {
    let r = match seller.kind {
        Kind::Discrete => seller
            .points()
            .into_iter()
            .map(|(w, m)| m * buyer.survival(w))
            .sum(),
        Kind::PiecewiseUniform => seller
            .knots
            .windows(2)
            .zip(&seller.masses)
            .filter(|(_, &m)| m > 0.0)
            .map(|(cell, &m)| {
                let density = m / (cell[1] - cell[0]);
                density * quad::integrate(&buyer.knots, cell[0], cell[1], |t| buyer.survival(t))
            })
            .sum(),
    };
    f64::clamp(r, 0.0, 1.0)
}

fn check_knots(knots: &[f64], what: &str) -> Result<()> {
    for (i, &x) in knots.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::invalid(format!("{what} #{i} is not finite")));
        }
        if x < 0.0 {
            return Err(Error::invalid(format!("{what} #{i} is negative ({x})")));
        }
    }
    if let Some(i) = knots.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::invalid(format!(
            "{what}s must be strictly increasing (at #{})",
            i + 1
        )));
    }
    Ok(())
}

fn check_level(u: f64) -> Result<()> {
    if u > 0.0 && u <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "probability level {u} outside (0, 1]"
        )))
    }
}

fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for x in xs {
        acc += x;
        out.push(acc);
    }
    out
}

fn suffix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; xs.len() + 1];
    for i in (0..xs.len()).rev() {
        out[i] = out[i + 1] + xs[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u01() -> Distribution {
        Distribution::uniform(0.0, 1.0).unwrap()
    }

    fn two_atoms() -> Distribution {
        Distribution::discrete(&[(1.0, 0.5), (3.0, 0.5)]).unwrap()
    }

    #[test]
    fn construction_rejects_malformed_input() {
        assert!(Distribution::discrete(&[]).is_err());
        assert!(Distribution::discrete(&[(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(Distribution::discrete(&[(2.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(Distribution::discrete(&[(-1.0, 1.0)]).is_err());
        assert!(Distribution::discrete(&[(1.0, 0.6), (2.0, 0.5)]).is_err());
        assert!(Distribution::discrete(&[(1.0, -0.5), (2.0, 1.5)]).is_err());
        assert!(Distribution::discrete(&[(1.0, 1.0 + 1e-11)]).is_err());
        assert!(Distribution::discrete(&[(1.0, 1.0 + 1e-13)]).is_ok());
        assert!(Distribution::piecewise_uniform(&[0.0], &[]).is_err());
        assert!(Distribution::piecewise_uniform(&[0.0, 1.0], &[0.5, 0.5]).is_err());
        assert!(Distribution::uniform(1.0, 1.0).is_err());
        assert!(Distribution::uniform(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(u01().cdf(0.5), 0.5);
        let atom = Distribution::point_mass(4.0).unwrap();
        assert_eq!(atom.cdf(3.99), 0.0);
        assert_eq!(atom.cdf(4.0), 1.0);
        assert_eq!(u01().cdf(-1.0), 0.0);
        assert_eq!(u01().cdf(2.0), 1.0);
    }

    #[test]
    fn survival_is_closed_at_t() {
        assert_eq!(u01().survival(0.5), 0.5);
        let atom = Distribution::point_mass(4.0).unwrap();
        assert_eq!(atom.survival(4.0), 1.0);
        assert_eq!(atom.survival_strict(4.0), 0.0);
        assert_eq!(atom.cdf_strict(4.0), 0.0);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(u01().quantile(0.25).unwrap(), 0.25);
        assert_eq!(u01().survival_inverse(0.5).unwrap(), 0.5);
        assert_eq!(two_atoms().quantile(0.5).unwrap(), 1.0);
        assert_eq!(two_atoms().survival_inverse(0.5).unwrap(), 3.0);
        assert_eq!(two_atoms().quantile(1.0).unwrap(), 3.0);
        assert_eq!(u01().quantile(1.0).unwrap(), 1.0);
        assert_eq!(u01().survival_inverse(1.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_rejects_levels_outside_unit_interval() {
        for u in [0.0, -0.1, 1.1, f64::NAN] {
            assert!(matches!(u01().quantile(u), Err(Error::Domain(_))));
            assert!(u01().survival_inverse(u).is_err());
        }
    }

    #[test]
    fn flat_regions_resolve_to_extreme_points() {
        // gap between 1 and 2 carries no mass
        let d = Distribution::piecewise_uniform(&[0.0, 1.0, 2.0, 3.0], &[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(d.quantile(0.5).unwrap(), 1.0);
        assert_eq!(d.survival_inverse(0.5).unwrap(), 2.0);
        assert_eq!(d.support(), (0.0, 3.0));
    }

    #[test]
    fn partial_expectations() {
        assert!((u01().partial_expectation_below(0.5) - 0.125).abs() < 1e-15);
        assert!((u01().partial_expectation_above(0.5) - 0.375).abs() < 1e-15);
        let atom = Distribution::point_mass(4.0).unwrap();
        assert_eq!(atom.partial_expectation_below(10.0), 4.0);
        assert_eq!(two_atoms().partial_expectation_above(2.0), 1.5);
        // atom at t is counted on both sides
        let d = two_atoms();
        let t = 3.0;
        let lhs =
            d.partial_expectation_below(t) + d.partial_expectation_above(t) - t * d.mass_at(t);
        assert!((lhs - d.mean()).abs() < 1e-15);
        assert_eq!(d.partial_expectation_below(f64::INFINITY), d.mean());
        assert_eq!(d.partial_expectation_above(0.0), d.mean());
        assert_eq!(u01().partial_expectation_below(f64::INFINITY), 0.5);
        assert_eq!(u01().partial_expectation_above(0.0), 0.5);
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(
            u01().restrict(0.0, 0.5).unwrap(),
            Distribution::uniform(0.0, 0.5).unwrap()
        );
        assert_eq!(
            u01().restrict(0.5, f64::INFINITY).unwrap(),
            Distribution::uniform(0.5, 1.0).unwrap()
        );
        assert_eq!(
            two_atoms().restrict(2.0, 3.0).unwrap(),
            Distribution::point_mass(3.0).unwrap()
        );
        assert!(matches!(
            two_atoms().restrict(1.5, 2.5),
            Err(Error::EmptyConditioningEvent { .. })
        ));
        assert!(matches!(
            u01().restrict(2.0, 3.0),
            Err(Error::EmptyConditioningEvent { .. })
        ));
        assert!(u01().restrict(0.7, 0.2).is_err());
    }

    #[test]
    fn smooth_examples() {
        let atom = Distribution::point_mass(4.0).unwrap();
        let s = atom.smooth(0.1).unwrap();
        assert_eq!(s.kind(), Kind::PiecewiseUniform);
        assert_eq!(s.knots(), &[4.0, 4.1]);
        assert_eq!(s.masses(), &[1.0]);

        let s = two_atoms().smooth(0.5).unwrap();
        assert_eq!(s.knots(), &[1.0, 1.5, 3.0, 3.5]);
        assert_eq!(s.masses(), &[0.5, 0.0, 0.5]);

        // overlapping cells add up
        let d = Distribution::discrete(&[(1.0, 0.5), (1.5, 0.5)]).unwrap();
        let s = d.smooth(1.0).unwrap();
        assert_eq!(s.knots(), &[1.0, 1.5, 2.0, 2.5]);
        assert_eq!(s.masses(), &[0.25, 0.5, 0.25]);

        assert!(u01().smooth(0.1).is_err());
        assert!(atom.smooth(0.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let atom = Distribution::point_mass(4.0).unwrap();
        assert_eq!(atom.sample(&mut RngStream::new(3), 3), vec![4.0, 4.0, 4.0]);
        let a = u01().sample(&mut RngStream::new(11), 100);
        let b = u01().sample(&mut RngStream::new(11), 100);
        assert_eq!(a, b);
        assert!(u01().sample(&mut RngStream::new(11), 0).is_empty());
    }

    #[test]
    fn sample_mean_of_uniform() {
        let xs = u01().sample(&mut RngStream::new(2024), 1_000_000);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn trade_probability_examples() {
        assert!((trade_probability(&u01(), &u01()) - 0.5).abs() < 1e-15);
        let ten = Distribution::point_mass(10.0).unwrap();
        let four = Distribution::point_mass(4.0).unwrap();
        assert_eq!(trade_probability(&ten, &four), 1.0);
        assert_eq!(trade_probability(&four, &ten), 0.0);
        // atoms at the same value trade
        assert_eq!(trade_probability(&four, &four), 1.0);
    }

    #[test]
    fn reflect_mirrors_probabilities() {
        let d = Distribution::piecewise_uniform(&[0.0, 1.0, 3.0], &[0.25, 0.75]).unwrap();
        let m = d.reflect(5.0).unwrap();
        for t in [0.5, 1.0, 2.2, 2.9] {
            assert!((m.cdf(5.0 - t) - d.survival(t)).abs() < 1e-15);
        }
    }
}
