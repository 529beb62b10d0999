//! Bilateral trade: one buyer, one seller, one item.
//!
//! Exact evaluators for the optimal gain from trade and the gain of a fixed
//! price, plus three pricing rules with approximation certificates:
//!
//! * balanced price: maximises `q(p) = min(Pr[v >= p], Pr[w <= p])`, which
//!   guarantees `GFT(p) >= q * OPT` and, without atoms, `GFT(p) >= (r/2) OPT`;
//! * median price: any price between the seller and buyer medians has
//!   `q >= 1/2`, hence a 2-approximation;
//! * log rule: balanced prices of `⌈log₂(2/r)⌉` conditional instances on
//!   dyadic tail windows, the best of which is a `4⌈log₂(2/r)⌉`-approximation.

use serde::Serialize;

use crate::balance;
use crate::dist::{trade_probability, Distribution, Money, Probability};
use crate::error::{Error, Result};
use crate::quad;

/// Additive slack used when checking a certificate on its instance.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

// Candidates whose gains differ by less than this (relative) count as tied.
const TIE_TOLERANCE: f64 = 1e-12;
const GOLDEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BilateralInstance {
    buyer: Distribution,
    seller: Distribution,
    r: Probability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GftDecomposition {
    pub price: Money,
    /// Gain missed because both values lie strictly below the price.
    pub mgftl: Money,
    /// Seller's share `E[(p - w) 1(w <= p <= v)]`.
    pub gftl: Money,
    /// Buyer's share `E[(v - p) 1(w <= p <= v)]`.
    pub gftr: Money,
    pub gft: Money,
    /// Gain missed because both values lie strictly above the price.
    pub mgftr: Money,
}

impl GftDecomposition {
    pub fn total(&self) -> Money {
        self.mgftl + self.gft + self.mgftr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PricingRule {
    Balanced,
    Median,
    LogRule,
    BestSearch,
}

impl PricingRule {
    pub fn name(self) -> &'static str {
        match self {
            PricingRule::Balanced => "balanced",
            PricingRule::Median => "median",
            PricingRule::LogRule => "logrule",
            PricingRule::BestSearch => "best",
        }
    }
}

/// Which family of conditional events the log rule used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    /// Seller windows cut at buyer survival levels `2^-i`.
    BuyerSide,
    /// Buyer windows cut at seller CDF levels `2^-i` (the mirror image).
    SellerSide,
}

/// A price together with the guarantee it carries on its instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceCertificate {
    pub price: Money,
    pub rule: PricingRule,
    pub r: Probability,
    /// `min(Pr[v >= p], Pr[w <= p])` at the chosen price.
    pub q: Probability,
    /// `OPT <= guaranteed_ratio * GFT(price)`.
    pub guaranteed_ratio: f64,
    pub no_beneficial_trade: bool,
    pub case_label: Option<CaseLabel>,
    pub thresholds_x: Option<Money>,
    pub thresholds_y: Option<Money>,
    pub candidates: Vec<Money>,
}

impl PriceCertificate {
    fn plain(price: Money, rule: PricingRule, inst: &BilateralInstance, ratio: f64) -> Self {
        PriceCertificate {
            price,
            rule,
            r: inst.r,
            q: inst.q_at(price),
            guaranteed_ratio: ratio,
            no_beneficial_trade: false,
            case_label: None,
            thresholds_x: None,
            thresholds_y: None,
            candidates: Vec::new(),
        }
    }

    /// Checks `GFT(price) >= OPT / guaranteed_ratio` up to [`CERTIFICATE_SLACK`].
    pub fn holds_on(&self, inst: &BilateralInstance) -> bool {
        inst.opt_gft() <= self.guaranteed_ratio * inst.gft_at(self.price) + CERTIFICATE_SLACK
    }
}

impl BilateralInstance {
    pub fn new(buyer: Distribution, seller: Distribution) -> Self {
        let r = trade_probability(&buyer, &seller);
        BilateralInstance { buyer, seller, r }
    }

    pub fn buyer(&self) -> &Distribution {
        &self.buyer
    }

    pub fn seller(&self) -> &Distribution {
        &self.seller
    }

    /// `r = Pr[v >= w]`, computed once at construction.
    pub fn trade_probability(&self) -> Probability {
        self.r
    }

    pub fn is_atomless(&self) -> bool {
        self.buyer.is_atomless() && self.seller.is_atomless()
    }

    fn knots(&self) -> Vec<Money> {
        quad::merge_knots(self.buyer.knots(), self.seller.knots())
    }

    fn span(&self) -> (Money, Money) {
        let k = self.knots();
        (k[0], k[k.len() - 1])
    }

    /// `q(p) = min(Pr[v >= p], Pr[w <= p])`.
    pub fn q_at(&self, p: Money) -> Probability {
        self.buyer.survival(p).min(self.seller.cdf(p))
    }

    /// `OPT = E[max(0, v - w)] = ∫ Pr[w <= t] Pr[v > t] dt`.
    pub fn opt_gft(&self) -> Money {
        let (lo, hi) = self.span();
        quad::integrate(&self.knots(), lo, hi, |t| {
            self.seller.cdf(t) * self.buyer.survival_strict(t)
        })
    }

    /// `GFT(p) = E[(v - w) 1(w <= p <= v)]`.
    pub fn gft_at(&self, p: Money) -> Money {
        let d = self.split_gft(p);
        d.0 + d.1
    }

    fn split_gft(&self, p: Money) -> (Money, Money) {
        let (f, g) = (&self.buyer, &self.seller);
        let buyer_trades = f.survival(p);
        let seller_trades = g.cdf(p);
        let gftl = buyer_trades * (p * seller_trades - g.partial_expectation_below(p));
        let gftr = seller_trades * (f.partial_expectation_above(p) - p * buyer_trades);
        (gftl.max(0.0), gftr.max(0.0))
    }

    /// Splits OPT into the part missed on the left of `p`, the part realised at `p`,
    /// and the part missed on the right.
    pub fn gft_decomposition(&self, p: Money) -> GftDecomposition {
        let (f, g) = (&self.buyer, &self.seller);
        let (lo, hi) = self.span();
        let mut knots = self.knots();
        knots.push(p);

        // E[(v - w) 1(w <= v < p)] = ∫_{t < p} Pr[w <= t] Pr[t < v < p] dt
        let below_p = f.cdf_strict(p);
        let mgftl = quad::integrate(&knots, lo, p.min(hi), |t| {
            g.cdf(t) * (below_p - f.cdf(t)).max(0.0)
        });
        // E[(v - w) 1(p < w <= v)] = ∫_{t > p} Pr[p < w <= t] Pr[v > t] dt
        let at_p = g.cdf(p);
        let mgftr = quad::integrate(&knots, p.max(lo), hi, |t| {
            (g.cdf(t) - at_p).max(0.0) * f.survival_strict(t)
        });
        let (gftl, gftr) = self.split_gft(p);
        GftDecomposition {
            price: p,
            mgftl,
            gftl,
            gftr,
            gft: gftl + gftr,
            mgftr,
        }
    }

    /// The price maximising `q`; see [`crate::balance`] for why the crossing point
    /// is a maximiser. Certificate ratio is `1/q`.
    pub fn balanced_price(&self) -> PriceCertificate {
        let price = balance::crossing(&self.buyer, &self.seller, 1.0, 1.0);
        let q = self.q_at(price);
        let mut cert = PriceCertificate::plain(price, PricingRule::Balanced, self, 1.0 / q);
        cert.no_beneficial_trade = q <= 0.0;
        cert
    }

    /// Midpoint of `[median(seller), median(buyer)]`, a 2-approximation.
    pub fn median_price(&self) -> Result<PriceCertificate> {
        let (ms, mb) = (self.seller.median(), self.buyer.median());
        if ms > mb {
            return Err(Error::MedianConditionFails {
                seller: ms,
                buyer: mb,
            });
        }
        Ok(PriceCertificate::plain(
            0.5 * (ms + mb),
            PricingRule::Median,
            self,
            2.0,
        ))
    }

    fn require_log_rule_preconditions(&self) -> Result<()> {
        if !self.buyer.is_atomless() {
            return Err(Error::AtomlessRequired("buyer distribution"));
        }
        if !self.seller.is_atomless() {
            return Err(Error::AtomlessRequired("seller distribution"));
        }
        if !(self.r > 0.0) {
            return Err(Error::NoBeneficialTrade);
        }
        Ok(())
    }

    /// `(x, y)` with `G(x) = r/2` and `F̄(y) = r/2`; always `y >= x`.
    pub fn case_thresholds(&self) -> Result<(Money, Money)> {
        self.require_log_rule_preconditions()?;
        let half_r = 0.5 * self.r;
        let x = self.seller.quantile(half_r)?;
        let y = self.buyer.survival_inverse(half_r)?;
        Ok((x, y))
    }

    /// Number of conditional windows, `⌈log₂(2/r)⌉`.
    pub fn log_rule_windows(&self) -> usize {
        log_rule_windows(self.r)
    }

    /// The logarithmic rule. Requires atomless distributions and `r > 0`.
    pub fn log_rule_price(&self) -> Result<PriceCertificate> {
        self.require_log_rule_preconditions()?;
        let (x, y) = self.case_thresholds()?;
        let windows = self.log_rule_windows();
        let opt = self.opt_gft();

        // gain with the seller value above y, i.e. MGFTR(y)
        let right_tail = self.gft_decomposition(y).mgftr;
        let (case, candidates) = if right_tail <= 0.5 * opt {
            let c = buyer_side_candidates(&self.buyer, &self.seller, windows)?;
            (CaseLabel::BuyerSide, c)
        } else {
            let pivot = self.span().1;
            let mirrored_buyer = self.seller.reflect(pivot)?;
            let mirrored_seller = self.buyer.reflect(pivot)?;
            let c = buyer_side_candidates(&mirrored_buyer, &mirrored_seller, windows)?
                .into_iter()
                .map(|p| pivot - p)
                .collect();
            (CaseLabel::SellerSide, c)
        };
        if candidates.is_empty() {
            return Err(Error::NoBeneficialTrade);
        }
        let price = self.best_of(&candidates);
        let mut cert =
            PriceCertificate::plain(price, PricingRule::LogRule, self, 4.0 * windows as f64);
        cert.case_label = Some(case);
        cert.thresholds_x = Some(x);
        cert.thresholds_y = Some(y);
        cert.candidates = candidates;
        Ok(cert)
    }

    /// Best fixed price by exhaustive search; ties resolve to the smallest price.
    ///
    /// With only atoms, GFT is piecewise constant and every maximum is attained on
    /// a support point. With densities, each cell of the merged grid is scanned and
    /// refined by golden-section search.
    pub fn best_fixed_price(&self) -> (Money, Money) {
        let knots = self.knots();
        let mut candidates = knots.clone();
        if self.buyer.is_atomless() || self.seller.is_atomless() {
            for seg in knots.windows(2) {
                candidates.push(self.golden_max(seg[0], seg[1]));
            }
        }
        candidates.sort_by(f64::total_cmp);
        let price = self.best_of(&candidates);
        (price, self.gft_at(price))
    }

    /// Certificate for [`best_fixed_price`](Self::best_fixed_price); the ratio is the
    /// realised `OPT / GFT`.
    pub fn best_price_certificate(&self) -> PriceCertificate {
        let (price, gft) = self.best_fixed_price();
        let ratio = self.opt_gft() / gft;
        let mut cert = PriceCertificate::plain(price, PricingRule::BestSearch, self, ratio);
        cert.no_beneficial_trade = !(gft > 0.0);
        cert
    }

    /// Highest-GFT candidate, smallest price among ties.
    fn best_of(&self, candidates: &[Money]) -> Money {
        let mut scored: Vec<(Money, Money)> =
            candidates.iter().map(|&p| (p, self.gft_at(p))).collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let top = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let cutoff = top - TIE_TOLERANCE * top.abs().max(f64::MIN_POSITIVE);
        scored
            .iter()
            .find(|s| s.1 >= cutoff)
            .map(|s| s.0)
            .unwrap_or(scored[0].0)
    }

    fn golden_max(&self, a: Money, b: Money) -> Money {
        // coarse scan first: GFT is a cubic on the cell and need not be unimodal
        const SCAN: usize = 8;
        let xs: Vec<f64> = (0..=SCAN)
            .map(|k| a + (b - a) * k as f64 / SCAN as f64)
            .collect();
        let best = (0..=SCAN)
            .max_by(|&i, &j| self.gft_at(xs[i]).total_cmp(&self.gft_at(xs[j])))
            .unwrap_or(0);
        let mut lo = xs[best.saturating_sub(1)];
        let mut hi = xs[(best + 1).min(SCAN)];
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let (mut f1, mut f2) = (self.gft_at(x1), self.gft_at(x2));
        while hi - lo > GOLDEN_TOLERANCE {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = self.gft_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = self.gft_at(x1);
            }
        }
        0.5 * (lo + hi)
    }
}

/// `⌈log₂(2/r)⌉`, at least 1. A 1e-9 slack absorbs rounding when `2/r` is a power of two.
pub fn log_rule_windows(r: Probability) -> usize {
    ((2.0 / r).log2() - 1e-9).ceil().max(1.0) as usize
}

/// Balanced prices of the conditional instances on the buyer-side windows.
///
/// Window `i` conditions the seller on `z_{i-1} <= w <= z_i` and the buyer on
/// `v >= z_{i-1}`, where `z_i = F̄⁻¹(2^-i)`. The first seller window is open
/// below so that seller mass under the buyer's support is covered.
fn buyer_side_candidates(
    buyer: &Distribution,
    seller: &Distribution,
    windows: usize,
) -> Result<Vec<Money>> {
    let mut out = Vec::with_capacity(windows);
    let mut lower = f64::NEG_INFINITY;
    for i in 1..=windows {
        let upper = buyer.survival_inverse(0.5f64.powi(i as i32))?;
        let seller_window = match seller.restrict(lower, upper) {
            Ok(d) => Some(d),
            Err(Error::EmptyConditioningEvent { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(g_e) = seller_window {
            let f_e = if i == 1 {
                buyer.clone()
            } else {
                buyer.restrict(lower, f64::INFINITY)?
            };
            out.push(balance::crossing(&f_e, &g_e, 1.0, 1.0));
        }
        lower = upper;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(buyer: Distribution, seller: Distribution) -> BilateralInstance {
        BilateralInstance::new(buyer, seller)
    }

    fn uniform_pair() -> BilateralInstance {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        inst(u.clone(), u)
    }

    fn ten_four() -> BilateralInstance {
        inst(
            Distribution::point_mass(10.0).unwrap(),
            Distribution::point_mass(4.0).unwrap(),
        )
    }

    fn four_atoms() -> BilateralInstance {
        inst(
            Distribution::discrete(&[(1.0, 0.5), (3.0, 0.5)]).unwrap(),
            Distribution::discrete(&[(0.0, 0.5), (2.0, 0.5)]).unwrap(),
        )
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn opt_examples() {
        assert!(close(ten_four().opt_gft(), 6.0, 1e-12));
        assert!(close(uniform_pair().opt_gft(), 1.0 / 6.0, 1e-12));
        assert!(close(four_atoms().opt_gft(), 1.25, 1e-12));
    }

    #[test]
    fn gft_examples() {
        assert!(close(ten_four().gft_at(7.0), 6.0, 1e-12));
        assert_eq!(ten_four().gft_at(3.0), 0.0);
        assert!(close(uniform_pair().gft_at(0.5), 0.125, 1e-12));
        assert!(close(uniform_pair().gft_at(1.0 / 3.0), 1.0 / 9.0, 1e-12));
        assert_eq!(uniform_pair().gft_at(0.0), 0.0);
    }

    #[test]
    fn decomposition_examples() {
        let d = ten_four().gft_decomposition(7.0);
        assert!(
            close(d.mgftl, 0.0, 1e-12) && close(d.gft, 6.0, 1e-12) && close(d.mgftr, 0.0, 1e-12)
        );

        let d = four_atoms().gft_decomposition(1.0);
        assert!(close(d.mgftl, 0.0, 1e-12));
        assert!(close(d.gft, 1.0, 1e-12));
        assert!(close(d.mgftr, 0.25, 1e-12));

        let i = uniform_pair();
        let d = i.gft_decomposition(0.0);
        assert_eq!(d.gft, 0.0);
        assert_eq!(d.mgftl, 0.0);
        assert!(close(d.mgftr, i.opt_gft(), 1e-12));
    }

    #[test]
    fn balanced_examples() {
        let c = uniform_pair().balanced_price();
        assert!(close(c.price, 0.5, 1e-10) && close(c.q, 0.5, 1e-9));
        assert!(close(c.guaranteed_ratio, 2.0, 1e-8));

        let c = four_atoms().balanced_price();
        assert_eq!(c.price, 1.0);
        assert_eq!(c.q, 0.5);

        let c = ten_four().balanced_price();
        assert_eq!((c.price, c.q, c.guaranteed_ratio), (4.0, 1.0, 1.0));
        assert!(!c.no_beneficial_trade);
    }

    #[test]
    fn balanced_flags_separated_supports() {
        let i = inst(
            Distribution::point_mass(1.0).unwrap(),
            Distribution::point_mass(5.0).unwrap(),
        );
        let c = i.balanced_price();
        assert_eq!(c.q, 0.0);
        assert!(c.no_beneficial_trade);
        assert!(c.guaranteed_ratio.is_infinite());
    }

    #[test]
    fn median_examples() {
        let c = uniform_pair().median_price().unwrap();
        assert_eq!((c.price, c.guaranteed_ratio), (0.5, 2.0));
        assert_eq!(ten_four().median_price().unwrap().price, 7.0);
        let reversed = inst(
            Distribution::uniform(0.0, 0.4).unwrap(),
            Distribution::uniform(0.6, 1.0).unwrap(),
        );
        assert!(matches!(
            reversed.median_price(),
            Err(Error::MedianConditionFails { .. })
        ));
    }

    #[test]
    fn log_rule_on_uniform_pair() {
        let i = uniform_pair();
        assert_eq!(i.log_rule_windows(), 2);
        let c = i.log_rule_price().unwrap();
        assert_eq!(c.case_label, Some(CaseLabel::BuyerSide));
        assert!(close(c.thresholds_x.unwrap(), 0.25, 1e-12));
        assert!(close(c.thresholds_y.unwrap(), 0.75, 1e-12));
        assert_eq!(c.candidates.len(), 2);
        assert!(close(c.candidates[0], 1.0 / 3.0, 1e-9));
        assert!(close(c.candidates[1], 2.0 / 3.0, 1e-9));
        assert!(close(c.price, 1.0 / 3.0, 1e-9));
        assert!(close(i.gft_at(c.price), 1.0 / 9.0, 1e-9));
        assert_eq!(c.guaranteed_ratio, 8.0);
        assert!(c.holds_on(&i));
    }

    #[test]
    fn log_rule_with_certain_trade() {
        let i = inst(
            Distribution::uniform(2.0, 3.0).unwrap(),
            Distribution::uniform(0.0, 1.0).unwrap(),
        );
        assert!(close(i.trade_probability(), 1.0, 1e-15));
        let c = i.log_rule_price().unwrap();
        assert_eq!(c.candidates.len(), 1);
        assert_eq!(c.guaranteed_ratio, 4.0);
        assert!(c.holds_on(&i));
    }

    #[test]
    fn log_rule_rejects_atoms_and_zero_r() {
        assert!(matches!(
            ten_four().log_rule_price(),
            Err(Error::AtomlessRequired(_))
        ));
        let apart = inst(
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::uniform(2.0, 3.0).unwrap(),
        );
        assert!(matches!(
            apart.log_rule_price(),
            Err(Error::NoBeneficialTrade)
        ));
    }

    #[test]
    fn thresholds() {
        assert_eq!(uniform_pair().case_thresholds().unwrap(), (0.25, 0.75));
        let i = inst(
            Distribution::uniform(2.0, 3.0).unwrap(),
            Distribution::uniform(0.0, 1.0).unwrap(),
        );
        let (x, y) = i.case_thresholds().unwrap();
        assert!(close(x, 0.5, 1e-12) && close(y, 2.5, 1e-12));
        assert!(y >= x);
    }

    #[test]
    fn best_price_examples() {
        assert_eq!(ten_four().best_fixed_price(), (4.0, 6.0));
        let (p, g) = uniform_pair().best_fixed_price();
        assert!(close(p, 0.5, 1e-8) && close(g, 0.125, 1e-12));
    }

    #[test]
    fn window_count() {
        assert_eq!(log_rule_windows(1.0), 1);
        assert_eq!(log_rule_windows(0.5), 2);
        assert_eq!(log_rule_windows(0.5 + 1e-15), 2);
        assert_eq!(log_rule_windows(0.3), 3);
        assert_eq!(log_rule_windows(0.05), 6);
    }
}
