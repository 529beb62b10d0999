//! The balanced fixed-price double auction.
//!
//! `n` buyers with values drawn from `f`, `m` sellers with values drawn from `g`,
//! one item per seller. A single price `p̄` with `n F̄(p̄) = m G(p̄)` is posted and a
//! uniform random maximal set of feasible pairs trades at it.
//!
//! Monte Carlo runs draw replicate `i` from its own stream keyed by `(seed, i)` and
//! reduce in replicate order, so reports do not depend on the worker count.

use rand::seq::index;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::balance;
use crate::dist::{Distribution, Money, Probability};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Confidence halfwidths are this many standard errors.
pub const HALFWIDTH_SE: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct DoubleAuctionInstance {
    pub n: usize,
    pub m: usize,
    pub buyer: Distribution,
    pub seller: Distribution,
}

impl DoubleAuctionInstance {
    pub fn new(n: usize, m: usize, buyer: Distribution, seller: Distribution) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::domain(format!(
                "need n >= 1 and m >= 1, got n={n}, m={m}"
            )));
        }
        Ok(DoubleAuctionInstance {
            n,
            m,
            buyer,
            seller,
        })
    }

    /// Draws `n` buyer values then `m` seller values.
    pub fn draw_profile(&self, stream: &mut RngStream) -> Profile {
        let buyer_values = self.buyer.sample(stream, self.n);
        let seller_values = self.seller.sample(stream, self.m);
        Profile {
            buyer_values,
            seller_values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedPrice {
    pub price: Money,
    /// `#T = n F̄(p̄)`.
    pub expected_trades: f64,
    pub qbar_b: Probability,
    pub qbar_s: Probability,
    pub no_beneficial_trade: bool,
}

/// The price balancing expected demand `n F̄(p)` against expected supply `m G(p)`.
pub fn da_balanced_price(inst: &DoubleAuctionInstance) -> BalancedPrice {
    let price = balance::crossing(&inst.buyer, &inst.seller, inst.n as f64, inst.m as f64);
    let qbar_b = inst.buyer.survival(price);
    let qbar_s = inst.seller.cdf(price);
    let expected_trades = inst.n as f64 * qbar_b;
    let short_side = expected_trades.min(inst.m as f64 * qbar_s);
    BalancedPrice {
        price,
        expected_trades,
        qbar_b,
        qbar_s,
        no_beneficial_trade: short_side <= 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub buyer_values: Vec<Money>,
    pub seller_values: Vec<Money>,
}

impl Profile {
    pub fn new(buyer_values: Vec<Money>, seller_values: Vec<Money>) -> Result<Self> {
        for (side, vals) in [("buyer", &buyer_values), ("seller", &seller_values)] {
            if let Some(x) = vals.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::domain(format!(
                    "{side} value {x} must be finite and >= 0"
                )));
            }
        }
        Ok(Profile {
            buyer_values,
            seller_values,
        })
    }

    pub fn n(&self) -> usize {
        self.buyer_values.len()
    }

    pub fn m(&self) -> usize {
        self.seller_values.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    /// `x[i]`: buyer `i` ends up holding an item.
    pub x: Vec<bool>,
    /// `y[j]`: seller `j` keeps her item.
    pub y: Vec<bool>,
    /// Trading `(buyer, seller)` pairs.
    pub pairs: Vec<(usize, usize)>,
    /// Posted price; `None` for the welfare benchmark.
    pub price: Option<Money>,
    pub gft: Money,
}

impl Outcome {
    fn from_pairs(profile: &Profile, pairs: Vec<(usize, usize)>, price: Option<Money>) -> Self {
        let mut x = vec![false; profile.n()];
        let mut y = vec![true; profile.m()];
        let mut gft = 0.0;
        for &(i, j) in &pairs {
            x[i] = true;
            y[j] = false;
            gft += profile.buyer_values[i] - profile.seller_values[j];
        }
        Outcome {
            x,
            y,
            pairs,
            price,
            gft,
        }
    }

    pub fn trades(&self) -> usize {
        self.pairs.len()
    }

    /// Buyer payments minus seller receipts; zero by construction at a single price.
    pub fn net_transfer(&self) -> Money {
        let p = self.price.unwrap_or(0.0);
        let paid = self.x.iter().filter(|&&held| held).count() as f64 * p;
        let received = self.y.iter().filter(|&&kept| !kept).count() as f64 * p;
        paid - received
    }
}

/// `B = {i : v_i >= p}` and `S = {j : w_j <= p}`; every pair in `B × S` is feasible.
pub fn feasible_pairs(profile: &Profile, p: Money) -> (Vec<usize>, Vec<usize>) {
    let b = (0..profile.n())
        .filter(|&i| profile.buyer_values[i] >= p)
        .collect();
    let s = (0..profile.m())
        .filter(|&j| profile.seller_values[j] <= p)
        .collect();
    (b, s)
}

/// Trades `k = min(|B|, |S|)` pairs: the short side trades entirely, a uniform
/// `k`-subset of the long side is drawn, and the two are paired in index order.
pub fn run_mechanism(profile: &Profile, p: Money, stream: &mut RngStream) -> Outcome {
    let (b, s) = feasible_pairs(profile, p);
    let k = b.len().min(s.len());
    let pick = |side: &[usize], stream: &mut RngStream| -> Vec<usize> {
        if side.len() == k {
            return side.to_vec();
        }
        let mut chosen: Vec<usize> = index::sample(stream, side.len(), k)
            .into_iter()
            .map(|t| side[t])
            .collect();
        chosen.sort_unstable();
        chosen
    };
    let buyers = pick(&b, stream);
    let sellers = pick(&s, stream);
    Outcome::from_pairs(profile, buyers.into_iter().zip(sellers).collect(), Some(p))
}

/// Visits all agents in a uniform random order and offers each the price `p`.
/// Accepting agents wait in FIFO queues and are matched as soon as a counterpart
/// is waiting.
pub fn run_sequential_posted(profile: &Profile, p: Money, stream: &mut RngStream) -> Outcome {
    let (n, m) = (profile.n(), profile.m());
    // agents 0..n are buyers, n..n+m sellers
    let mut order: Vec<usize> = (0..n + m).collect();
    order.shuffle(stream);
    let mut buyers_waiting = std::collections::VecDeque::new();
    let mut sellers_waiting = std::collections::VecDeque::new();
    let mut pairs = Vec::new();
    for a in order {
        if a < n {
            if profile.buyer_values[a] >= p {
                match sellers_waiting.pop_front() {
                    Some(j) => pairs.push((a, j)),
                    None => buyers_waiting.push_back(a),
                }
            }
        } else {
            let j = a - n;
            if profile.seller_values[j] <= p {
                match buyers_waiting.pop_front() {
                    Some(i) => pairs.push((i, j)),
                    None => sellers_waiting.push_back(j),
                }
            }
        }
    }
    Outcome::from_pairs(profile, pairs, Some(p))
}

/// Exact per-agent trade probabilities of [`run_mechanism`]: `k/|B|` for every
/// buyer in `B`, `k/|S|` for every seller in `S`, zero elsewhere.
pub fn trade_probabilities(profile: &Profile, p: Money) -> (Vec<Probability>, Vec<Probability>) {
    let (b, s) = feasible_pairs(profile, p);
    let k = b.len().min(s.len()) as f64;
    let mut pb = vec![0.0; profile.n()];
    let mut ps = vec![0.0; profile.m()];
    for &i in &b {
        pb[i] = k / b.len() as f64;
    }
    for &j in &s {
        ps[j] = k / s.len() as f64;
    }
    (pb, ps)
}

/// Welfare-maximising allocation: the `k`-th highest buyer trades with the
/// `k`-th lowest seller while the former strictly exceeds the latter.
pub fn optimal_allocation(profile: &Profile) -> Outcome {
    let mut buyers: Vec<usize> = (0..profile.n()).collect();
    let mut sellers: Vec<usize> = (0..profile.m()).collect();
    let (v, w) = (&profile.buyer_values, &profile.seller_values);
    buyers.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    sellers.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
    let pairs: Vec<(usize, usize)> = buyers
        .into_iter()
        .zip(sellers)
        .take_while(|&(i, j)| v[i] > w[j])
        .collect();
    Outcome::from_pairs(profile, pairs, None)
}

/// A profitable misreport found by [`check_dsic`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub profile: Profile,
    pub is_buyer: bool,
    pub agent: usize,
    pub report: Money,
    pub truthful_utility: f64,
    pub deviating_utility: f64,
}

/// Exhaustive truthfulness check over every profile with values from `grid`.
///
/// For each agent and each alternative report from `grid`, expected utility under
/// the true value (trade probability times `v - p` or `p - w`) must not improve.
/// Returns the first profitable deviation, if any.
pub fn check_dsic(n: usize, m: usize, grid: &[Money], p: Money) -> Option<Deviation> {
    const SLACK: f64 = 1e-12;
    let total = n + m;
    let mut digits = vec![0usize; total];
    loop {
        let profile = Profile {
            buyer_values: digits[..n].iter().map(|&d| grid[d]).collect(),
            seller_values: digits[n..].iter().map(|&d| grid[d]).collect(),
        };
        let (pb, ps) = trade_probabilities(&profile, p);
        for agent in 0..total {
            let is_buyer = agent < n;
            let idx = if is_buyer { agent } else { agent - n };
            let value = if is_buyer {
                profile.buyer_values[idx]
            } else {
                profile.seller_values[idx]
            };
            let surplus = if is_buyer { value - p } else { p - value };
            let truthful = surplus * if is_buyer { pb[idx] } else { ps[idx] };
            for &report in grid {
                let mut lie = profile.clone();
                if is_buyer {
                    lie.buyer_values[idx] = report;
                } else {
                    lie.seller_values[idx] = report;
                }
                let (lb, ls) = trade_probabilities(&lie, p);
                let deviating = surplus * if is_buyer { lb[idx] } else { ls[idx] };
                if deviating > truthful + SLACK {
                    return Some(Deviation {
                        profile,
                        is_buyer,
                        agent: idx,
                        report,
                        truthful_utility: truthful,
                        deviating_utility: deviating,
                    });
                }
            }
        }
        // next profile in odometer order
        let mut pos = 0;
        loop {
            if pos == total {
                return None;
            }
            digits[pos] += 1;
            if digits[pos] < grid.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// A Monte Carlo quantity with its confidence halfwidth and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub halfwidth: f64,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DaDiagnostics {
    pub balanced: BalancedPrice,
    /// Per-buyer trade frequency under the optimal allocation.
    pub q_b: Estimate,
    pub q_s: Estimate,
    /// `n q̂ᴮ - m q̂ˢ`; identically zero since every optimal trade has one of each.
    pub trade_balance: Estimate,
    /// Price nearest `p̄` with `F̄(pᴮ) = q̂ᴮ`, and the whole level set.
    pub p_b: Money,
    pub p_b_interval: (Money, Money),
    pub p_s: Money,
    pub p_s_interval: (Money, Money),
    pub opt_estimate: Estimate,
    pub gft_estimate: Estimate,
    /// Mean GFT(p̄) over mean OPT; halfwidth by the delta method.
    pub ratio_estimate: Estimate,
    /// Upper bound on mean OPT from the optimal trade frequencies:
    /// `n q̂ᴮ E[v | v >= pᴮ] - m q̂ˢ E[w | w <= pˢ]`.
    pub optimum_bound: Money,
    /// The same bound at the balanced quantiles, which dominates it:
    /// `n E[v; v >= p̄] - m E[w; w <= p̄]`.
    pub balanced_bound: Money,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub epsilon: f64,
    pub expected_trades: f64,
    /// Frequency of `B >= (1-ε) n q̄ᴮ` and `S >= (1-ε) m q̄ˢ`, binomial halfwidth.
    pub event_frequency: Estimate,
    /// `1 - 2 exp(-#T ε² / 2)`.
    pub event_floor: f64,
    pub gft_ratio: Estimate,
    /// `(1 - ε)` times the event floor.
    pub ratio_floor: f64,
    /// Frequency of realised GFT(p̄) >= (1-ε) mean OPT. Reported, not bounded.
    pub realized_frequency: Estimate,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Replicate {
    opt: f64,
    gft: f64,
    opt_trades: usize,
    willing_buyers: usize,
    willing_sellers: usize,
}

/// Raw per-replicate results of one seeded run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub balanced: BalancedPrice,
    pub replicates: usize,
    pub seed: u64,
    n: usize,
    m: usize,
    records: Vec<Replicate>,
}

/// Runs `replicates` independent markets at the balanced price.
pub fn simulate(inst: &DoubleAuctionInstance, replicates: usize, seed: u64) -> Result<Simulation> {
    if replicates == 0 {
        return Err(Error::domain("replicates must be >= 1"));
    }
    let balanced = da_balanced_price(inst);
    let p = balanced.price;
    let records = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = RngStream::for_replicate(seed, i);
            let profile = inst.draw_profile(&mut stream);
            let best = optimal_allocation(&profile);
            let posted = run_mechanism(&profile, p, &mut stream);
            let (b, s) = feasible_pairs(&profile, p);
            Replicate {
                opt: best.gft,
                gft: posted.gft,
                opt_trades: best.trades(),
                willing_buyers: b.len(),
                willing_sellers: s.len(),
            }
        })
        .collect();
    Ok(Simulation {
        balanced,
        replicates,
        seed,
        n: inst.n,
        m: inst.m,
        records,
    })
}

struct Moments {
    mean: f64,
    var: f64,
}

fn moments(xs: impl Iterator<Item = f64> + Clone) -> Moments {
    let mut count = 0usize;
    let mut sum = 0.0;
    for x in xs.clone() {
        sum += x;
        count += 1;
    }
    let mean = sum / count as f64;
    let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
    let var = if count > 1 {
        ss / (count - 1) as f64
    } else {
        0.0
    };
    Moments { mean, var }
}

impl Simulation {
    fn estimate(&self, value: f64, se: f64) -> Estimate {
        Estimate {
            value,
            halfwidth: HALFWIDTH_SE * se,
            replicates: self.replicates,
            seed: self.seed,
        }
    }

    fn mean_estimate(&self, f: impl Fn(&Replicate) -> f64) -> Estimate {
        let mo = moments(self.records.iter().map(&f));
        self.estimate(mo.mean, (mo.var / self.replicates as f64).sqrt())
    }

    fn frequency(&self, hit: impl Fn(&Replicate) -> bool) -> Estimate {
        let k = self.records.iter().filter(|r| hit(r)).count();
        let p = k as f64 / self.replicates as f64;
        self.estimate(p, (p * (1.0 - p) / self.replicates as f64).sqrt())
    }

    /// Mean GFT over mean OPT with a delta-method standard error.
    fn ratio(&self) -> Estimate {
        let r = self.replicates as f64;
        let g = moments(self.records.iter().map(|x| x.gft));
        let o = moments(self.records.iter().map(|x| x.opt));
        if !(o.mean > 0.0) {
            return self.estimate(f64::NAN, f64::NAN);
        }
        let cov = if self.replicates > 1 {
            self.records
                .iter()
                .map(|x| (x.gft - g.mean) * (x.opt - o.mean))
                .sum::<f64>()
                / (r - 1.0)
        } else {
            0.0
        };
        let ratio = g.mean / o.mean;
        let var = (g.var + ratio * ratio * o.var - 2.0 * ratio * cov) / (o.mean * o.mean * r);
        self.estimate(ratio, var.max(0.0).sqrt())
    }

    pub fn mean_opt(&self) -> Estimate {
        self.mean_estimate(|x| x.opt)
    }

    pub fn mean_gft(&self) -> Estimate {
        self.mean_estimate(|x| x.gft)
    }

    pub fn gft_ratio(&self) -> Estimate {
        self.ratio()
    }

    pub fn diagnostics(&self, inst: &DoubleAuctionInstance) -> DaDiagnostics {
        let (n, m) = (self.n as f64, self.m as f64);
        let trades = self.mean_estimate(|x| x.opt_trades as f64);
        let scaled = |e: Estimate, by: f64| Estimate {
            value: e.value / by,
            halfwidth: e.halfwidth / by,
            ..e
        };
        let q_b = scaled(trades, n);
        let q_s = scaled(trades, m);
        let balance = Estimate {
            value: n * q_b.value - m * q_s.value,
            halfwidth: (n * q_b.halfwidth).hypot(m * q_s.halfwidth),
            ..q_b
        };

        let p_bar = self.balanced.price;
        let p_b_interval = buyer_level_set(&inst.buyer, q_b.value);
        let p_s_interval = seller_level_set(&inst.seller, q_s.value);
        let p_b = p_bar.clamp(p_b_interval.0, p_b_interval.1);
        let p_s = p_bar.clamp(p_s_interval.0, p_s_interval.1);

        let optimum_bound = n * q_b.value * inst.buyer.conditional_mean_above(p_b)
            - m * q_s.value * inst.seller.conditional_mean_below(p_s);
        let balanced_bound = n * inst.buyer.partial_expectation_above(p_bar)
            - m * inst.seller.partial_expectation_below(p_bar);

        DaDiagnostics {
            balanced: self.balanced,
            q_b,
            q_s,
            trade_balance: balance,
            p_b,
            p_b_interval,
            p_s,
            p_s_interval,
            opt_estimate: self.mean_opt(),
            gft_estimate: self.mean_gft(),
            ratio_estimate: self.ratio(),
            optimum_bound,
            balanced_bound,
        }
    }

    pub fn concentration(&self, epsilon: f64) -> Result<ConcentrationReport> {
        check_epsilon(epsilon)?;
        let bp = self.balanced;
        let need_b = (1.0 - epsilon) * self.n as f64 * bp.qbar_b;
        let need_s = (1.0 - epsilon) * self.m as f64 * bp.qbar_s;
        let event_frequency = self
            .frequency(|x| x.willing_buyers as f64 >= need_b && x.willing_sellers as f64 >= need_s);
        let event_floor = 1.0 - 2.0 * (-bp.expected_trades * epsilon * epsilon / 2.0).exp();
        let ratio_floor = (1.0 - epsilon) * event_floor;
        let gft_ratio = self.ratio();
        let target = (1.0 - epsilon) * self.mean_opt().value;
        let realized_frequency = self.frequency(|x| x.gft >= target);

        let mut violations = Vec::new();
        if event_frequency.value + event_frequency.halfwidth < event_floor {
            violations.push(format!(
                "event_frequency {:.6} below floor {:.6}",
                event_frequency.value, event_floor
            ));
        }
        if gft_ratio.value + gft_ratio.halfwidth < ratio_floor {
            violations.push(format!(
                "gft_ratio {:.6} below floor {:.6}",
                gft_ratio.value, ratio_floor
            ));
        }
        Ok(ConcentrationReport {
            epsilon,
            expected_trades: bp.expected_trades,
            event_frequency,
            event_floor,
            gft_ratio,
            ratio_floor,
            realized_frequency,
            violations,
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    Ok(())
}

/// `{p : F̄(p) = q}` as a closed interval (endpoints may be infinite).
fn buyer_level_set(f: &Distribution, q: Probability) -> (Money, Money) {
    let (lo, hi) = f.support();
    if q >= 1.0 {
        return (f64::NEG_INFINITY, lo);
    }
    if q <= 0.0 {
        return (hi, f64::INFINITY);
    }
    let a = f.quantile(1.0 - q).unwrap_or(lo);
    let b = f.survival_inverse(q).unwrap_or(hi);
    (a.min(b), a.max(b))
}

/// `{p : G(p) = q}` as a closed interval (endpoints may be infinite).
fn seller_level_set(g: &Distribution, q: Probability) -> (Money, Money) {
    let (lo, hi) = g.support();
    if q >= 1.0 {
        return (hi, f64::INFINITY);
    }
    if q <= 0.0 {
        return (f64::NEG_INFINITY, lo);
    }
    let a = g.quantile(q).unwrap_or(lo);
    let b = g.survival_inverse(1.0 - q).unwrap_or(hi);
    (a.min(b), a.max(b))
}

/// Trade-frequency and welfare-bound diagnostics from a fresh seeded run.
pub fn estimate(
    inst: &DoubleAuctionInstance,
    replicates: usize,
    seed: u64,
) -> Result<DaDiagnostics> {
    Ok(simulate(inst, replicates, seed)?.diagnostics(inst))
}

/// Concentration report from a fresh seeded run.
pub fn concentration_experiment(
    inst: &DoubleAuctionInstance,
    epsilon: f64,
    replicates: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    check_epsilon(epsilon)?;
    simulate(inst, replicates, seed)?.concentration(epsilon)
}
