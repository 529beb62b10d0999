//! Seeded invariant sweeps backing the `verify` command.

use serde::Serialize;

use crate::bilateral::BilateralInstance;
use crate::double_auction::{
    check_dsic, feasible_pairs, optimal_allocation, run_mechanism, run_sequential_posted, Profile,
};
use crate::instances::{lower_bound_report, random_instance, InstanceKind, LowerBoundSpec};
use crate::rng::RngStream;

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bilateral,
    DoubleAuction,
    Instances,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            result: CheckResult {
                name,
                cases: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.result.cases += 1;
        if !ok {
            self.result.failures += 1;
            if self.result.first_failure.is_none() {
                self.result.first_failure = Some(detail());
            }
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::Bilateral => bilateral_checks(seed),
        Suite::DoubleAuction => double_auction_checks(seed),
        Suite::Instances => instance_checks(),
        Suite::All => {
            let mut all = bilateral_checks(seed);
            all.extend(double_auction_checks(seed));
            all.extend(instance_checks());
            all
        }
    }
}

fn kind_for(i: u64) -> InstanceKind {
    [
        InstanceKind::Discrete,
        InstanceKind::Piecewise,
        InstanceKind::Mixed,
    ][(i % 3) as usize]
}

fn bilateral_checks(seed: u64) -> Vec<CheckResult> {
    let mut decomposition = Tally::new("decomposition_identity");
    let mut q_bound = Tally::new("gft_at_least_q_opt");
    let mut r_bound = Tally::new("balanced_at_least_half_r_opt");
    let mut median = Tally::new("median_two_approximation");
    let mut log_rule = Tally::new("log_rule_certificate");
    let mut ordering = Tally::new("thresholds_ordered");
    let mut prices = RngStream::new(seed ^ 0x5eed);

    for i in 0..200u64 {
        let s = seed.wrapping_add(i);
        let size = 1 + (i % 6) as usize;
        let Ok(inst) = random_instance(kind_for(i), size, s) else {
            continue;
        };
        let opt = inst.opt_gft();
        let (lo, hi) = support_span(&inst);
        for _ in 0..5 {
            let p = lo + (hi - lo) * prices.unit_open_closed();
            let d = inst.gft_decomposition(p);
            decomposition.check((d.total() - opt).abs() <= SLACK * opt.max(1.0), || {
                format!("seed {s}, p {p}: {} vs {opt}", d.total())
            });
            let q = inst.q_at(p);
            q_bound.check(q * opt <= d.gft + SLACK, || format!("seed {s}, p {p}"));
        }
        if inst.is_atomless() {
            let c = inst.balanced_price();
            let gft = inst.gft_at(c.price);
            r_bound.check(gft >= 0.5 * inst.trade_probability() * opt - SLACK, || {
                format!("seed {s}")
            });
            if let Ok(c) = inst.log_rule_price() {
                log_rule.check(c.holds_on(&inst), || format!("seed {s}"));
            }
            if let Ok((x, y)) = inst.case_thresholds() {
                ordering.check(y >= x, || format!("seed {s}: x {x} y {y}"));
            }
        }
        if let Ok(c) = inst.median_price() {
            median.check(inst.gft_at(c.price) >= 0.5 * opt - SLACK, || {
                format!("seed {s}")
            });
        }
    }
    vec![decomposition, q_bound, r_bound, median, log_rule, ordering]
        .into_iter()
        .map(|t| t.result)
        .collect()
}

fn support_span(inst: &BilateralInstance) -> (f64, f64) {
    let (bl, bh) = inst.buyer().support();
    let (sl, sh) = inst.seller().support();
    (bl.min(sl), bh.max(sh))
}

/// Best welfare over every assignment of items to agents.
fn brute_force_optimum(profile: &Profile) -> f64 {
    let mut best = 0.0f64;
    // each seller either keeps her item or hands it to a distinct buyer
    fn go(j: usize, used: &mut Vec<bool>, acc: f64, profile: &Profile, best: &mut f64) {
        if j == profile.m() {
            *best = best.max(acc);
            return;
        }
        go(j + 1, used, acc, profile, best);
        for i in 0..profile.n() {
            if !used[i] {
                used[i] = true;
                let gain = profile.buyer_values[i] - profile.seller_values[j];
                go(j + 1, used, acc + gain, profile, best);
                used[i] = false;
            }
        }
    }
    go(0, &mut vec![false; profile.n()], 0.0, profile, &mut best);
    best
}

fn double_auction_checks(seed: u64) -> Vec<CheckResult> {
    let mut feasibility = Tally::new("allocation_feasible");
    let mut ir = Tally::new("ex_post_ir");
    let mut sbb = Tally::new("zero_net_transfer");
    let mut count = Tally::new("trade_count_min_b_s");
    let mut sequential = Tally::new("sequential_same_trade_count");
    let mut optimum = Tally::new("optimal_matches_brute_force");
    let mut dsic = Tally::new("dsic_grid");
    let mut rng = RngStream::new(seed);

    for case in 0..2_000 {
        let n = 1 + (rng.unit_open_closed() * 4.0) as usize % 4;
        let m = 1 + (rng.unit_open_closed() * 4.0) as usize % 4;
        let grid = |r: &mut RngStream| (r.unit_open_closed() * 10.0).floor() / 10.0;
        let v: Vec<f64> = (0..n).map(|_| grid(&mut rng)).collect();
        let w: Vec<f64> = (0..m).map(|_| grid(&mut rng)).collect();
        let profile = Profile {
            buyer_values: v,
            seller_values: w,
        };
        let p = grid(&mut rng);
        let o = run_mechanism(&profile, p, &mut rng);
        let held = o.x.iter().filter(|&&x| x).count() + o.y.iter().filter(|&&y| y).count();
        feasibility.check(held == m, || format!("case {case}"));
        ir.check(
            o.pairs
                .iter()
                .all(|&(i, j)| profile.buyer_values[i] >= p && profile.seller_values[j] <= p),
            || format!("case {case}"),
        );
        sbb.check(o.net_transfer() == 0.0, || format!("case {case}"));
        let (b, s) = feasible_pairs(&profile, p);
        count.check(o.trades() == b.len().min(s.len()), || {
            format!("case {case}")
        });
        let seq = run_sequential_posted(&profile, p, &mut rng);
        sequential.check(seq.trades() == o.trades(), || format!("case {case}"));
        if n <= 3 && m <= 3 {
            let exact = brute_force_optimum(&profile);
            let got = optimal_allocation(&profile).gft;
            optimum.check((exact - got).abs() <= 1e-12, || {
                format!("case {case}: {got} vs {exact}")
            });
        }
    }

    let grid = [0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0];
    for n in 1..=2 {
        for m in 1..=2 {
            let found = check_dsic(n, m, &grid, 0.5);
            dsic.check(found.is_none(), || format!("{found:?}"));
        }
    }
    vec![feasibility, ir, sbb, count, sequential, optimum, dsic]
        .into_iter()
        .map(|t| t.result)
        .collect()
}

fn instance_checks() -> Vec<CheckResult> {
    let mut masses = Tally::new("lower_bound_masses");
    let mut dominance = Tally::new("lower_bound_dominance");
    let mut ratio = Tally::new("lower_bound_ratio");
    let mut r_floor = Tally::new("lower_bound_r_floor");

    for n in 1..=10 {
        for eps in [5.0 / 36.0, 0.5, 0.99] {
            let spec = LowerBoundSpec { n, epsilon: eps };
            let Ok(rep) = lower_bound_report(&spec) else {
                ratio.check(false, || format!("N {n} eps {eps}: report failed"));
                continue;
            };
            let inst = crate::instances::lower_bound_instance(&spec).expect("report succeeded");
            for dist in [inst.buyer(), inst.seller()] {
                let total: f64 = dist.masses().iter().sum();
                masses.check((total - 1.0).abs() <= 1e-12, || {
                    format!("N {n} eps {eps}: sum {total}")
                });
            }
            // heaviest atom first when walking away from the bulk
            let f = inst.buyer().masses();
            let mut g = inst.seller().masses().to_vec();
            g.reverse();
            for side in [f, g.as_slice()] {
                for k in 0..side.len() {
                    let rest: f64 = side[k + 1..].iter().sum();
                    dominance.check(side[k] > rest, || format!("N {n} eps {eps} atom {k}"));
                }
            }
            ratio.check(rep.ratio_holds, || {
                format!("N {n} eps {eps}: ratio {}", rep.ratio)
            });
            r_floor.check(rep.r_floor_holds, || {
                format!("N {n} eps {eps}: r {}", rep.r)
            });
        }
    }
    vec![masses, dominance, ratio, r_floor]
        .into_iter()
        .map(|t| t.result)
        .collect()
}
