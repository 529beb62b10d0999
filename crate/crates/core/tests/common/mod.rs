//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's evaluators: bilateral quantities come from
//! enumerating value pairs, and double-auction optima from enumerating every
//! feasible allocation.

#![allow(dead_code)]

use fixprice::{Distribution, Kind};

pub type Points = Vec<(f64, f64)>;

/// Atoms of a discrete law, or a fine midpoint discretisation of a density.
pub fn atoms(d: &Distribution, cells_per_piece: usize) -> Points {
    match d.kind() {
        Kind::Discrete => d.points(),
        Kind::PiecewiseUniform => {
            let k = d.knots();
            let mut out = Vec::new();
            for (i, &m) in d.masses().iter().enumerate() {
                let h = (k[i + 1] - k[i]) / cells_per_piece as f64;
                for j in 0..cells_per_piece {
                    out.push((k[i] + (j as f64 + 0.5) * h, m / cells_per_piece as f64));
                }
            }
            out
        }
    }
}

pub fn pair_opt(buyer: &Points, seller: &Points) -> f64 {
    let mut s = 0.0;
    for &(v, fm) in buyer {
        for &(w, gm) in seller {
            if v > w {
                s += fm * gm * (v - w);
            }
        }
    }
    s
}

pub fn pair_gft(buyer: &Points, seller: &Points, p: f64) -> f64 {
    let mut s = 0.0;
    for &(v, fm) in buyer {
        for &(w, gm) in seller {
            if w <= p && p <= v {
                s += fm * gm * (v - w);
            }
        }
    }
    s
}

pub fn pair_r(buyer: &Points, seller: &Points) -> f64 {
    let mut s = 0.0;
    for &(v, fm) in buyer {
        for &(w, gm) in seller {
            if v >= w {
                s += fm * gm;
            }
        }
    }
    s
}

/// Missed gain strictly left and strictly right of `p`.
pub fn pair_missed(buyer: &Points, seller: &Points, p: f64) -> (f64, f64) {
    let (mut left, mut right) = (0.0, 0.0);
    for &(v, fm) in buyer {
        for &(w, gm) in seller {
            if w <= v && v < p {
                left += fm * gm * (v - w);
            }
            if p < w && w <= v {
                right += fm * gm * (v - w);
            }
        }
    }
    (left, right)
}

/// Max of `Σ v_i X_i + Σ w_j (Y_j - 1)` over all `X, Y` with `ΣX + ΣY = m`.
pub fn exhaustive_allocation(v: &[f64], w: &[f64]) -> f64 {
    let (n, m) = (v.len(), w.len());
    let mut best = f64::NEG_INFINITY;
    for xs in 0u32..(1 << n) {
        for ys in 0u32..(1 << m) {
            if (xs.count_ones() + ys.count_ones()) as usize != m {
                continue;
            }
            let mut g = 0.0;
            for (i, vi) in v.iter().enumerate() {
                if xs >> i & 1 == 1 {
                    g += vi;
                }
            }
            for (j, wj) in w.iter().enumerate() {
                if ys >> j & 1 == 0 {
                    g -= wj;
                }
            }
            best = best.max(g);
        }
    }
    best
}

/// Small splitmix-style generator so test corpora do not depend on the library's RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.next_u64() % k as u64) as usize
    }
}

/// Random discrete law with up to `max_atoms` atoms on the grid `{0, 0.5, ..., 10}`.
pub fn random_discrete(rng: &mut Lcg, max_atoms: usize) -> Distribution {
    let k = 1 + rng.below(max_atoms);
    let mut slots: Vec<usize> = Vec::new();
    while slots.len() < k {
        let s = rng.below(21);
        if !slots.contains(&s) {
            slots.push(s);
        }
    }
    slots.sort_unstable();
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.unit()).collect();
    let total: f64 = raw.iter().sum();
    let points: Vec<(f64, f64)> = slots
        .iter()
        .map(|&s| s as f64 * 0.5)
        .zip(raw.iter().map(|m| m / total))
        .collect();
    Distribution::discrete(&points).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
