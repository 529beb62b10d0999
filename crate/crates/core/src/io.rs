//! JSON instance files.
//!
//! Distribution literals:
//!
//! ```json
//! {"type": "discrete", "points": [[1.0, 0.5], [3.0, 0.5]]}
//! {"type": "piecewise_uniform", "breakpoints": [0, 1, 2], "masses": [0.25, 0.75]}
//! {"type": "uniform", "lo": 0, "hi": 1}
//! ```
//!
//! A bilateral file is `{"buyer": .., "seller": ..}`; a double-auction file adds
//! `"n"` and `"m"`. Syntax errors carry line and column, semantic errors the
//! field path. Masses within [`INGEST_MASS_TOLERANCE`] of one are renormalised.

use serde::{Deserialize, Serialize};

use crate::bilateral::BilateralInstance;
use crate::dist::{Distribution, Kind};
use crate::double_auction::DoubleAuctionInstance;
use crate::error::{Error, Result};

/// Largest deviation of a mass sum from one accepted in a file.
pub const INGEST_MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionLiteral {
    Discrete {
        points: Vec<(f64, f64)>,
    },
    PiecewiseUniform {
        breakpoints: Vec<f64>,
        masses: Vec<f64>,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilateralLiteral {
    pub buyer: DistributionLiteral,
    pub seller: DistributionLiteral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleAuctionLiteral {
    pub n: u64,
    pub m: u64,
    pub buyer: DistributionLiteral,
    pub seller: DistributionLiteral,
}

fn syntax<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::InvalidDistribution(msg) | Error::Domain(msg) | Error::Parse(msg) => {
            Error::Parse(format!("{path}: {msg}"))
        }
        other => other,
    }
}

fn renormalised(masses: &[f64], path: &str) -> Result<Vec<f64>> {
    let total: f64 = masses.iter().sum();
    if !total.is_finite() || (total - 1.0).abs() > INGEST_MASS_TOLERANCE {
        return Err(Error::Parse(format!(
            "{path}: masses sum to {total}, expected 1"
        )));
    }
    Ok(masses.iter().map(|m| m / total).collect())
}

impl DistributionLiteral {
    /// Builds the distribution; `path` prefixes error messages.
    pub fn build(&self, path: &str) -> Result<Distribution> {
        match self {
            DistributionLiteral::Discrete { points } => {
                let masses: Vec<f64> = points.iter().map(|p| p.1).collect();
                let masses = renormalised(&masses, &format!("{path}.points"))?;
                let points: Vec<(f64, f64)> = points.iter().map(|p| p.0).zip(masses).collect();
                Distribution::discrete(&points).map_err(at(&format!("{path}.points")))
            }
            DistributionLiteral::PiecewiseUniform {
                breakpoints,
                masses,
            } => {
                let masses = renormalised(masses, &format!("{path}.masses"))?;
                Distribution::piecewise_uniform(breakpoints, &masses).map_err(at(path))
            }
            DistributionLiteral::Uniform { lo, hi } => {
                Distribution::uniform(*lo, *hi).map_err(at(path))
            }
        }
    }

    /// Literal describing `dist` (always the discrete or piecewise form).
    pub fn from_distribution(dist: &Distribution) -> Self {
        match dist.kind() {
            Kind::Discrete => DistributionLiteral::Discrete {
                points: dist.points(),
            },
            Kind::PiecewiseUniform => DistributionLiteral::PiecewiseUniform {
                breakpoints: dist.knots().to_vec(),
                masses: dist.masses().to_vec(),
            },
        }
    }
}

pub fn parse_distribution(text: &str) -> Result<Distribution> {
    syntax::<DistributionLiteral>(text)?.build("$")
}

pub fn parse_bilateral(text: &str) -> Result<BilateralInstance> {
    let lit: BilateralLiteral = syntax(text)?;
    Ok(BilateralInstance::new(
        lit.buyer.build("buyer")?,
        lit.seller.build("seller")?,
    ))
}

pub fn parse_double_auction(text: &str) -> Result<DoubleAuctionInstance> {
    let lit: DoubleAuctionLiteral = syntax(text)?;
    let count = |v: u64, field: &str| -> Result<usize> {
        if v == 0 {
            return Err(Error::Parse(format!("{field}: must be >= 1")));
        }
        usize::try_from(v).map_err(|_| Error::Parse(format!("{field}: {v} is too large")))
    };
    let n = count(lit.n, "n")?;
    let m = count(lit.m, "m")?;
    DoubleAuctionInstance::new(n, m, lit.buyer.build("buyer")?, lit.seller.build("seller")?)
}

pub fn distribution_to_json(dist: &Distribution) -> String {
    serde_json::to_string(&DistributionLiteral::from_distribution(dist))
        .expect("literals contain only numbers and strings")
}

pub fn bilateral_to_json(inst: &BilateralInstance) -> String {
    let lit = BilateralLiteral {
        buyer: DistributionLiteral::from_distribution(inst.buyer()),
        seller: DistributionLiteral::from_distribution(inst.seller()),
    };
    serde_json::to_string(&lit).expect("literals contain only numbers and strings")
}

pub fn double_auction_to_json(inst: &DoubleAuctionInstance) -> String {
    let lit = DoubleAuctionLiteral {
        n: inst.n as u64,
        m: inst.m as u64,
        buyer: DistributionLiteral::from_distribution(&inst.buyer),
        seller: DistributionLiteral::from_distribution(&inst.seller),
    };
    serde_json::to_string(&lit).expect("literals contain only numbers and strings")
}
