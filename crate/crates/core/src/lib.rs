//! Fixed-price mechanisms for bilateral trade and double auctions.
//!
//! * [`dist`]: discrete and piecewise-uniform valuation distributions.
//! * [`bilateral`]: exact gain-from-trade evaluators and pricing rules with
//!   approximation certificates.
//! * [`double_auction`]: the balanced fixed-price double auction, its welfare
//!   benchmark and seeded Monte Carlo diagnostics.
//! * [`instances`]: random corpora and the geometric lower-bound family.
//! * [`io`], [`report`], [`cli`]: file formats and the command-line front end.

pub mod balance;
pub mod bilateral;
pub mod cli;
pub mod dist;
pub mod double_auction;
pub mod error;
pub mod instances;
pub mod io;
mod quad;
pub mod report;
pub mod rng;
pub mod verify;

pub use bilateral::{
    BilateralInstance, CaseLabel, GftDecomposition, PriceCertificate, PricingRule,
};
pub use dist::{trade_probability, Distribution, Kind, Money, Probability};
pub use double_auction::{DoubleAuctionInstance, Outcome, Profile};
pub use error::{Error, Result};
pub use rng::RngStream;
