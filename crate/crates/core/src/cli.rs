//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 unreadable or malformed
//! input, 3 a precondition of the requested computation does not hold.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bilateral::{BilateralInstance, PriceCertificate};
use crate::dist::{Distribution, Kind};
use crate::double_auction::simulate;
use crate::error::Error;
use crate::instances::{lower_bound_report, LowerBoundSpec};
use crate::io::{parse_bilateral, parse_double_auction};
use crate::report::{Format, Report};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fixprice",
    version,
    about = "Fixed-price mechanisms for bilateral trade and double auctions"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    pub format: OutputFormat,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Balanced,
    Median,
    Logrule,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Bilateral,
    Da,
    Instances,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a price and its approximation certificate.
    Price(PriceArgs),
    /// Evaluate OPT, GFT and the missed-gain split at a price.
    Evaluate(EvaluateArgs),
    /// Monte Carlo run of the balanced double auction.
    Simulate(SimulateArgs),
    /// Report on the geometric lower-bound family.
    Lowerbound(LowerboundArgs),
    /// Run seeded invariant sweeps.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub rule: Rule,
    /// Spread every atom uniformly over this width before pricing.
    #[arg(long)]
    pub smoothing_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, conflicts_with = "rule", required_unless_present = "rule")]
    pub price: Option<f64>,
    #[arg(long, value_enum)]
    pub rule: Option<Rule>,
    #[arg(long)]
    pub smoothing_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub replicates: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct LowerboundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidDistribution(_) => EXIT_INPUT,
            _ => EXIT_PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

/// Parses `args` (including the program name) and runs the command. Diagnostics go
/// to `err`; reports go to `out` unless `--out` names a file.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let format = match cli.format {
                OutputFormat::Csv => Format::Csv,
                OutputFormat::Json => Format::Json,
            };
            let written = match &cli.out {
                Some(path) => fs::File::create(path).and_then(|mut f| report.write(format, &mut f)),
                None => report.write(format, out),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    EXIT_INPUT
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<(Report, i32), Failure> {
    match &cli.command {
        Command::Price(a) => {
            let inst = load_bilateral(&a.instance, a.smoothing_width)?;
            let cert = certificate(&inst, a.rule)?;
            Ok((price_report(&cert), EXIT_OK))
        }
        Command::Evaluate(a) => {
            let inst = load_bilateral(&a.instance, a.smoothing_width)?;
            let price = match (a.price, a.rule) {
                (Some(p), _) => {
                    if !p.is_finite() {
                        return Err(Failure {
                            code: EXIT_PRECONDITION,
                            message: format!("price {p} is not finite"),
                        });
                    }
                    p
                }
                (None, Some(rule)) => certificate(&inst, rule)?.price,
                (None, None) => unreachable!("clap requires --price or --rule"),
            };
            Ok((evaluate_report(&inst, price), EXIT_OK))
        }
        Command::Simulate(a) => {
            let text = read(&a.instance)?;
            let inst = parse_double_auction(&text)?;
            let sim = simulate(&inst, a.replicates, a.seed)?;
            let conc = sim.concentration(a.epsilon)?;
            let d = sim.diagnostics(&inst);
            let mut r = Report::new();
            r.int("n", inst.n as u64)
                .int("m", inst.m as u64)
                .num("price", d.balanced.price)
                .num("expected_trades", d.balanced.expected_trades)
                .num("qbar_b", d.balanced.qbar_b)
                .num("qbar_s", d.balanced.qbar_s)
                .estimate("opt_estimate", &d.opt_estimate)
                .estimate("gft_estimate", &d.gft_estimate)
                .estimate("gft_ratio", &d.ratio_estimate)
                .estimate("q_b", &d.q_b)
                .estimate("q_s", &d.q_s)
                .estimate("trade_balance", &d.trade_balance)
                .num("p_b", d.p_b)
                .num("p_s", d.p_s)
                .num("optimum_bound", d.optimum_bound)
                .num("balanced_bound", d.balanced_bound)
                .num("epsilon", conc.epsilon)
                .estimate("event_frequency", &conc.event_frequency)
                .num("event_floor", conc.event_floor)
                .num("ratio_floor", conc.ratio_floor)
                .estimate("realized_frequency", &conc.realized_frequency)
                .text("violations", conc.violations.join("; "));
            Ok((r, EXIT_OK))
        }
        Command::Lowerbound(a) => {
            let spec = LowerBoundSpec::new(a.n, a.eps)?;
            let rep = lower_bound_report(&spec)?;
            let mut r = Report::new();
            r.with_table(
                &["p", "gft"],
                rep.table.iter().map(|&(p, g)| vec![p, g]).collect(),
            )
            .int("N", spec.n as u64)
            .num("epsilon", spec.epsilon)
            .num("r", rep.r)
            .num("opt", rep.opt)
            .num("best_price", rep.best_price)
            .num("best_gft", rep.best_gft)
            .num("ratio", rep.ratio)
            .num("quarter_n", rep.quarter_n)
            .num("r_floor", rep.r_floor)
            .flag("ratio_holds", rep.ratio_holds)
            .flag("r_floor_holds", rep.r_floor_holds);
            Ok((r, EXIT_OK))
        }
        Command::Verify(a) => {
            let suite = match a.suite {
                SuiteArg::Bilateral => Suite::Bilateral,
                SuiteArg::Da => Suite::DoubleAuction,
                SuiteArg::Instances => Suite::Instances,
                SuiteArg::All => Suite::All,
            };
            let results = run_suite(suite, a.seed);
            let mut r = Report::new();
            let mut code = EXIT_OK;
            for c in &results {
                let verdict = if c.passed() {
                    "pass".to_string()
                } else {
                    code = EXIT_CHECK_FAILED;
                    format!(
                        "fail ({}/{}): {}",
                        c.failures,
                        c.cases,
                        c.first_failure.clone().unwrap_or_default()
                    )
                };
                r.text(c.name, verdict);
            }
            Ok((r, code))
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))
}

fn load_bilateral(path: &PathBuf, smoothing: Option<f64>) -> Result<BilateralInstance, Failure> {
    let inst = parse_bilateral(&read(path)?)?;
    let Some(width) = smoothing else {
        return Ok(inst);
    };
    let smooth = |d: &Distribution| -> Result<Distribution, Failure> {
        match d.kind() {
            Kind::Discrete => Ok(d.smooth(width)?),
            Kind::PiecewiseUniform => Ok(d.clone()),
        }
    };
    Ok(BilateralInstance::new(
        smooth(inst.buyer())?,
        smooth(inst.seller())?,
    ))
}

fn certificate(inst: &BilateralInstance, rule: Rule) -> Result<PriceCertificate, Failure> {
    Ok(match rule {
        Rule::Balanced => inst.balanced_price(),
        Rule::Median => inst.median_price()?,
        Rule::Logrule => inst.log_rule_price()?,
        Rule::Best => inst.best_price_certificate(),
    })
}

fn price_report(c: &PriceCertificate) -> Report {
    let mut r = Report::new();
    r.num("price", c.price)
        .text("rule", c.rule.name())
        .num("q", c.q)
        .num("guaranteed_ratio", c.guaranteed_ratio)
        .num("r", c.r)
        .flag("no_beneficial_trade", c.no_beneficial_trade);
    if let Some(case) = c.case_label {
        r.text(
            "case",
            match case {
                crate::bilateral::CaseLabel::BuyerSide => "buyer_side",
                crate::bilateral::CaseLabel::SellerSide => "seller_side",
            },
        );
    }
    if let (Some(x), Some(y)) = (c.thresholds_x, c.thresholds_y) {
        r.num("threshold_x", x).num("threshold_y", y);
    }
    for (i, p) in c.candidates.iter().enumerate() {
        r.num(&format!("candidate_{}", i + 1), *p);
    }
    r
}

fn evaluate_report(inst: &BilateralInstance, price: f64) -> Report {
    let opt = inst.opt_gft();
    let d = inst.gft_decomposition(price);
    let ratio = if d.gft > 0.0 {
        opt / d.gft
    } else {
        f64::INFINITY
    };
    let mut r = Report::new();
    r.num("price", price)
        .num("opt", opt)
        .num("gft", d.gft)
        .num("mgftl", d.mgftl)
        .num("mgftr", d.mgftr)
        .num("gftl", d.gftl)
        .num("gftr", d.gftr)
        .num("r", inst.trade_probability())
        .num("q", inst.q_at(price))
        .num("ratio", ratio);
    r
}
