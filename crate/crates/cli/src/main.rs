//! `bolzano`: classify, compare and approximate infinite number expressions,
//! run the completeness procedures, and check point sets for continuity.
//!
//! Exit codes: 0 success, 2 unreadable input, 3 failed precondition,
//! 4 exhausted budget, 1 anything else. Nothing is written to stdout when a
//! command fails.

mod commands;
mod input;
mod report;
mod topo_format;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use bolzano_core::Error;
use clap::{Parser, Subcommand, ValueEnum};

use commands::RunConfig;
use input::InputError;
use report::Render;

#[derive(Parser, Debug)]
#[command(name = "bolzano", version, about = "Exact measurable numbers from infinite number expressions")]
struct Cli {
    /// Precision: brackets are 1/q wide and comparisons search down to 1/q.
    #[arg(long, global = true, default_value = "1e6", value_parser = input::count)]
    q: u64,
    /// Terms scanned when no certificate applies.
    #[arg(long, global = true, default_value = "1e4", value_parser = input::count)]
    fuel: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include the bisection trace in `sup` and `ivt` reports.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify expressions and list their measuring fractions at q = 1, 10, 100, ...
    Classify {
        /// Expressions or preset names (A, B, C, D); put `--` before one starting with `-`.
        exprs: Vec<String>,
        /// Files with one expression per line; `#` starts a comment line.
        #[arg(short, long)]
        file: Vec<PathBuf>,
    },
    /// Order two measurable numbers up to an infinitely small difference.
    Compare {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Measuring fraction and decimal value at precision q.
    Approx {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Greatest boundary of `g(x) < 0` on [U, V] (g as text in x or coefficients, leading first).
    Sup {
        #[arg(allow_hyphen_values = true)]
        property: String,
        #[arg(allow_hyphen_values = true)]
        lower: String,
        #[arg(allow_hyphen_values = true)]
        upper: String,
        /// Read the property as `x < EXPR` instead.
        #[arg(long)]
        less_than: bool,
    },
    /// A point of [alpha, beta] where f meets phi, given f < phi at alpha and f > phi at beta.
    Ivt {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// What lies between an increasing and a decreasing variable quantity.
    Between {
        /// Preset pair: bounded, vanishing or attained.
        pair: Option<String>,
        /// Use the rationals approaching this number from both sides instead.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "pair")]
        neighbour: Option<String>,
        /// With --neighbour: the lower quantity reaches the number itself.
        #[arg(long, requires = "neighbour")]
        attained: bool,
    },
    /// Check a point set for a neighbour at every small distance from every point.
    Topo {
        /// Preset name, path to a JSON description, or the JSON itself.
        set: String,
    },
}

fn run(cli: &Cli) -> Result<(serde_json::Value, String)> {
    let cfg = RunConfig {
        q: cli.q,
        fuel: cli.fuel,
        trace: cli.trace,
    };
    fn out<R: Render>(r: R) -> Result<(serde_json::Value, String)> {
        Ok((serde_json::to_value(&r)?, r.text()))
    }
    match &cli.command {
        Command::Classify { exprs, file } => out(commands::classify_all(&input::expression_texts(exprs, file)?, &cfg)?),
        Command::Compare { left, right } => out(commands::compare_pair(left, right, &cfg)?),
        Command::Approx { expr } => out(commands::approx(expr, &cfg)?),
        Command::Sup {
            property,
            lower,
            upper,
            less_than,
        } => out(commands::sup(property, lower, upper, *less_than, &cfg)?),
        Command::Ivt { f, alpha, beta, phi } => {
            let phi = phi.clone().unwrap_or_else(commands::zero_polynomial);
            out(commands::ivt(f, &phi, alpha, beta, &cfg)?)
        }
        Command::Between {
            pair,
            neighbour,
            attained,
        } => out(commands::between(pair.as_deref(), neighbour.as_deref(), *attained, &cfg)?),
        Command::Topo { set } => out(commands::topo(set)?),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::InvalidLiteral(_)) => 2,
        Some(Error::BudgetExhausted(_)) => 4,
        Some(_) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((json, text)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("serializable")),
                Format::Text => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Json => eprintln!("{}", serde_json::json!({ "error": format!("{e:#}"), "exitCode": code })),
                Format::Text => eprintln!("error: {e:#}"),
            }
            ExitCode::from(code)
        }
    }
}
