//! The `plumb` command line: argument parsing, report assembly and exit
//! codes, kept in a library so tests can drive it in process.

pub mod args;
mod commands;
mod error;
mod input;
pub mod report;

use std::time::Instant;

use plumbing_core::corpus;
use plumbing_core::SearchOptions;
use serde_json::Value;

pub use args::Cli;
use args::Command;
use commands::Context;
pub use error::CliError;

/// Exit code for a negative verdict of a predicate command.
pub const EXIT_NEGATIVE: i32 = 1;
/// Exit code for errors.
pub const EXIT_ERROR: i32 = 2;

/// What to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

pub fn search_options(global: &args::GlobalArgs) -> SearchOptions {
    let mut opts = SearchOptions::default();
    if let Some(mode) = global.mode {
        opts = opts.with_mode(mode.into());
    }
    if let Some(limit) = global.max_box {
        opts.scan_limit = limit;
    }
    opts
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Context { global: &cli.global, opts: search_options(&cli.global) };
    let start = Instant::now();
    let report = match &cli.command {
        Command::Corpus { name } => return corpus_listing(&cli.global, name.as_deref()),
        Command::Validate { graph } => commands::validate(&ctx, graph)?,
        Command::Invariants { graph } => commands::invariants(&ctx, graph)?,
        Command::Classify { graph } => commands::classify_cmd(&ctx, graph)?,
        Command::Pg { graph, sub } => commands::pg(&ctx, graph, sub)?,
        Command::H1 { bundle, hypothesis } => commands::h1(&ctx, bundle, *hypothesis)?,
        Command::H0 { bundle } => commands::h0(&ctx, bundle)?,
        Command::Dominant { bundle } => commands::dominant(&ctx, bundle)?,
        Command::Eca { bundle } => commands::eca(&ctx, bundle)?,
        Command::Rational { graph, cycle, sub } => commands::rational(&ctx, graph, cycle, sub)?,
        Command::Semigroup { graph, chern, sub } => commands::semigroup(&ctx, graph, chern, sub)?,
        Command::Natural { graph, chern, sub } => commands::natural(&ctx, graph, chern, sub)?,
        Command::EllipticLemma { graph, vertex, n_max, sub } => {
            commands::elliptic_lemma(&ctx, graph, vertex, *n_max, sub)?
        }
    };
    let elapsed = (!cli.global.no_timing).then(|| start.elapsed());
    let doc = report.to_value(elapsed);
    Ok(Output { stdout: render(&cli.global, &doc), code: if report.negative { EXIT_NEGATIVE } else { 0 } })
}

fn render(global: &args::GlobalArgs, doc: &Value) -> String {
    if global.text {
        report::render_text(doc)
    } else {
        report::render_json(doc)
    }
}

fn corpus_listing(global: &args::GlobalArgs, name: Option<&str>) -> Result<Output, CliError> {
    let stdout = match name {
        Some(name) => corpus::source(name).ok_or_else(|| {
            CliError::input(format!("unknown corpus graph {name:?}; known: {}", corpus::NAMES.join(", ")))
        })?,
        None if global.text => corpus::NAMES.iter().map(|n| format!("{n}\n")).collect(),
        None => report::render_json(&Value::from(corpus::NAMES.to_vec())),
    };
    Ok(Output { stdout, code: 0 })
}
