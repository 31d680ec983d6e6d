//! `argagree`: extensions, agreement degrees, expansion checks and synthetic
//! experiments for scenarios in the plain-text fact format.

mod commands;
mod report;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use argagree::agreement::{DegreeKind, SimilarityKind};
use argagree::dynamics::PrincipleKind;
use argagree::SemanticsKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "argagree", version, about = "Degrees of agreement in argumentation scenarios")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the extensions of a framework.
    Solve {
        #[arg(long = "af", value_name = "FILE")]
        file: PathBuf,
        #[arg(long, value_parser = parse_semantics)]
        semantics: SemanticsKind,
    },
    /// Print degrees of agreement with a maximizing topic subset.
    Degrees {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        #[arg(long, value_parser = parse_similarity, default_value = "h")]
        similarity: SimilarityKind,
        /// min, mean or med; all three when omitted.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<DegreeKind>,
    },
    /// Two-agent satisfaction for one pair or the whole matrix.
    Sat {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        #[arg(long, value_name = "I,J", value_parser = parse_pair, required_unless_present = "matrix", conflicts_with = "matrix")]
        agents: Option<(usize, usize)>,
        #[arg(long)]
        matrix: bool,
        #[arg(long, value_parser = parse_similarity, default_value = "h")]
        similarity: SimilarityKind,
    },
    /// Signed impact of a value on the three degrees of agreement.
    Impact {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        #[arg(long)]
        value: String,
        #[arg(long, value_parser = parse_similarity, default_value = "h")]
        similarity: SimilarityKind,
    },
    /// Decide whether the second file expands the first.
    CheckExpansion {
        #[command(flatten)]
        pair: Pair,
        /// Require a normal expansion of the whole scenario.
        #[arg(long)]
        normal: bool,
    },
    /// Check a relaxed-monotony principle per agent.
    CheckPrinciple {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_parser = parse_principle)]
        principle: PrincipleKind,
        /// Semantics for files that declare none.
        #[arg(long, value_parser = parse_semantics)]
        semantics: Option<SemanticsKind>,
    },
    /// Repair the expansion's extensions so the principle holds, and compare
    /// agreement before and after.
    Enforce {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_parser = parse_principle)]
        principle: PrincipleKind,
        #[arg(long, value_parser = parse_similarity, default_value = "h")]
        similarity: SimilarityKind,
    },
    /// Run a synthetic experiment and write its CSV.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long, value_name = "FILE")]
    pub before: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub after: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunOptions {
    #[arg(long, default_value_t = argagree::synth::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_semantics, default_value = "preferred")]
    pub semantics: SemanticsKind,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Agreement deltas after expansions of size 1..=max-expansion.
    Delta {
        #[command(flatten)]
        run: RunOptions,
        /// Add each new argument to the topic with the topic probability.
        #[arg(long)]
        expanding_topic: bool,
        #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
        max_expansion: u64,
    },
    /// Impact of a relevant value on frameworks of size min-size..=max-size.
    Impact {
        #[command(flatten)]
        run: RunOptions,
        /// Draw the topic from all arguments instead of the first five.
        #[arg(long)]
        proportional_topic: bool,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        min_size: u64,
        #[arg(long, default_value_t = 20)]
        max_size: u64,
    },
}

fn parse_semantics(s: &str) -> Result<SemanticsKind, String> {
    s.parse().map_err(|_| "expected complete, preferred, grounded, naive or stage".to_string())
}

fn parse_similarity(s: &str) -> Result<SimilarityKind, String> {
    s.parse().map_err(|_| "expected h, i or c".to_string())
}

fn parse_kind(s: &str) -> Result<DegreeKind, String> {
    s.parse().map_err(|_| "expected min, mean or med".to_string())
}

fn parse_principle(s: &str) -> Result<PrincipleKind, String> {
    s.parse().map_err(|_| "expected cm or srm".to_string())
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected two agent indices I,J")?;
    let index = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not an agent index"));
    Ok((index(i)?, index(j)?))
}

fn paint_error(code: &str) -> String {
    let color = std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty())
        && std::io::stderr().is_terminal();
    if color {
        format!("\x1b[1;31merror[{code}]\x1b[0m")
    } else {
        format!("error[{code}]")
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let body = rendered.strip_prefix("error: ").unwrap_or(&rendered);
            eprint!("{}: {body}", paint_error("E_USAGE"));
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", paint_error(e.code()));
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                _ => 1,
            })
        }
    }
}
