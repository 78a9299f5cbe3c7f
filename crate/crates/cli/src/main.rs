//! `flamekit`: analyze rooted digraphs, check flames and large edge sets,
//! build large flames, and run verification sweeps.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use report::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "flamekit", version, about)]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-vertex connectivity, largest linked sets and acyclicity.
    Analyze {
        graph: PathBuf,
        /// Also print a Graphviz DOT dump.
        #[arg(long)]
        dot: bool,
    },
    /// Test an edge set for one property.
    #[command(group(ArgGroup::new("property").required(true).args(["flame", "large", "g_member"])))]
    Check {
        graph: PathBuf,
        edge_set: PathBuf,
        #[arg(long)]
        flame: bool,
        #[arg(long)]
        large: bool,
        /// Membership in the direct sum of the per-vertex gammoids.
        #[arg(long)]
        g_member: bool,
    },
    /// Build a large flame of an acyclic digraph.
    Build {
        graph: PathBuf,
        /// Flame to extend (defaults to the empty set).
        #[arg(long, value_name = "EDGE_SET")]
        extend: Option<PathBuf>,
        /// Include the per-vertex construction steps.
        #[arg(long)]
        trace: bool,
    },
    /// Run a property suite over enumerated or random instances.
    Verify {
        #[arg(long, value_parser = commands::parse_suite)]
        suite: flamekit::verify::Suite,
        /// Comma-separated `n=`, `m=`, `p=` bounds.
        #[arg(long, value_parser = commands::parse_bounds)]
        bounds: Option<commands::Bounds>,
        /// Number of random instances instead of full enumeration.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Look for counterexamples to an open question.
    Search {
        #[arg(long, value_parser = ["maximal-flames", "flame-extension-cyclic"])]
        question: String,
        #[arg(long, value_parser = commands::parse_bounds)]
        bounds: Option<commands::Bounds>,
        /// Append the findings report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut report = Report::start(args);
    let outcome = match &cli.command {
        Command::Analyze { graph, dot } => commands::analyze(&mut report, graph, *dot),
        Command::Check {
            graph,
            edge_set,
            flame,
            large,
            ..
        } => {
            let property = if *flame {
                commands::Property::Flame
            } else if *large {
                commands::Property::Large
            } else {
                commands::Property::GMember
            };
            commands::check(&mut report, graph, edge_set, property)
        }
        Command::Build { graph, extend, trace } => {
            commands::build(&mut report, graph, extend.as_deref(), *trace)
        }
        Command::Verify {
            suite,
            bounds,
            random,
            seed,
        } => commands::verify(&mut report, *suite, bounds.clone(), *random, *seed),
        Command::Search {
            question,
            bounds,
            out,
        } => commands::search(&mut report, question, bounds.clone(), out.as_deref()),
    };
    match outcome {
        Ok(holds) => {
            report.print(cli.json);
            if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
