//! `degbound`: finite-n probability bounds for random graphs with given degrees.
//!
//! Exit codes: 0 success; 1 other failure (including sweep violations);
//! 2 unreadable or invalid problem file, or invalid arguments; 3 bound
//! inapplicable on every side; 4 node budget or size cap exceeded; 5 example
//! terms nonpositive.

mod commands;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degbound::families::{Family, FamilyParams};
use degbound::oracle::census::{Arity, Direction};
use degbound::oracle::mcmc::McmcConfig;
use degbound::oracle::DEFAULT_NODE_BUDGET;
use degbound::problem::Mode;
use degbound::{Edge, OrderPolicy};

use commands::{CliError, Context, EventArg, Outcome, Suite, EXIT_OTHER};

#[derive(Parser)]
#[command(
    name = "degbound",
    version,
    about = "Bounds on subgraph probabilities in random graphs with given degrees"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Problem kind; inferred from the file's directives when omitted.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Edge processing order: given, random, or best-of:N.
    #[arg(long, global = true, default_value = "given", value_parser = parse_order)]
    order: OrderKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Search-node budget for exact enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug)]
enum OrderKind {
    Given,
    Random,
    BestOf(usize),
}

fn parse_order(s: &str) -> Result<OrderKind, String> {
    match s {
        "given" => Ok(OrderKind::Given),
        "random" => Ok(OrderKind::Random),
        _ => match s.strip_prefix("best-of:").map(str::parse::<usize>) {
            Some(Ok(n)) if n > 0 => Ok(OrderKind::BestOf(n)),
            _ => Err(format!(
                "expected given, random or best-of:N with N ≥ 1, found `{s}`"
            )),
        },
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EventOpt {
    Contain,
    Avoid,
}

impl From<EventOpt> for EventArg {
    fn from(e: EventOpt) -> Self {
        match e {
            EventOpt::Contain => EventArg::Contain,
            EventOpt::Avoid => EventArg::Avoid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionOpt {
    Forward,
    Backward,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteOpt {
    Default,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Theorem bounds from a problem file.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Exact probability or class ratio by enumeration.
    Exact {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "contain")]
        event: EventOpt,
        /// Number of leading forbid lines kept as conditioning in avoid mode.
        #[arg(long, default_value_t = 0)]
        l0: usize,
        /// Report |class with UV| / |class without UV| instead.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        ratio: Option<Vec<usize>>,
    },
    /// Per-graph switching counts for one edge.
    Census {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=3))]
        arity: u32,
        #[arg(long, value_enum, default_value = "both")]
        direction: DirectionOpt,
        /// Defaults to the first `require:` line.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Option<Vec<usize>>,
    },
    /// Exhaustive sweeps of every bound and switching claim on small classes.
    Verify {
        #[arg(long, value_enum, default_value = "default")]
        suite: SuiteOpt,
        #[arg(long)]
        sequential: bool,
    },
    /// Switch-chain estimate of the event probability.
    Sample {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "contain")]
        event: EventOpt,
        #[arg(long, default_value_t = 0)]
        l0: usize,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 10_000)]
        burn_in: u64,
        #[arg(long, default_value_t = 100)]
        batches: u64,
    },
    /// Quantities behind the simplified bounds.
    Diagnose {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "contain")]
        event: EventOpt,
        #[arg(long, default_value_t = 0)]
        l0: usize,
    },
    /// Worked example families at a chosen n.
    Examples {
        /// ex1, ex2, ex3, ex4 or ex5.
        #[arg(value_parser = parse_family)]
        name: Family,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Regularity of the forbidden graph for ex2.
        #[arg(long, default_value_t = 2)]
        r: u64,
        /// ex5: put the cycle on two typical left vertices instead of the hub.
        #[arg(long)]
        non_hub: bool,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// P(UV ∈ G) given `require:` present and `forbid:` absent.
    Single { u: usize, v: usize, file: PathBuf },
    /// P(X ⊆ G) with X the `require:` lines and L the `forbid:` lines.
    Subgraph { file: PathBuf },
    /// P(Y ∩ G = ∅) with Y the `forbid:` lines after the first --l0.
    Forbidden {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        l0: usize,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown example `{s}`; expected ex1..ex5"))
}

fn pair(v: Option<Vec<usize>>) -> Option<Edge> {
    v.map(|p| (p[0], p[1]))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let order = match g.order {
        OrderKind::Given => OrderPolicy::Given,
        OrderKind::Random => OrderPolicy::Random { seed: g.seed },
        OrderKind::BestOf(samples) => OrderPolicy::BestOf {
            samples,
            seed: g.seed,
        },
    };
    let ctx = Context {
        command: std::env::args().collect(),
        mode: g.mode.map(|m| match m {
            ModeArg::Generic => Mode::Generic,
            ModeArg::Bipartite => Mode::Bipartite,
        }),
        order,
        seed: g.seed,
        node_budget: g.node_budget,
    };
    match cli.command {
        Command::Bound(BoundCmd::Single { u, v, file }) => {
            commands::bound_single(&ctx, &file, (u, v))
        }
        Command::Bound(BoundCmd::Subgraph { file }) => commands::bound_subgraph(&ctx, &file),
        Command::Bound(BoundCmd::Forbidden { file, l0 }) => {
            commands::bound_forbidden(&ctx, &file, l0)
        }
        Command::Exact {
            file,
            event,
            l0,
            ratio,
        } => commands::exact(&ctx, &file, event.into(), l0, pair(ratio)),
        Command::Census {
            file,
            arity,
            direction,
            edge,
        } => {
            let arity = Arity::from_number(arity).expect("range-checked by clap");
            let direction = match direction {
                DirectionOpt::Forward => Direction::Forward,
                DirectionOpt::Backward => Direction::Backward,
                DirectionOpt::Both => Direction::Both,
            };
            commands::census(&ctx, &file, arity, direction, pair(edge))
        }
        Command::Verify { suite, sequential } => {
            let suite = match suite {
                SuiteOpt::Default => Suite::Default,
                SuiteOpt::Full => Suite::Full,
            };
            commands::verify(&ctx, suite, sequential)
        }
        Command::Sample {
            file,
            event,
            l0,
            steps,
            burn_in,
            batches,
        } => {
            let cfg = McmcConfig {
                steps,
                burn_in,
                seed: ctx.seed,
                batches,
            };
            commands::sample(&ctx, &file, event.into(), l0, cfg)
        }
        Command::Diagnose { file, event, l0 } => commands::diagnose(&ctx, &file, event.into(), l0),
        Command::Examples {
            name,
            n,
            r,
            non_hub,
        } => commands::examples(
            &ctx,
            name,
            FamilyParams {
                n,
                r,
                hub: !non_hub,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let out = cli.global.out.clone();
    match run(cli) {
        Ok(Outcome { report, code }) => {
            let body = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            let written = match &out {
                Some(path) => std::fs::write(path, body.as_bytes()),
                None => std::io::stdout().lock().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(EXIT_OTHER);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
