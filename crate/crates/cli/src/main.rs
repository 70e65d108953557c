use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use iptree::Rational;
use iptree_cli::commands::{self, parse_horizons, resolve_cap};
use iptree_cli::doc::{load, ChainDoc, GambleDoc, Num, PlanDoc, TreeDoc};
use iptree_cli::error::CliError;

#[derive(Parser)]
#[command(name = "iptree", version, about = "Exact inference in imprecise probability trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower (or upper) predictive prevision of a gamble.
    Infer {
        tree: PathBuf,
        gamble: PathBuf,
        /// Situation to condition on; defaults to the root.
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        upper: bool,
        /// Rational arithmetic instead of f64.
        #[arg(long)]
        exact: bool,
        /// Also print an optimal selection as a JSON document.
        #[arg(long)]
        witness: bool,
    },
    /// Brute-force minimum over all extreme-point assignments.
    Oracle {
        tree: PathBuf,
        gamble: PathBuf,
        #[arg(long)]
        at: Option<String>,
        /// Maximum number of assignments, e.g. 4194304 or 2^22.
        #[arg(long)]
        cap: Option<String>,
        #[arg(long)]
        exact: bool,
    },
    /// Checks the weak law of large numbers bound for a commitment plan.
    Wlln {
        tree: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        exact: bool,
        /// Cross-check the lower prevision by enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        cap: Option<String>,
    },
    /// Prequential score of a plan along the realised path.
    Score {
        tree: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        realized: String,
        #[arg(long)]
        exact: bool,
    },
    /// Horizon gains of a plan, one line per horizon situation.
    Gains {
        tree: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Lower (or upper) prevision of a state gamble at time n.
    Markov {
        chain: PathBuf,
        gamble: PathBuf,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long)]
        upper: bool,
        #[arg(long)]
        exact: bool,
        /// Compare operator iteration with enumeration over these horizons.
        #[arg(long, value_name = "LIST")]
        bench: Option<String>,
        #[arg(long)]
        cap: Option<String>,
    },
    /// Scaling benchmark on a built-in two-state chain (CSV).
    Bench {
        #[arg(long, default_value = "1..14")]
        horizons: String,
        /// Time budget per enumeration.
        #[arg(long, default_value_t = 2000)]
        budget_ms: u64,
    },
    /// Quick end-to-end checks.
    Selfcheck,
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let out = match cli.command {
        Command::Infer { tree, gamble, at, upper, exact, witness } => {
            let (t, g) = (load::<TreeDoc>(&tree)?, load::<GambleDoc>(&gamble)?);
            if exact {
                commands::infer::<Rational>(&t, &g, at.as_deref(), upper, witness)?
            } else {
                commands::infer::<f64>(&t, &g, at.as_deref(), upper, witness)?
            }
        }
        Command::Oracle { tree, gamble, at, cap, exact } => {
            let (t, g) = (load::<TreeDoc>(&tree)?, load::<GambleDoc>(&gamble)?);
            let cap = resolve_cap(cap.as_deref())?;
            if exact {
                commands::oracle::<Rational>(&t, &g, at.as_deref(), &cap)?
            } else {
                commands::oracle::<f64>(&t, &g, at.as_deref(), &cap)?
            }
        }
        Command::Wlln { tree, plan, epsilon, exact, oracle, cap } => {
            let (t, p) = (load::<TreeDoc>(&tree)?, load::<PlanDoc>(&plan)?);
            let eps = Num::Text(epsilon);
            let cap = if oracle { Some(resolve_cap(cap.as_deref())?) } else { None };
            if exact {
                commands::wlln::<Rational>(&t, &p, &eps, cap.as_ref())?
            } else {
                commands::wlln::<f64>(&t, &p, &eps, cap.as_ref())?
            }
        }
        Command::Score { tree, plan, realized, exact } => {
            let (t, p) = (load::<TreeDoc>(&tree)?, load::<PlanDoc>(&plan)?);
            if exact {
                commands::score::<Rational>(&t, &p, &realized)?
            } else {
                commands::score::<f64>(&t, &p, &realized)?
            }
        }
        Command::Gains { tree, plan, exact } => {
            let (t, p) = (load::<TreeDoc>(&tree)?, load::<PlanDoc>(&plan)?);
            if exact {
                commands::gains::<Rational>(&t, &p)?
            } else {
                commands::gains::<f64>(&t, &p)?
            }
        }
        Command::Markov { chain, gamble, n, upper, exact, bench, cap } => {
            let (c, g) = (load::<ChainDoc>(&chain)?, load::<GambleDoc>(&gamble)?);
            match bench {
                Some(list) => {
                    let horizons = parse_horizons(&list)?;
                    let cap = resolve_cap(cap.as_deref())?;
                    if exact {
                        commands::markov_bench::<Rational>(&c, &g, &horizons, &cap)?
                    } else {
                        commands::markov_bench::<f64>(&c, &g, &horizons, &cap)?
                    }
                }
                None => {
                    if n == 0 {
                        return Err(CliError::Parse("-n must be at least 1".into()));
                    }
                    if exact {
                        commands::markov::<Rational>(&c, &g, n, upper)?
                    } else {
                        commands::markov::<f64>(&c, &g, n, upper)?
                    }
                }
            }
        }
        Command::Bench { horizons, budget_ms } => {
            commands::bench(&parse_horizons(&horizons)?, Duration::from_millis(budget_ms))?
        }
        Command::Selfcheck => return Ok(commands::selfcheck()),
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
