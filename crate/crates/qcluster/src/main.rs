use clap::{Parser, Subcommand};

use qcluster::cli::{self, Command, InputFormat};

#[derive(Parser)]
#[command(
    name = "qcluster",
    about = "Tree-based graph clustering and its property-verification harness",
    disable_help_subcommand = true
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cluster an instance: sl, maxsum, maxsum-exact, or qcluster-mdl.
    Cluster {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: String,
        /// Input format: edges ("i j w" lines) or matrix (comma-separated grid).
        #[arg(long, default_value = "edges")]
        format: String,
    },
    /// Emit a tree construction: mst or mct.
    Tree {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "edges")]
        format: String,
    },
    /// Run the property checkers for one function, or the full grid.
    Axioms {
        /// One of: sl, maxsum, mst-cuts, mct-cuts, constant, threshold.
        #[arg(long)]
        function: Option<String>,
        /// Run the five-function verdict grid instead.
        #[arg(long)]
        grid: bool,
        /// Trials for scale-invariance and consistency; the tree-consistency
        /// checks run trials/5.
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed; overrides QCLUSTER_SEED, which overrides the default.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exhaustive reference computations: minkcut, maxsum, pairwise-cuts,
    /// or queyranne.
    Oracle {
        #[arg(long)]
        which: String,
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "edges")]
        format: String,
        #[arg(long)]
        k: Option<usize>,
    },
}

fn build_command(cmd: Cmd) -> qcluster::Result<Command> {
    Ok(match cmd {
        Cmd::Cluster {
            algo,
            k,
            input,
            format,
        } => Command::Cluster {
            algo,
            k,
            input,
            format: InputFormat::parse(&format)?,
        },
        Cmd::Tree {
            kind,
            input,
            format,
        } => Command::Tree {
            kind,
            input,
            format: InputFormat::parse(&format)?,
        },
        Cmd::Axioms {
            function,
            grid,
            trials,
            seed,
        } => Command::Axioms {
            function,
            grid,
            trials: trials.unwrap_or(cli::DEFAULT_TRIALS),
            seed: cli::resolve_seed(seed)?,
        },
        Cmd::Oracle {
            which,
            input,
            format,
            k,
        } => Command::Oracle {
            which,
            input,
            format: InputFormat::parse(&format)?,
            k,
        },
    })
}

fn main() {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            // Help and version requests are successful output, not errors.
            if err.use_stderr() {
                eprint!("{err}");
                std::process::exit(cli::EXIT_INPUT);
            }
            print!("{err}");
            std::process::exit(cli::EXIT_OK);
        }
    };
    let command = match build_command(args.command) {
        Ok(command) => command,
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::EXIT_INPUT);
        }
    };
    match cli::execute(&command) {
        Ok((stdout, code)) => {
            println!("{stdout}");
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::EXIT_INPUT);
        }
    }
}
