use std::path::PathBuf;
use std::process::ExitCode;

use bellforge_cli::commands::{
    cmd_bell, cmd_dso_find, cmd_verify, BellArgs, DsoFindArgs, Functional, PatternKind, StateSource,
};
use bellforge_cli::report::RunReport;
use bellforge_cli::{exit, CliError};
use bellforge_core::ObservableClass;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bellforge",
    version,
    about = "Werner-state identity checks, Bell/CHSH see-saw runs and extension searches"
)]
struct Cli {
    /// Print only the JSON report.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the operator identities for local dimension d.
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Maximize a Bell functional over observables by see-saw.
    Bell {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum)]
        functional: FunctionalArg,
        /// werner, singlet or file:PATH
        #[arg(long, default_value = "werner")]
        state: StateSource,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_sweeps: usize,
        #[arg(long, value_enum, default_value_t = ObservablesArg::Bounded)]
        observables: ObservablesArg,
    },
    /// Search for a tripartite operator with prescribed two-body marginals.
    DsoFind {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value = "werner")]
        state: StateSource,
        #[arg(long, value_enum, default_value_t = PatternArg::Sym3)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Write the best candidate in the matrix text format.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalArg {
    Original,
    Chsh,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObservablesArg {
    /// Any Hermitian observable with operator norm ≤ 1.
    Bounded,
    /// Traceless ±1 qubit observables (d = 2 only).
    Spin,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    Sym3,
    Right2,
}

fn configure_threads(quiet: bool) {
    let Ok(raw) = std::env::var("BELLFORGE_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                if !quiet {
                    eprintln!("warning: could not size the thread pool: {e}");
                }
            }
        }
        _ => {
            if !quiet {
                eprintln!(
                    "warning: ignoring BELLFORGE_THREADS={raw:?}; expected a positive integer"
                );
            }
        }
    }
}

fn run(cli: Cli) -> Result<(RunReport, Vec<String>), CliError> {
    match cli.command {
        Command::Verify { d, tol } => cmd_verify(d, tol).map(|r| (r, Vec::new())),
        Command::Bell {
            d,
            functional,
            state,
            restarts,
            seed,
            tol,
            max_sweeps,
            observables,
        } => cmd_bell(&BellArgs {
            d,
            functional: match functional {
                FunctionalArg::Original => Functional::Original,
                FunctionalArg::Chsh => Functional::Chsh,
            },
            state,
            restarts,
            seed,
            tol,
            max_sweeps,
            observables: match observables {
                ObservablesArg::Bounded => ObservableClass::NormBounded,
                ObservablesArg::Spin => ObservableClass::Spin,
            },
        }),
        Command::DsoFind {
            d,
            state,
            pattern,
            iters,
            tol,
            dump,
        } => cmd_dso_find(&DsoFindArgs {
            d,
            state,
            pattern: match pattern {
                PatternArg::Sym3 => PatternKind::Sym3,
                PatternArg::Right2 => PatternKind::Right2,
            },
            iters,
            tol,
            dump,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::PASS
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let quiet = cli.quiet;
    configure_threads(quiet);

    let (report, notes) = match run(cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    println!("{}", report.to_json());
    if !quiet {
        for note in &notes {
            eprintln!("{note}");
        }
        for name in report.failed_checks() {
            eprintln!("check failed: {name}");
        }
    }
    ExitCode::from(if report.passed() {
        exit::PASS
    } else {
        exit::CHECKS_FAILED
    } as u8)
}
