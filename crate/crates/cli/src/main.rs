use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galtower::bounds::lambda_table;
use galtower::report::{params_sheet, render_lambda_table, render_params, render_verify, Format};
use galtower::suite::{run_verify, RunConfig, SuiteName};
use galtower::tower::params_from;

#[derive(Parser)]
#[command(
    name = "galtower",
    version,
    about = "Recursive Galois towers over F_{q^n}: parameters, verification, λ tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameter sheet of the tower (q, n, k).
    Params {
        q: u64,
        n: usize,
        k: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run verification suites on the tower (q, n, k).
    Verify {
        q: u64,
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Depth of the chain tree in tower H.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Random samples per randomized check.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest extension degree searched for splitting fields.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        ext_cap: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// λ bounds for every non-prime ℓ = q^n ≤ l_max.
    LambdaTable {
        l_max: u64,
        /// List every admissible k, not just the best one.
        #[arg(long)]
        all_k: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output format [default: csv for lambda-table, pretty otherwise].
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Splitting,
    Identities,
    Shifting,
    All,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

impl From<SuiteArg> for SuiteName {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Splitting => SuiteName::Splitting,
            SuiteArg::Identities => SuiteName::Identities,
            SuiteArg::Shifting => SuiteName::Shifting,
            SuiteArg::All => SuiteName::All,
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn emit(text: &str, out: &OutputArgs) -> Result<(), ExitCode> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, ExitCode> {
    match cli.command {
        Command::Params { q, n, k, out } => {
            let params = params_from(q, n, k).map_err(usage_error)?;
            let sheet = params_sheet(&params).map_err(usage_error)?;
            let format = out.format.map_or(Format::Pretty, Format::from);
            emit(&render_params(&sheet, format), &out)?;
            Ok(true)
        }
        Command::Verify {
            q,
            n,
            k,
            suite,
            depth,
            trials,
            seed,
            ext_cap,
            out,
        } => {
            let params = params_from(q, n, k).map_err(usage_error)?;
            let cfg = RunConfig {
                depth: depth as usize,
                trials: trials as usize,
                seed,
                ext_cap: ext_cap as usize,
            };
            let report = run_verify(&params, suite.into(), &cfg).map_err(usage_error)?;
            let format = out.format.map_or(Format::Pretty, Format::from);
            emit(&render_verify(&report, format), &out)?;
            Ok(report.passed)
        }
        Command::LambdaTable { l_max, all_k, out } => {
            let rows = lambda_table(l_max, all_k).map_err(usage_error)?;
            let format = out.format.map_or(Format::Csv, Format::from);
            emit(&render_lambda_table(&rows, format), &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(code) => code,
    }
}
