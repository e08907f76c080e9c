use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qexp::series::DEFAULT_ORDER;
use qexp_cli::family::{cmd_family, FamilyRequest};
use qexp_cli::output::Format;
use qexp_cli::table::{cmd_table, Sequence, TableRequest};
use qexp_cli::verify::{cmd_verify, Level, VerifyConfig};
use qexp_cli::{workers_from_env, CommandOutput, DEFAULT_N_CAP, EXIT_USAGE};

/// Exact counts for q-exponential families over finite fields.
#[derive(Parser)]
#[command(name = "qexp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named sequence for n = 0..=n-max.
    Table {
        #[arg(value_enum)]
        sequence: Sequence,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n_max: usize,
        /// Largest k printed for two-index sequences.
        #[arg(long)]
        k_max: Option<usize>,
        /// Count all matrices instead of invertible ones (stirling-cycle only).
        #[arg(long)]
        include_t: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Hand table of a deck specification given as JSON.
    Family {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, hide = true)]
        perturb_gamma: Option<usize>,
    },
    /// Compare formulas against brute-force enumeration.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[arg(long, hide = true)]
        perturb_gamma: Option<usize>,
    },
}

fn run(cli: Cli) -> CommandOutput {
    match cli.command {
        Command::Table {
            sequence,
            q,
            n_max,
            k_max,
            include_t,
            format,
        } => CommandOutput::from_result(cmd_table(&TableRequest {
            sequence,
            q,
            n_max,
            k_max,
            include_t,
            format,
            n_cap: DEFAULT_N_CAP,
        })),
        Command::Family {
            spec,
            order,
            format,
            perturb_gamma,
        } => CommandOutput::from_result(cmd_family(
            &spec,
            &FamilyRequest {
                order,
                format,
                gamma_fault: perturb_gamma,
            },
        )),
        Command::Verify {
            level,
            perturb_gamma,
        } => cmd_verify(&VerifyConfig {
            level,
            workers: workers_from_env(),
            gamma_fault: perturb_gamma,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let out = run(cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
