use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use deontic_cli::{
    cmd_check, cmd_crosscheck, cmd_dump_algebra, cmd_extensions, cmd_prove, cmd_verify, CliResult,
    ExtensionKind, Mode, QueryRequest, Report, EXIT_ERROR,
};
use deontic_core::crosscheck::CrosscheckConfig;

/// Deontic action logic with normal defaults.
#[derive(Parser)]
#[command(name = "dadl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a query under one consequence relation.
    Check {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Classical)]
        mode: ModeArg,
    },
    /// List the extensions of a theory.
    Extensions {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Reiter)]
        kind: KindArg,
    },
    /// Print the Hasse diagram of the quotient algebra.
    DumpAlgebra {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Emit a default-proof certificate for a credulous consequence.
    Prove {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Check a certificate file.
    Verify {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        /// Defaults to the certificate's last line.
        #[arg(long)]
        query: Option<String>,
    },
    /// Run the randomized invariant suites.
    Crosscheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        max_actions: usize,
        #[arg(long, default_value_t = 4)]
        max_defaults: usize,
        #[arg(long, default_value_t = 4)]
        max_facts: usize,
        #[arg(long, value_enum, hide = true)]
        mutant: Option<Mutant>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classical,
    DefaultSyntactic,
    DefaultAlgebraic,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Reiter,
    Algebraic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutant {
    DropDualCheck,
}

fn run(cli: Cli) -> CliResult<Report> {
    match cli.command {
        Command::Check {
            theory,
            query,
            mode,
        } => cmd_check(&QueryRequest {
            theory_path: theory,
            query,
            mode: match mode {
                ModeArg::Classical => Mode::Classical,
                ModeArg::DefaultSyntactic => Mode::DefaultSyntactic,
                ModeArg::DefaultAlgebraic => Mode::DefaultAlgebraic,
            },
        }),
        Command::Extensions { theory, kind } => cmd_extensions(
            &theory,
            match kind {
                KindArg::Reiter => ExtensionKind::Reiter,
                KindArg::Algebraic => ExtensionKind::Algebraic,
            },
        ),
        Command::DumpAlgebra {
            theory,
            format: Format::Dot,
        } => cmd_dump_algebra(&theory),
        Command::Prove { theory, query } => cmd_prove(&theory, &query),
        Command::Verify {
            theory,
            certificate,
            query,
        } => cmd_verify(&theory, &certificate, query.as_deref()),
        Command::Crosscheck {
            seed,
            cases,
            max_actions,
            max_defaults,
            max_facts,
            mutant,
        } => cmd_crosscheck(&CrosscheckConfig {
            seed,
            cases,
            max_actions,
            max_defaults,
            max_facts,
            drop_dual_check: matches!(mutant, Some(Mutant::DropDualCheck)),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
