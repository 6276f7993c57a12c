//! `a4`: intersection numbers on compactifications of the moduli space of
//! principally polarized abelian fourfolds.
//!
//! Exit status: 0 on success, 1 when a computation or verification fails,
//! 2 on usage errors.

use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use a4_core::commands::{self, Basis, CommandError, Pipeline, TableKind, TableOptions};
use a4_core::report::OutputDocument;
use a4_core::verify::VerifyOptions;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "a4", version, about = "Exact intersection tables for the Igusa and second Voronoi compactifications of A4")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Omit the timestamp so repeated runs produce identical output.
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Fan data: rays, eta, cones, basicness and stabilizer order.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Evaluate a degree-10 monomial in E and D1..D12, or `e10`.
    Intersection {
        /// For example `e10`, `E^10` or `E*D1*D2^3*D5^5`.
        expr: String,
    },
    /// Intersection tables.
    Tables {
        #[arg(value_enum)]
        which: Table,
        /// Use stack normalization (halves every number).
        #[arg(long)]
        stack: bool,
        /// Monomial basis of the Voronoi table.
        #[arg(long, value_enum, default_value_t = BasisArg::Lfe)]
        basis: BasisArg,
        /// Genus for `ltop`.
        #[arg(long, default_value_t = 4)]
        genus: usize,
    },
    /// Run every acceptance check; exits 1 if any fails.
    Verify {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
        /// Alter b_0 before checking, to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt_b0: bool,
    },
}

#[derive(Subcommand)]
enum FanAction {
    /// Print the fan report.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Igusa,
    Voronoi,
    Ltop,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Lfe,
    Geometric,
}

fn run(cli: &Cli, pipeline: &Pipeline) -> Result<(OutputDocument, bool), CommandError> {
    match &cli.command {
        Command::Fan { action: FanAction::Report } => Ok((commands::fan_report(pipeline)?, true)),
        Command::Intersection { expr } => Ok((commands::intersection(pipeline, expr)?, true)),
        Command::Tables { which, stack, basis, genus } => {
            let kind = match which {
                Table::Igusa => TableKind::Igusa,
                Table::Voronoi => TableKind::Voronoi,
                Table::Ltop => TableKind::Ltop,
            };
            let opts = TableOptions {
                stack: *stack,
                basis: match basis {
                    BasisArg::Lfe => Basis::Lfe,
                    BasisArg::Geometric => Basis::Geometric,
                },
                genus: *genus,
            };
            Ok((commands::tables(pipeline, kind, opts)?, true))
        }
        Command::Verify { corrupt_b0, .. } => {
            let opts = if *corrupt_b0 { VerifyOptions::with_corrupted_b0() } else { VerifyOptions::default() };
            let doc = commands::verify(pipeline, &opts)?;
            let ok = doc.all_passed();
            Ok((doc, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.format == Format::Json || matches!(cli.command, Command::Verify { json: true, .. });
    match run(&cli, &Pipeline::new()) {
        Ok((mut doc, ok)) => {
            if !cli.reproducible {
                doc.generated_at = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
            }
            print!("{}", if json { doc.to_json() } else { doc.to_text() });
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
