use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dox_cli::commands::{parse_failure, EXIT_PARSE};
use dox_cli::{emit, parse, run, Command, Format, Options};

/// Exact computations for graded double Ore extensions of Koszul AS-regular algebras.
#[derive(Parser, Debug)]
#[command(name = "dox", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// Problem file in the line-oriented input format.
    input: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    emit: Format,
    /// Internal degree bound D for truncated computations (default d + 4).
    #[arg(long)]
    degree: Option<usize>,
    /// Number of randomized quadruples used for invariance checks.
    #[arg(long = "randomized-quadruples")]
    randomized_quadruples: Option<usize>,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_names: Vec<String> = Vec::new();
    let text = match std::fs::read_to_string(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("dox: cannot read {}: {e}", cli.input.display());
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let (outcome, names) = match parse(&text) {
        Ok(spec) => {
            let opts = Options { degree: cli.degree, randomized: cli.randomized_quadruples };
            (run(cli.command, &spec, &opts), spec.letter_names())
        }
        Err(e) => (parse_failure(&e), default_names),
    };
    let rendered = emit(&outcome.report, &names, cli.emit);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("dox: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_PARSE as u8);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(outcome.exit_code as u8)
}
