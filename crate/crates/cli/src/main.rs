use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;

/// Khovanov homology, Jones polynomials and flow-category checks from PD codes.
#[derive(Parser, Debug)]
#[command(name = "khovanov", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Largest cube dimension to build (16 for diagrams, 10 for `cube`).
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bigraded Khovanov homology with torsion.
    Homology(DiagramInput),
    /// Jones polynomial from the graded Euler characteristic.
    Jones {
        #[command(flatten)]
        input: DiagramInput,
        /// Also compute the Kauffman bracket and report the difference.
        #[arg(long)]
        oracle: bool,
    },
    /// Face axioms and Floer acyclicity for the cube flow category C(n).
    Cube {
        n: usize,
    },
    /// Broken-flow balance and Floer homology of a skeleton JSON file.
    Flowcheck {
        skeleton: PathBuf,
    },
    /// Every generator with its bigrading.
    Generators(DiagramInput),
    /// The differential (or its flow-category skeleton) as JSON.
    ExportComplex {
        #[command(flatten)]
        input: DiagramInput,
        /// What to export.
        #[arg(long = "as", value_enum, default_value_t = Export::Complex)]
        what: Export,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Export {
    Complex,
    Skeleton,
}

#[derive(Args, Debug)]
struct DiagramInput {
    /// PD file; standard input when neither a path nor --pd is given.
    #[arg(conflicts_with = "pd")]
    path: Option<PathBuf>,
    /// Inline PD code.
    #[arg(long)]
    pd: Option<String>,
}

impl DiagramInput {
    fn text(&self) -> Result<String, Failure> {
        match (&self.path, &self.pd) {
            (_, Some(text)) => Ok(text.clone()),
            (Some(p), None) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
            (None, None) => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
                Ok(s)
            }
        }
    }
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] khovanov::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        use khovanov::Error as E;
        match self {
            Failure::Input(_) => 1,
            Failure::Core(E::Resource(_)) => 2,
            Failure::Core(E::Complex(_) | E::Divisibility(_) | E::AxiomViolation { .. }) => 3,
            Failure::Core(_) => 1,
        }
    }
}

/// What a command produced: a rendering for each format, plus a failure to
/// report after the output when the result itself signals an inconsistency.
pub struct Output {
    text: String,
    json: serde_json::Value,
    verdict: Option<String>,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    use khovanov::{DEFAULT_CUBE_CAP, DEFAULT_FLOW_CAP};
    let cap = |default| cli.cap.unwrap_or(default);
    match &cli.command {
        Command::Homology(input) => commands::homology(&input.text()?, cap(DEFAULT_CUBE_CAP)),
        Command::Jones { input, oracle } => commands::jones(&input.text()?, cap(DEFAULT_CUBE_CAP), *oracle),
        Command::Cube { n } => commands::cube(*n, cap(DEFAULT_FLOW_CAP)),
        Command::Flowcheck { skeleton } => {
            let text = std::fs::read_to_string(skeleton)
                .map_err(|e| Failure::Input(format!("{}: {e}", skeleton.display())))?;
            commands::flowcheck(&text)
        }
        Command::Generators(input) => commands::generators(&input.text()?, cap(DEFAULT_CUBE_CAP)),
        Command::ExportComplex { input, what } => {
            commands::export(&input.text()?, cap(DEFAULT_CUBE_CAP), *what == Export::Skeleton)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let written = match cli.format {
                Format::Table => stdout.write_all(out.text.as_bytes()),
                Format::Json => {
                    let s = serde_json::to_string_pretty(&out.json).expect("output serializes");
                    writeln!(stdout, "{s}")
                }
            };
            if written.is_err() {
                return ExitCode::from(1);
            }
            match out.verdict {
                Some(why) => {
                    eprintln!("error: {why}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
