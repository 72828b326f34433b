use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dyndeg::{run_text, scenario_scene, Format, Options, Style};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Records,
}

/// Exact degree sequences and dynamical degrees of correspondences.
///
/// `dyndeg <scene-file>` runs a scene; `dyndeg scenario <name>` runs a
/// built-in scenario (`all` runs every one).
#[derive(Debug, Parser)]
#[command(name = "dyndeg", version)]
struct Cli {
    /// Scene file, or the word `scenario`.
    input: String,
    /// Scenario name after `scenario`.
    name: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Also print decimal approximations of irrational values.
    #[arg(long)]
    approx: bool,
    /// Cap on the number of terms in any normalized iterate.
    #[arg(long, value_name = "N")]
    max_terms: Option<usize>,
    /// Default iteration depth.
    #[arg(short = 'n', long, default_value_t = 12)]
    depth: u32,
    /// Print the scene in canonical form instead of running it.
    #[arg(long)]
    canonical: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options { depth: cli.depth, ..Options::default() };
    if let Some(m) = cli.max_terms {
        opts.max_terms = m;
    }
    let text = if cli.input == "scenario" {
        let Some(name) = &cli.name else {
            eprintln!("error: scenario needs a name");
            return ExitCode::from(1);
        };
        scenario_scene(name)
    } else {
        if cli.name.is_some() {
            eprintln!("error: unexpected second argument");
            return ExitCode::from(1);
        }
        let path = PathBuf::from(&cli.input);
        match std::fs::read_to_string(&path) {
            Ok(t) => {
                if let Some(dir) = path.parent() {
                    opts.base = dir.to_path_buf();
                }
                t
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    };
    if cli.canonical {
        return match dyndeg::parse_scene(&text) {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    let format = match cli.format {
        FormatArg::Table => Format::Table,
        FormatArg::Csv => Format::Csv,
        FormatArg::Records => Format::Records,
    };
    let out = run_text(&text, &opts, Style { format, approx: cli.approx });
    print!("{}", out.stdout);
    match &out.error {
        Some(e) => eprintln!("error: {e}"),
        None if out.code == 1 => eprintln!("error: a check failed without expect=fail"),
        None => {}
    }
    ExitCode::from(out.code as u8)
}
