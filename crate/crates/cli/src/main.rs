use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dimer_ks::cli::{run, CliConfig, Command, Format, EXIT_USAGE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Validate,
    Zigzags,
    Matchings,
    Polytope,
    Dual,
    Jacobi,
    Hh,
    Sh,
    Verify,
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Markdown,
}

/// Exact computations on dimer models of the torus.
///
/// INPUT is a dimer JSON file. A bare name of a bundled example
/// (c3.json, conifold.json, spp.json) works from any directory.
#[derive(Debug, Parser)]
#[command(name = "dimer-ks", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    input: PathBuf,
    /// Largest winding number to examine.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    n_max: u32,
    /// Base vertex id (defaults to the first vertex in the file).
    #[arg(long)]
    base_vertex: Option<String>,
    /// Base class index for the odd classes p and q (0-based).
    #[arg(long)]
    i0: Option<usize>,
    /// Coefficients of W_odd = aU + bV, as "a,b".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    ab: Option<(i64, i64)>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Length cap for witness path searches.
    #[arg(long)]
    cap: Option<usize>,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected \"a,b\"")?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let command = match args.command {
        Sub::Validate => Command::Validate,
        Sub::Zigzags => Command::Zigzags,
        Sub::Matchings => Command::Matchings,
        Sub::Polytope => Command::Polytope,
        Sub::Dual => Command::Dual,
        Sub::Jacobi => Command::Jacobi,
        Sub::Hh => Command::Hh,
        Sub::Sh => Command::Sh,
        Sub::Verify => Command::Verify,
        Sub::Report => Command::Report,
    };
    let cfg = CliConfig {
        input: args.input,
        command,
        n_max: args.n_max,
        base_vertex: args.base_vertex,
        i0: args.i0,
        ab: args.ab,
        format: match args.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Markdown => Format::Markdown,
        },
        cap: args.cap,
    };
    let out = run(&cfg);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
