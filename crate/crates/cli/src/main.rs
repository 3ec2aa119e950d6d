use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use arrcoh_cli::{run, Command, Format, JobSpec, Source};

/// Invariants and presented cohomology of abelian arrangements.
#[derive(Parser, Debug)]
#[command(name = "arrcoh", version)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "example"])))]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Arrangement document (JSON).
    #[arg(long, value_name = "PATH")]
    input: Option<String>,
    /// Built-in example: cu, ncu, ncnu, braid:N, boolean:N.
    #[arg(long, value_name = "NAME[:PARAM]")]
    example: Option<String>,
    /// Group parameters a,b (default 1,1; 0,1 for vg).
    #[arg(long, value_name = "A,B", value_parser = parse_ab)]
    ab: Option<(usize, usize)>,
    /// `machine` prints one JSON object.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Highest degree computed by `betti`.
    #[arg(long, value_name = "K")]
    max_degree: Option<usize>,
}

fn parse_ab(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a count: {x:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let source = match (cli.input, cli.example) {
        (Some(path), None) => Source::File(path),
        (None, Some(name)) => Source::Example(name),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let job = JobSpec {
        command: cli.command,
        source,
        ab: cli.ab,
        format: cli.format,
        max_degree: cli.max_degree,
    };
    match run(&job) {
        Ok(report) => {
            match job.format {
                Format::Text => print!("{}", report.human()),
                Format::Machine => println!("{}", report.machine()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
