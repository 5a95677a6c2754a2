use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nform_cli::spec::rational;
use nform_cli::{parse_spec, render_text, run, CliError, Command, OutputDocument, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Normalform,
    Hopf,
    Verify,
    Dynamics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Second-order normal forms of perturbed resonant oscillators.
#[derive(Parser, Debug)]
#[command(name = "nf", version)]
struct Args {
    command: Sub,

    /// Problem specification (JSON or key = value text).
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,

    /// Also rewrite the normal form in Hopf variables.
    #[arg(long)]
    hopf: bool,

    /// Value for a Hopf family parameter, e.g. lambda0=1/3. Repeatable.
    #[arg(long = "param", value_name = "NAME=VAL")]
    params: Vec<String>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// For verify: check this previously written document instead of
    /// recomputing the normal form.
    #[arg(long, value_name = "FILE")]
    result: Option<PathBuf>,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn execute(args: &Args) -> Result<nform_cli::Outcome, CliError> {
    let spec = parse_spec(&read(&args.spec)?)?;
    let mut params = BTreeMap::new();
    for p in &args.params {
        let (name, val) = p
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("--param expects NAME=VAL, got '{p}'")))?;
        params.insert(name.trim().to_string(), rational(name.trim(), val)?);
    }
    let result = match &args.result {
        Some(path) => Some(OutputDocument::from_json(&read(path)?)?),
        None => None,
    };
    let cmd = match args.command {
        Sub::Normalform => Command::NormalForm,
        Sub::Hopf => Command::Hopf,
        Sub::Verify => Command::Verify,
        Sub::Dynamics => Command::Dynamics,
    };
    let opts = RunOptions {
        hopf: args.hopf,
        params,
        result,
    };
    run(&spec, cmd, &opts)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(out) => {
            match args.format {
                Format::Json => print!("{}", out.doc.to_json()),
                Format::Text => print!("{}", render_text(&out.doc)),
            }
            if let Some(f) = &out.failure {
                eprintln!("nf: verification failed: {f}");
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            match args.format {
                Format::Json => eprintln!(
                    "{}",
                    serde_json::json!({"error": {"kind": e.kind(), "message": e.message(), "exit_code": e.exit_code()}})
                ),
                Format::Text => eprintln!("nf: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
