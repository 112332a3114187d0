use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ppv_cli::{emit_json, emit_text, run_job, JobSpec, Report};

/// Computes the Borel-form presentation of the Galois group of a reducible
/// second-order linear differential equation with parameters.
#[derive(Debug, Parser)]
#[command(name = "ppv", version)]
struct Args {
    /// Job file (JSON); `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Emit the versioned JSON report instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "N")]
    max_order_reductive: Option<u32>,
    #[arg(long, value_name = "N")]
    max_order_unipotent: Option<u32>,
    /// Use this Riccati solution instead of searching for one.
    #[arg(long, value_name = "EXPR")]
    riccati: Option<String>,
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match read_input(&args.input) {
        Err(e) => Report::failed(None, "IoError", format!("{}: {e}", args.input.display())),
        Ok(src) => match JobSpec::from_json(&src) {
            Err(msg) => Report::failed(None, "InvalidJob", msg),
            Ok(mut job) => {
                if let Some(n) = args.max_order_reductive {
                    job.max_order_reductive = n;
                }
                if let Some(n) = args.max_order_unipotent {
                    job.max_order_unipotent = n;
                }
                if let Some(u) = args.riccati {
                    job.riccati_solution = Some(u);
                }
                run_job(&job)
            }
        },
    };
    let out = if args.json { emit_json(&report) } else { emit_text(&report) };
    print!("{out}");
    ExitCode::from(report.exit_code() as u8)
}
