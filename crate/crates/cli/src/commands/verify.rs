use anyhow::Result;
use clap::Args;
use ewens_pitman::verify::{run as run_checks, VerifyOptions};

use crate::output::{emit, json};
use crate::{Format, OutputArgs};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest sample size in the enumeration comparisons (1 to 9).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=9))]
    pub max_n: u64,
    /// Also check the finite-size bounds between conditional and
    /// unconditional generating functions.
    #[arg(long)]
    pub sandwich: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    let report = run_checks(&VerifyOptions {
        max_n: args.max_n,
        sandwich: args.sandwich,
    })?;
    let text = match args.output.format {
        Format::Json => json(
            "verify",
            &serde_json::json!({ "passed": report.passed(), "groups": report.groups }),
        )?,
        Format::Csv => {
            let mut s = String::from("group,passed,checks,max_error,tolerance,failure\n");
            for g in &report.groups {
                let failure = g.failure.as_deref().unwrap_or("").replace(['"', ','], " ");
                s += &format!(
                    "{},{},{},{:e},{:e},{}\n",
                    g.name, g.passed, g.checks, g.max_error, g.tolerance, failure
                );
            }
            s
        }
    };
    emit(&args.output, &text)?;
    if !report.passed() {
        eprintln!("verification failed");
    }
    Ok(report.passed())
}
