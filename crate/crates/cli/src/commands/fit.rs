use anyhow::Result;
use clap::Args;
use ewens_pitman::inference::{FitResult, SampleSummary};
use serde::Serialize;

use super::{load_dataset, resolve_params};
use crate::output::{emit, full, json};
use crate::{FitChoice, Format, ModelArgs, OutputArgs};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV path with header `frequency,count`, or builtin:ID.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Required with `--fit mean`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value = "mle")]
    pub fit: FitChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct FitReport<'a> {
    dataset: &'a str,
    sample: SampleSummary,
    #[serde(flatten)]
    fit: FitResult,
}

pub fn run(args: &FitArgs) -> Result<bool> {
    let dataset = load_dataset(args.dataset.as_deref())?;
    let model = ModelArgs {
        alpha: args.alpha,
        theta: None,
        fit: Some(args.fit),
    };
    let (_, fit) = resolve_params(&model, Some(&dataset))?;
    let fit = fit.expect("fitting was requested");
    let report = FitReport {
        dataset: &dataset.name,
        sample: SampleSummary::from_dataset(&dataset),
        fit,
    };
    let text = match args.output.format {
        Format::Json => json("fit", &report)?,
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(full).unwrap_or_default();
            let method = match args.fit {
                FitChoice::Mean => "mean",
                FitChoice::Mle => "mle",
            };
            format!(
                "dataset,n,j,method,alpha,theta,log_likelihood,residual\n{},{},{},{method},{},{},{},{}\n",
                dataset.name,
                dataset.n(),
                dataset.j(),
                full(fit.alpha_hat),
                full(fit.theta_hat),
                opt(fit.log_likelihood),
                opt(fit.residual)
            )
        }
    };
    emit(&args.output, &text)?;
    Ok(true)
}
