use anyhow::Result;
use clap::Args;
use ewens_pitman::inference::{
    default_m_list, discovery_table, singleton_table, FitResult, SampleSummary, TableRow,
};
use ewens_pitman::Params;
use serde::Serialize;

use super::{load_dataset, parse_m_list, resolve_params};
use crate::output::{emit, full, json};
use crate::{Format, ModelArgs, OutputArgs};

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// CSV path with header `frequency,count`, or builtin:ID.
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Additional sample sizes (default: n/100, n/10, n, 10n, 100n, rounded).
    #[arg(long)]
    pub m_list: Option<String>,
    /// Print 17 significant digits instead of 3 decimals (CSV only).
    #[arg(long)]
    pub full_precision: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct TablesReport<'a> {
    dataset: &'a str,
    sample: SampleSummary,
    params: Params,
    fit: Option<FitResult>,
    discovery: Vec<TableRow>,
    singletons: Vec<TableRow>,
}

pub fn run(args: &TablesArgs) -> Result<bool> {
    let dataset = load_dataset(args.dataset.as_deref())?;
    let (params, fit) = resolve_params(&args.model, Some(&dataset))?;
    let summary = SampleSummary::from_dataset(&dataset);
    let ms = match &args.m_list {
        Some(s) => parse_m_list(s)?,
        None => default_m_list(dataset.n()),
    };
    let report = TablesReport {
        dataset: &dataset.name,
        sample: summary,
        params,
        fit,
        discovery: discovery_table(&params, &summary, &ms)?,
        singletons: singleton_table(&params, &summary, &ms)?,
    };
    let text = match args.output.format {
        Format::Json => json("tables", &report)?,
        Format::Csv => {
            let fmt = |v: f64| {
                if args.full_precision {
                    full(v)
                } else {
                    format!("{v:.3}")
                }
            };
            let mut s = String::from("dataset,table,m,exact,uncorrected,corrected\n");
            for (table, rows) in [
                ("discovery", &report.discovery),
                ("singletons", &report.singletons),
            ] {
                for r in rows {
                    s += &format!(
                        "{},{table},{},{},{},{}\n",
                        dataset.name,
                        r.m,
                        fmt(r.exact),
                        fmt(r.uncorrected),
                        fmt(r.corrected)
                    );
                }
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(true)
}
