use anyhow::{bail, Result};
use clap::Args;
use ewens_pitman::inference::{
    default_m_list, ld_tail_curve, tail_mc_grid, FitResult, McConfig, SampleSummary, TailEstimate,
};
use ewens_pitman::Params;
use serde::Serialize;

use super::{grid, load_dataset, parse_m_list, resolve_params};
use crate::output::{emit, full, json};
use crate::{Format, ModelArgs, OutputArgs};

#[derive(Debug, Args)]
pub struct TailArgs {
    /// CSV path with header `frequency,count`, or builtin:ID.
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Additional sample sizes (default: n/100, n/10, n, 10n, 100n, rounded).
    #[arg(long)]
    pub m_list: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x_max: f64,
    /// Also estimate the tail by simulating this many continuations.
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct TailRow {
    m: u64,
    x: f64,
    uncorrected: f64,
    corrected: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc: Option<TailEstimate>,
}

#[derive(Serialize)]
struct TailReport<'a> {
    dataset: &'a str,
    sample: SampleSummary,
    params: Params,
    fit: Option<FitResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_config: Option<McConfig>,
    rows: Vec<TailRow>,
}

pub fn run(args: &TailArgs) -> Result<bool> {
    let dataset = load_dataset(args.dataset.as_deref())?;
    let (params, fit) = resolve_params(&args.model, Some(&dataset))?;
    if !(params.alpha() > 0.0) {
        bail!(
            "tail approximations need alpha in (0, 1), got {}",
            params.alpha()
        );
    }
    let summary = SampleSummary::from_dataset(&dataset);
    let ms = match &args.m_list {
        Some(s) => parse_m_list(s)?,
        None => default_m_list(dataset.n()),
    };
    let xs = grid(args.x_min, args.x_max, args.grid)?;
    let mc_config = args.reps.map(|reps| McConfig {
        reps,
        seed: args.seed,
        ..McConfig::default()
    });
    let initial = dataset.counts.block_sizes();
    let mut rows = Vec::with_capacity(ms.len() * xs.len());
    for &m in &ms {
        let curve = ld_tail_curve(&params, &summary, m, &xs)?;
        let mc = match &mc_config {
            Some(cfg) => Some(tail_mc_grid(&params, &initial, 1, m, &xs, cfg)?),
            None => None,
        };
        for (i, p) in curve.points.iter().enumerate() {
            rows.push(TailRow {
                m,
                x: p.x,
                uncorrected: p.uncorrected,
                corrected: p.corrected,
                mc: mc.as_ref().map(|v| v[i]),
            });
        }
    }
    let report = TailReport {
        dataset: &dataset.name,
        sample: summary,
        params,
        fit,
        mc_config,
        rows,
    };
    let text = match args.output.format {
        Format::Json => json("tail", &report)?,
        Format::Csv => {
            let mut s = String::from("m,x,uncorrected,corrected");
            if mc_config.is_some() {
                s += ",mc,mc_se";
            }
            s.push('\n');
            for r in &report.rows {
                s += &format!(
                    "{},{},{},{}",
                    r.m,
                    full(r.x),
                    full(r.uncorrected),
                    full(r.corrected)
                );
                if let Some(e) = r.mc {
                    s += &format!(",{},{}", full(e.estimate), full(e.std_error));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(true)
}
