use anyhow::{bail, Result};
use clap::Args;
use ewens_pitman::inference::{FitResult, McConfig};
use ewens_pitman::partition::{rng_for, sample_conditional, sample_partition};
use ewens_pitman::{Error, Params};
use rayon::prelude::*;
use serde::Serialize;

use super::{load_dataset, resolve_params};
use crate::output::{emit, json};
use crate::{Format, ModelArgs, OutputArgs};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Continue this sample (with --m) instead of drawing fresh partitions.
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Sample size of each fresh partition.
    #[arg(long, conflicts_with_all = ["dataset", "m"])]
    pub n: Option<u64>,
    /// Number of additional draws after the dataset.
    #[arg(long, requires = "dataset")]
    pub m: Option<u64>,
    /// Block size whose count is reported.
    #[arg(long, default_value_t = 1)]
    pub l: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One replicate. Fresh partitions fill `k` and `m_l`; continuations also
/// fill the new/old split.
#[derive(Clone, Copy, Debug, Serialize)]
struct Row {
    rep: u64,
    k: u64,
    m_l: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_new: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    o_l: Option<u64>,
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    mode: &'static str,
    dataset: Option<&'a str>,
    params: Params,
    fit: Option<FitResult>,
    n: u64,
    m: Option<u64>,
    l: u64,
    reps: u64,
    seed: u64,
    rows: Vec<Row>,
}

pub fn run(args: &SimulateArgs) -> Result<bool> {
    if args.l == 0 {
        bail!("--l must be at least 1");
    }
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }
    let dataset = match (&args.dataset, args.n) {
        (Some(spec), _) => Some(load_dataset(Some(spec))?),
        (None, Some(_)) => None,
        (None, None) => bail!("give --n for fresh partitions, or --dataset with --m"),
    };
    let (params, fit) = resolve_params(&args.model, dataset.as_ref())?;
    let l = args.l;
    let budget = McConfig::default().budget;
    let check_budget = |per_rep: u64| -> Result<()> {
        let requested = args.reps as u128 * per_rep as u128;
        if requested > budget {
            return Err(Error::Budget {
                requested,
                limit: budget,
            }
            .into());
        }
        Ok(())
    };
    let report = match &dataset {
        None => {
            let n = args.n.expect("checked above");
            check_budget(n)?;
            let rows = (0..args.reps)
                .into_par_iter()
                .map(|rep| {
                    let counts = sample_partition(&params, n, &mut rng_for(args.seed, rep))?;
                    Ok(Row {
                        rep,
                        k: counts.k(),
                        m_l: counts.get(l),
                        k_new: None,
                        n_l: None,
                        o_l: None,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            SimulateReport {
                mode: "partition",
                dataset: None,
                params,
                fit,
                n,
                m: None,
                l,
                reps: args.reps,
                seed: args.seed,
                rows,
            }
        }
        Some(d) => {
            let m = args.m.unwrap_or(0);
            check_budget(m.max(1))?;
            let initial = d.counts.block_sizes();
            let rows = (0..args.reps)
                .into_par_iter()
                .map(|rep| {
                    let s = sample_conditional(&params, &initial, m, &mut rng_for(args.seed, rep))?;
                    Ok(Row {
                        rep,
                        k: s.final_counts().k(),
                        m_l: s.m_l(l),
                        k_new: Some(s.k_new()),
                        n_l: Some(s.n_l(l)),
                        o_l: Some(s.o_l(l)),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            SimulateReport {
                mode: "continuation",
                dataset: Some(&d.name),
                params,
                fit,
                n: d.n(),
                m: Some(m),
                l,
                reps: args.reps,
                seed: args.seed,
                rows,
            }
        }
    };
    let text = match args.output.format {
        Format::Json => json("simulate", &report)?,
        Format::Csv => {
            let mut s = if dataset.is_some() {
                format!("rep,k,k_new,n_{l},o_{l},m_{l}\n")
            } else {
                format!("rep,k,m_{l}\n")
            };
            for r in &report.rows {
                s += &match (r.k_new, r.n_l, r.o_l) {
                    (Some(kn), Some(nl), Some(ol)) => {
                        format!("{},{},{kn},{nl},{ol},{}\n", r.rep, r.k, r.m_l)
                    }
                    _ => format!("{},{},{}\n", r.rep, r.k, r.m_l),
                };
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(true)
}
