use anyhow::{bail, Result};
use clap::Args;
use ewens_pitman::ldp::{rate_closed_half, BlockFrequencyLdp, RateCurve};
use serde::Serialize;

use super::grid;
use crate::output::{emit, json};
use crate::{Format, OutputArgs};

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Block size l.
    #[arg(long, default_value_t = 1)]
    pub l: u64,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    /// Upper grid end (default 1/l).
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Use the closed form available for alpha = 0.5, l = 1.
    #[arg(long)]
    pub closed_form: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct RatePoint {
    x: f64,
    /// `null` stands for +∞.
    #[serde(rename = "I")]
    i: f64,
}

#[derive(Serialize)]
struct RateReport {
    alpha: f64,
    l: u64,
    method: &'static str,
    points: Vec<RatePoint>,
}

pub fn run(args: &RateArgs) -> Result<bool> {
    if args.l == 0 {
        bail!("--l must be at least 1");
    }
    let x_max = args.x_max.unwrap_or(1.0 / args.l as f64);
    let xs = grid(args.x_min, x_max, args.grid)?;
    let (curve, method) = if args.closed_form {
        if args.alpha != 0.5 || args.l != 1 {
            bail!(
                "--closed-form is only available for alpha = 0.5 and l = 1 (got alpha = {}, l = {})",
                args.alpha,
                args.l
            );
        }
        let points = xs
            .iter()
            .map(|&x| {
                Ok((
                    x,
                    if (0.0..=1.0).contains(&x) {
                        rate_closed_half(x)?
                    } else {
                        f64::INFINITY
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        (
            RateCurve {
                alpha: 0.5,
                l: 1,
                points,
            },
            "closed-form",
        )
    } else {
        (
            BlockFrequencyLdp::new(args.alpha, args.l)?.rate_curve(&xs),
            "legendre",
        )
    };
    let text = match args.output.format {
        Format::Csv => curve.to_csv(),
        Format::Json => json(
            "rate",
            &RateReport {
                alpha: curve.alpha,
                l: curve.l,
                method,
                points: curve
                    .points
                    .iter()
                    .map(|&(x, i)| RatePoint { x, i })
                    .collect(),
            },
        )?,
    };
    emit(&args.output, &text)?;
    Ok(true)
}
