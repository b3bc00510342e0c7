pub mod fit;
pub mod rate;
pub mod simulate;
pub mod tables;
pub mod tail;
pub mod verify;

use anyhow::{bail, Context, Result};
use ewens_pitman::inference::{fit_mle, fit_theta_mean, FitResult};
use ewens_pitman::{Dataset, Params};

use crate::dataset::parse_dataset;
use crate::{FitChoice, ModelArgs};

pub fn load_dataset(spec: Option<&str>) -> Result<Dataset> {
    let spec = spec.context("--dataset is required (a CSV path or builtin:ID)")?;
    Ok(parse_dataset(spec)?)
}

/// Parameters from `--alpha/--theta`, or fitted to `dataset` with `--fit`.
pub fn resolve_params(
    model: &ModelArgs,
    dataset: Option<&Dataset>,
) -> Result<(Params, Option<FitResult>)> {
    match (model.theta, model.fit) {
        (Some(theta), _) => {
            let alpha = model.alpha.context("--theta needs --alpha")?;
            Ok((Params::new(alpha, theta)?, None))
        }
        (None, Some(choice)) => {
            let dataset = dataset.context("--fit needs --dataset")?;
            let fit = match choice {
                FitChoice::Mean => {
                    let alpha = model.alpha.context("--fit mean needs --alpha")?;
                    fit_theta_mean(alpha, dataset.n(), dataset.j())?
                }
                FitChoice::Mle => {
                    if model.alpha.is_some() {
                        bail!("--fit mle estimates alpha; drop --alpha");
                    }
                    fit_mle(dataset)?
                }
            };
            Ok((fit.params()?, Some(fit)))
        }
        (None, None) => bail!("give --alpha with --theta, or --fit mean|mle"),
    }
}

/// Parses `M1,M2,…` into positive integers.
pub fn parse_m_list(s: &str) -> Result<Vec<u64>> {
    let ms = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(m) if m > 0 => Ok(m),
                _ => bail!("invalid entry `{t}` in --m-list (expected positive integers)"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ms)
}

/// `count ≥ 1` evenly spaced points on `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        bail!("--grid must be at least 1");
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        bail!("need finite --x-min <= --x-max, got [{lo}, {hi}]");
    }
    Ok(ewens_pitman::ldp::uniform_grid(lo, hi, count))
}
