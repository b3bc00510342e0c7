use rayon::prelude::*;
use serde::Serialize;

use super::estimators::corrected_rates;
use super::posterior::SampleSummary;
use crate::error::{domain, Error, Result};
use crate::ldp::BlockFrequencyLdp;
use crate::partition::{rng_for, sample_conditional, Params};

/// `exp(-m I_1^α(x'))`, the large-deviation approximation of the right tail
/// of the singleton proportion among `m` additional draws, with `x' = x`
/// or, when `corrected`, `x' = x r_M / (m r_D)`. Zero once `x' > 1`.
pub fn ld_tail(params: &Params, s: &SampleSummary, m: u64, x: f64, corrected: bool) -> Result<f64> {
    let ldp = BlockFrequencyLdp::new(params.alpha(), 1)?;
    ld_tail_with(&ldp, params, s, m, x, corrected)
}

/// Abscissa used by the corrected tail: `x r_M / (m r_D)`.
pub fn corrected_abscissa(params: &Params, s: &SampleSummary, m: u64, x: f64) -> Result<f64> {
    let r = corrected_rates(params, s.n, s.j, s.m1, m)?;
    Ok(x * r.r_m / (m as f64 * r.r_d))
}

fn ld_tail_with(
    ldp: &BlockFrequencyLdp,
    params: &Params,
    s: &SampleSummary,
    m: u64,
    x: f64,
    corrected: bool,
) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("x must be nonnegative, got {x}")));
    }
    let x_eff = if corrected {
        corrected_abscissa(params, s, m, x)?
    } else {
        x
    };
    Ok((-(m as f64) * ldp.rate(x_eff)).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailPoint {
    pub x: f64,
    pub uncorrected: f64,
    pub corrected: f64,
}

/// Uncorrected and corrected tail approximations on a grid, for one `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCurve {
    pub m: u64,
    pub points: Vec<TailPoint>,
}

pub fn ld_tail_curve(params: &Params, s: &SampleSummary, m: u64, xs: &[f64]) -> Result<TailCurve> {
    let ldp = BlockFrequencyLdp::new(params.alpha(), 1)?;
    let points = xs
        .par_iter()
        .map(|&x| {
            Ok(TailPoint {
                x,
                uncorrected: ld_tail_with(&ldp, params, s, m, x, false)?,
                corrected: ld_tail_with(&ldp, params, s, m, x, true)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailCurve { m, points })
}

/// Settings of a Monte Carlo tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub reps: u64,
    pub seed: u64,
    /// Upper limit on `reps · m` simulated draws.
    pub budget: u128,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            reps: 10_000,
            seed: 0,
            budget: 2_000_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailEstimate {
    pub x: f64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Monte Carlo estimate of `P[M_{l,m}^(n)/m ≥ x]` given the initial block
/// sizes, for every `x` in `xs` from the same simulated continuations.
pub fn tail_mc_grid(
    params: &Params,
    initial: &[u64],
    l: u64,
    m: u64,
    xs: &[f64],
    cfg: &McConfig,
) -> Result<Vec<TailEstimate>> {
    if cfg.reps == 0 || m == 0 || l == 0 {
        return Err(domain("reps, m and l must be at least 1"));
    }
    let requested = cfg.reps as u128 * m as u128;
    if requested > cfg.budget {
        return Err(Error::Budget {
            requested,
            limit: cfg.budget,
        });
    }
    let counts = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_for(cfg.seed, rep);
            sample_conditional(params, initial, m, &mut rng).map(|s| s.m_l(l))
        })
        .collect::<Result<Vec<u64>>>()?;
    let reps = cfg.reps as f64;
    Ok(xs
        .iter()
        .map(|&x| {
            let hits = counts.iter().filter(|&&c| c as f64 >= x * m as f64).count() as f64;
            let p = hits / reps;
            TailEstimate {
                x,
                estimate: p,
                std_error: (p * (1.0 - p) / reps).sqrt(),
            }
        })
        .collect())
}

pub fn tail_mc(
    params: &Params,
    initial: &[u64],
    l: u64,
    m: u64,
    x: f64,
    cfg: &McConfig,
) -> Result<TailEstimate> {
    Ok(tail_mc_grid(params, initial, l, m, &[x], cfg)?[0])
}
