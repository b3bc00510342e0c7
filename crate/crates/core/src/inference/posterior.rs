use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numkit::{gen_fact_coeff_exact_row, ln_gamma_ratio, rising, LogValue, EXACT_MAX_N};
use crate::partition::{Dataset, Params};

/// Summary statistics of an observed sample: size `n`, number of blocks `j`
/// and number of singletons `m1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSummary {
    pub n: u64,
    pub j: u64,
    pub m1: u64,
}

impl SampleSummary {
    pub fn new(n: u64, j: u64, m1: u64) -> Result<Self> {
        if j < 1 || j > n {
            return Err(domain(format!("need 1 <= j <= n, got j = {j}, n = {n}")));
        }
        if m1 > j {
            return Err(domain(format!(
                "singletons m1 = {m1} exceed blocks j = {j}"
            )));
        }
        Ok(SampleSummary { n, j, m1 })
    }

    pub fn from_dataset(d: &Dataset) -> Self {
        SampleSummary {
            n: d.n(),
            j: d.j(),
            m1: d.m1(),
        }
    }
}

pub(crate) fn check_nj(n: u64, j: u64) -> Result<()> {
    if j < 1 || j > n {
        Err(domain(format!("need 1 <= j <= n, got j = {j}, n = {n}")))
    } else {
        Ok(())
    }
}

/// Normalization drift tolerated before switching evaluation route.
pub const PMF_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PmfMethod {
    /// Forward recursion over the additional draws.
    Recursion,
    /// Generalized factorial coefficients in exact arithmetic.
    ExactCoefficients,
}

/// Law of the number of new blocks `K_m^(n)` given `K_n = j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PosteriorPmf {
    /// `probs[k] = P[K_m^(n) = k | K_n = j]`, `k = 0..=m`.
    pub probs: Vec<f64>,
    pub method: PmfMethod,
}

impl PosteriorPmf {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| (k as f64 - mean).powi(2) * p)
            .sum()
    }
}

/// `P[K_m^(n) = k | K_n = j] = (θ/α + j)_(k) 𝒞(m, k; α, -n + αj) / (θ+n)_(m)`.
///
/// Evaluated by propagating the law one draw at a time: after `t` further
/// draws with `k` new blocks, the next draw opens a block with probability
/// `(θ + α(j+k))/(θ+n+t)`. All terms are nonnegative, so the result is
/// accurate for any `m`. If the total drifts from 1 by more than
/// [`PMF_TOLERANCE`] the coefficient form is used instead (`α > 0`,
/// `m ≤ 500`), and a precision error is raised if that fails too.
pub fn posterior_k_pmf(params: &Params, n: u64, j: u64, m: u64) -> Result<PosteriorPmf> {
    check_nj(n, j)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    let mut probs = vec![1.0];
    for t in 0..m {
        let denom = theta + (n + t) as f64;
        let mut next = vec![0.0; probs.len() + 1];
        for (k, &p) in probs.iter().enumerate() {
            let blocks = (j + k as u64) as f64;
            next[k] += p * ((n + t) as f64 - alpha * blocks) / denom;
            next[k + 1] += p * (theta + alpha * blocks) / denom;
        }
        probs = next;
    }
    let pmf = PosteriorPmf {
        probs,
        method: PmfMethod::Recursion,
    };
    if (pmf.total() - 1.0).abs() <= PMF_TOLERANCE {
        return Ok(pmf);
    }
    if alpha > 0.0 && m <= EXACT_MAX_N {
        let exact = posterior_k_pmf_coefficients(params, n, j, m)?;
        if (exact.total() - 1.0).abs() <= PMF_TOLERANCE {
            return Ok(exact);
        }
    }
    Err(Error::Precision(format!(
        "posterior pmf of new blocks sums to {} (n = {n}, j = {j}, m = {m})",
        pmf.total()
    )))
}

/// The same law evaluated directly from exact generalized factorial
/// coefficients; needs `α > 0` and `m ≤ 500`.
pub fn posterior_k_pmf_coefficients(
    params: &Params,
    n: u64,
    j: u64,
    m: u64,
) -> Result<PosteriorPmf> {
    check_nj(n, j)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    if alpha == 0.0 {
        return Err(domain("the coefficient form needs alpha > 0"));
    }
    if m > EXACT_MAX_N {
        return Err(Error::TooLarge {
            what: "exact posterior pmf",
            n: m,
            limit: EXACT_MAX_N,
        });
    }
    let coeffs = gen_fact_coeff_exact_row(m, alpha, alpha * j as f64 - n as f64, m);
    let norm = LogValue::from_ln(ln_gamma_ratio(theta + n as f64, m as f64));
    let shift = theta / alpha + j as f64;
    let probs = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| (rising(shift, k as u64) * *c / norm).to_f64())
        .collect();
    Ok(PosteriorPmf {
        probs,
        method: PmfMethod::ExactCoefficients,
    })
}

/// `E[K_m^(n) | K_n = j] = (θ/α + j)((θ+n+α)_(m)/(θ+n)_(m) - 1)`;
/// `θ Σ_{t<m} 1/(θ+n+t)` when `α = 0`.
pub fn expected_new_blocks(params: &Params, n: u64, j: u64, m: u64) -> Result<f64> {
    check_nj(n, j)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    if m == 0 {
        return Ok(0.0);
    }
    if alpha == 0.0 {
        return Ok((0..m).map(|t| theta / (theta + (n + t) as f64)).sum());
    }
    let base = theta + n as f64;
    let ln_ratio = ln_gamma_ratio(base + m as f64, alpha) - ln_gamma_ratio(base, alpha);
    Ok((theta / alpha + j as f64) * ln_ratio.exp_m1())
}

/// `E[K_n]`, the prior mean number of blocks among `n ≥ 1` draws.
pub fn expected_blocks(params: &Params, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(domain("sample size must be at least 1"));
    }
    Ok(1.0 + expected_new_blocks(params, 1, 1, n - 1)?)
}
