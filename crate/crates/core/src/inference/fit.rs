use serde::Serialize;

use super::posterior::{check_nj, expected_blocks};
use crate::error::{domain, Error, Result};
use crate::partition::{eppf_log, Dataset, FrequencyCounts, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    MeanMatch,
    Mle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub alpha_hat: f64,
    pub theta_hat: f64,
    pub method: FitMethod,
    /// Maximized log-likelihood (maximum likelihood only).
    pub log_likelihood: Option<f64>,
    /// `|E[K_n] - j|` at the solution (mean matching only).
    pub residual: Option<f64>,
}

impl FitResult {
    pub fn params(&self) -> Result<Params> {
        Params::new(self.alpha_hat, self.theta_hat)
    }
}

pub const THETA_UPPER: f64 = 1e7;
const MEAN_RESIDUAL: f64 = 1e-8;

/// `θ` such that `E[K_n] = j` for fixed `α`, by bisection over
/// `(-α + 1e-9, 1e7]`; `E[K_n]` is increasing in `θ`.
pub fn fit_theta_mean(alpha: f64, n: u64, j: u64) -> Result<FitResult> {
    check_nj(n, j)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let gap = |theta: f64| -> Result<f64> {
        Ok(expected_blocks(&Params::new(alpha, theta)?, n)? - j as f64)
    };
    let mut lo = -alpha + 1e-9;
    let mut hi = THETA_UPPER;
    let f_lo = gap(lo)?;
    let f_hi = gap(hi)?;
    let done = |theta: f64, residual: f64| FitResult {
        alpha_hat: alpha,
        theta_hat: theta,
        method: FitMethod::MeanMatch,
        log_likelihood: None,
        residual: Some(residual.abs()),
    };
    if f_lo >= 0.0 {
        return if f_lo <= MEAN_RESIDUAL {
            Ok(done(lo, f_lo))
        } else {
            Err(Error::NoSolution(format!(
                "E[K_n] exceeds j = {j} for every admissible theta"
            )))
        };
    }
    if f_hi < -MEAN_RESIDUAL {
        return Err(Error::NoSolution(format!(
            "j = {j} is not reached by E[K_n] for theta up to {THETA_UPPER:e} (n = {n})"
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f64::INFINITY;
    for _ in 0..300 {
        mid = 0.5 * (lo + hi);
        f_mid = gap(mid)?;
        if f_mid == 0.0 || hi - lo <= 1e-13 * mid.abs().max(1.0) {
            break;
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f_mid.abs() > MEAN_RESIDUAL {
        return Err(Error::NoSolution(format!(
            "bisection stopped with residual {f_mid:e} at theta = {mid}"
        )));
    }
    Ok(done(mid, f_mid))
}

const PHI_MIN: f64 = -6.0;
const PHI_MAX: f64 = 12.0;
const ALPHA_MAX: f64 = 0.99;

/// Log-likelihood in the coordinates `(α, φ = ln(θ + α))`.
fn loglik(counts: &FrequencyCounts, alpha: f64, phi: f64) -> f64 {
    if !(0.0..=ALPHA_MAX).contains(&alpha) || !phi.is_finite() {
        return f64::NEG_INFINITY;
    }
    match Params::new(alpha, phi.exp() - alpha) {
        Ok(p) => eppf_log(&p, counts).unwrap_or(f64::NEG_INFINITY),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Maximum-likelihood `(α, θ)` for an observed partition: a grid over
/// `α ∈ {0, 0.01, …, 0.99}` and `ln(θ+α) ∈ [-6, 12]`, refined by Nelder-Mead.
pub fn fit_mle(dataset: &Dataset) -> Result<FitResult> {
    let counts = &dataset.counts;
    let n = counts.n();
    let k = counts.k();
    if n < 2 {
        return Err(Error::Degenerate(
            "a single observation carries no information".into(),
        ));
    }
    if k == n {
        return Err(Error::Degenerate(
            "all blocks are singletons; the likelihood increases without bound in theta".into(),
        ));
    }
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for ai in 0..=99 {
        let alpha = ai as f64 / 100.0;
        for pi in 0..=180 {
            let phi = PHI_MIN + pi as f64 * 0.1;
            let v = loglik(counts, alpha, phi);
            if v > best.2 {
                best = (alpha, phi, v);
            }
        }
    }
    let (alpha, phi) = nelder_mead(
        |p| -loglik(counts, p[0], p[1]),
        [best.0, best.1],
        [0.01, 0.1],
    );
    let value = loglik(counts, alpha, phi);
    let (alpha, phi, value) = if value >= best.2 {
        (alpha, phi, value)
    } else {
        best
    };
    if phi <= PHI_MIN + 0.05 || phi >= PHI_MAX - 0.05 {
        return Err(Error::Degenerate(format!(
            "likelihood is maximized at the boundary ln(theta + alpha) = {phi:.2}"
        )));
    }
    Ok(FitResult {
        alpha_hat: alpha,
        theta_hat: phi.exp() - alpha,
        method: FitMethod::Mle,
        log_likelihood: Some(value),
        residual: None,
    })
}

/// Minimizes `f` over the plane from `start`, with an initial simplex
/// spanned by `step`.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], step: [f64; 2]) -> (f64, f64) {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(&f);
    for _ in 0..5000 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (0..2)
            .map(|d| {
                (simplex[1][d] - simplex[0][d])
                    .abs()
                    .max((simplex[2][d] - simplex[0][d]).abs())
            })
            .fold(0.0, f64::max);
        if size < 1e-10 && (values[2] - values[0]).abs() <= 1e-12 * values[0].abs().max(1.0) {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                along(-0.5)
            } else {
                along(0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        0.5 * (simplex[0][0] + simplex[i][0]),
                        0.5 * (simplex[0][1] + simplex[i][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    (simplex[best][0], simplex[best][1])
}
