use rayon::prelude::*;

use super::legendre::{legendre, log1mexp, LdpConfig};
use super::RateCurve;
use crate::error::{domain, Result};

/// Large deviations of `K_n/n`, the proportion of distinct blocks.
///
/// `Λ_α(λ) = -ln(1 - (1 - e^{-λ})^{1/α})` for `λ > 0`, else 0.
#[derive(Clone, Copy, Debug)]
pub struct BlockCountLdp {
    alpha: f64,
    config: LdpConfig,
}

impl BlockCountLdp {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(BlockCountLdp {
            alpha,
            config: LdpConfig::default(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cgf(&self, lambda: f64) -> f64 {
        if !(lambda > 0.0) {
            return 0.0;
        }
        // w = (1 - e^{-λ})^{1/α} = e^t
        let t = log1mexp(lambda) / self.alpha;
        -(-t.exp_m1()).ln()
    }

    /// `Λ'(λ) = w e^{-λ} / (α (1 - e^{-λ}) (1 - w))`.
    pub fn cgf_derivative(&self, lambda: f64) -> f64 {
        if !(lambda > 0.0) {
            return 0.0;
        }
        let one_minus = -(-lambda).exp_m1();
        let t = log1mexp(lambda) / self.alpha;
        let w = t.exp();
        w * (-lambda).exp() / (self.alpha * one_minus * -t.exp_m1())
    }

    /// `I^α(x) = sup_λ {λx - Λ_α(λ)}`; `+∞` outside `[0, 1]`, `-ln α` at 1.
    pub fn rate(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if !(0.0..=1.0).contains(&x) {
            return f64::INFINITY;
        }
        if x == 0.0 {
            return 0.0;
        }
        if x == 1.0 {
            return -self.alpha.ln();
        }
        legendre(
            x,
            |lam| self.cgf(lam),
            |lam| self.cgf_derivative(lam),
            &self.config,
        )
    }

    pub fn rate_curve(&self, xs: &[f64]) -> RateCurve {
        let points = xs.par_iter().map(|&x| (x, self.rate(x))).collect();
        RateCurve {
            alpha: self.alpha,
            l: 0,
            points,
        }
    }
}

pub fn cgf_k(lambda: f64, alpha: f64) -> Result<f64> {
    Ok(BlockCountLdp::new(alpha)?.cgf(lambda))
}

pub fn rate_k(x: f64, alpha: f64) -> Result<f64> {
    Ok(BlockCountLdp::new(alpha)?.rate(x))
}

/// Rate of `K_n / ln n` in the one-parameter model:
/// `x ln(x/θ) - x + θ` for `x > 0`, `θ` at 0, `+∞` for `x < 0`.
pub fn rate_k_ewens(x: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(domain(format!("theta must be positive, got {theta}")));
    }
    Ok(if x.is_nan() {
        f64::NAN
    } else if x < 0.0 {
        f64::INFINITY
    } else if x == 0.0 {
        theta
    } else {
        x * (x / theta).ln() - x + theta
    })
}
