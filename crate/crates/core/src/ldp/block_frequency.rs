use rayon::prelude::*;

use super::legendre::{legendre, log1mexp, logistic, softplus, LdpConfig};
use super::RateCurve;
use crate::error::{domain, Result};
use crate::numkit::{ln_factorial, ln_gamma_ratio};

/// Large deviations of `M_{l,n}/n`, the proportion of blocks of size `l`,
/// at `θ = 0` (the limit does not depend on `θ`).
///
/// `Λ(λ) = ln(1 + α ε₀/(1 - l ε₀))` where `ε₀ ∈ (0, 1/l)` solves
/// `h₂(ε₀) = h₁(λ)`. Internally `ε` is replaced by `z = ln(ε/(1 - lε))`,
/// which maps `(0, 1/l)` onto the real line and turns the equation into
/// `(l-α) ln(1 + αe^z) + αz = h₁(λ)` with `Λ = ln(1 + αe^z)`.
#[derive(Clone, Copy, Debug)]
pub struct BlockFrequencyLdp {
    alpha: f64,
    l: u64,
    /// `ln(α (1-α)_(l-1) / (α^α l!))`
    h1_const: f64,
    config: LdpConfig,
}

impl BlockFrequencyLdp {
    pub fn new(alpha: f64, l: u64) -> Result<Self> {
        Self::with_config(alpha, l, LdpConfig::default())
    }

    pub fn with_config(alpha: f64, l: u64, config: LdpConfig) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if l == 0 {
            return Err(domain("l must be at least 1"));
        }
        let h1_const = alpha.ln() + ln_gamma_ratio(1.0 - alpha, (l - 1) as f64)
            - alpha * alpha.ln()
            - ln_factorial(l);
        Ok(BlockFrequencyLdp {
            alpha,
            l,
            h1_const,
            config,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn config(&self) -> &LdpConfig {
        &self.config
    }

    /// `h₁(λ) = λ + ln((e^λ - 1)/e^λ) + ln(α (1-α)_(l-1)/(α^α l!))`, `λ > 0`.
    pub fn h1(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(domain(format!("h1 needs lambda > 0, got {lambda}")));
        }
        Ok(self.h1_unchecked(lambda))
    }

    fn h1_unchecked(&self, lambda: f64) -> f64 {
        lambda + log1mexp(lambda) + self.h1_const
    }

    /// `h₂(ε) = l ln((1-(l-α)ε)/(1-lε)) + α ln(ε/(1-(l-α)ε))`, `0 < ε < 1/l`.
    pub fn h2(&self, eps: f64) -> Result<f64> {
        let l = self.l as f64;
        if !(eps > 0.0 && eps * l < 1.0) {
            return Err(domain(format!("h2 needs 0 < eps < 1/l, got {eps}")));
        }
        let a = self.alpha;
        let inner = 1.0 - (l - a) * eps;
        Ok(l * (inner / (1.0 - l * eps)).ln() + a * (eps / inner).ln())
    }

    fn h2_z(&self, z: f64) -> f64 {
        (self.l as f64 - self.alpha) * softplus(z + self.alpha.ln()) + self.alpha * z
    }

    /// Solution `z` of `h₂ = h₁(λ)` in the logit-like coordinate.
    pub fn tilt(&self, lambda: f64) -> Result<f64> {
        let target = self.h1(lambda)?;
        Ok(self.solve_z(target))
    }

    fn solve_z(&self, target: f64) -> f64 {
        let f = |z: f64| self.h2_z(z) - target;
        let mut width = 1.0;
        let (mut lo, mut hi) = (-1.0, 1.0);
        while f(lo) > 0.0 {
            width *= 2.0;
            lo = -width;
        }
        while f(hi) < 0.0 {
            width *= 2.0;
            hi = width;
        }
        let tol = self.config.root_tol * target.abs().max(1.0);
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..self.config.max_bisection {
            mid = 0.5 * (lo + hi);
            let v = f(mid);
            if v.abs() <= tol * 1e-2 || hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if v < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mid
    }

    /// `ε₀(λ) = h₂^{-1}(h₁(λ))`, in `(0, 1/l)`.
    pub fn epsilon0(&self, lambda: f64) -> Result<f64> {
        let z = self.tilt(lambda)?;
        // e^z / (1 + l e^z)
        Ok(1.0 / (self.l as f64 + (-z).exp()))
    }

    /// Residual `h₂(ε₀) - h₁(λ)` of the root returned by [`Self::tilt`].
    pub fn root_residual(&self, lambda: f64) -> Result<f64> {
        let z = self.tilt(lambda)?;
        Ok(self.h2_z(z) - self.h1_unchecked(lambda))
    }

    /// `Λ_{α,l}(λ)`; zero for `λ ≤ 0`.
    pub fn cgf(&self, lambda: f64) -> f64 {
        if !(lambda > 0.0) {
            return 0.0;
        }
        let z = self.solve_z(self.h1_unchecked(lambda));
        softplus(z + self.alpha.ln())
    }

    /// `Λ'(λ) = σ · h₁'(λ) / h₂'(z)` with `σ = αe^z/(1+αe^z)`,
    /// `h₁' = 1/(1-e^{-λ})` and `h₂' = (l-α)σ + α`.
    pub fn cgf_derivative(&self, lambda: f64) -> f64 {
        if !(lambda > 0.0) {
            return 0.0;
        }
        let z = self.solve_z(self.h1_unchecked(lambda));
        let s = logistic(z + self.alpha.ln());
        let h1p = -1.0 / (-lambda).exp_m1();
        let h2p = (self.l as f64 - self.alpha) * s + self.alpha;
        s * h1p / h2p
    }

    /// `I_l^α(x) = sup_λ {λx - Λ(λ)}`; `+∞` outside `[0, 1/l]`.
    pub fn rate(&self, x: f64) -> f64 {
        let x_max = 1.0 / self.l as f64;
        if x.is_nan() {
            return f64::NAN;
        }
        if x < 0.0 || x > x_max {
            return f64::INFINITY;
        }
        if x == 0.0 {
            return 0.0;
        }
        if x >= x_max * (1.0 - 1e-12) {
            let lam = self.config.plateau_factor * self.l as f64;
            return (lam * x - self.cgf(lam)).max(0.0);
        }
        legendre(
            x,
            |lam| self.cgf(lam),
            |lam| self.cgf_derivative(lam),
            &self.config,
        )
    }

    /// The rate on a grid, evaluated in parallel; output order follows `xs`.
    pub fn rate_curve(&self, xs: &[f64]) -> RateCurve {
        let points = xs.par_iter().map(|&x| (x, self.rate(x))).collect();
        RateCurve {
            alpha: self.alpha,
            l: self.l,
            points,
        }
    }

    /// `I_l^α(1/l) = (1/l) ln(l! / (α (1-α)_(l-1)))`.
    pub fn rate_at_endpoint(&self) -> f64 {
        let l = self.l as f64;
        (ln_factorial(self.l) - self.alpha.ln() - ln_gamma_ratio(1.0 - self.alpha, l - 1.0)) / l
    }
}

pub fn h1(lambda: f64, alpha: f64, l: u64) -> Result<f64> {
    BlockFrequencyLdp::new(alpha, l)?.h1(lambda)
}

pub fn h2(eps: f64, alpha: f64, l: u64) -> Result<f64> {
    BlockFrequencyLdp::new(alpha, l)?.h2(eps)
}

pub fn epsilon0(lambda: f64, alpha: f64, l: u64) -> Result<f64> {
    BlockFrequencyLdp::new(alpha, l)?.epsilon0(lambda)
}

pub fn cgf_m(lambda: f64, alpha: f64, l: u64) -> Result<f64> {
    Ok(BlockFrequencyLdp::new(alpha, l)?.cgf(lambda))
}

pub fn rate_m(x: f64, alpha: f64, l: u64) -> Result<f64> {
    Ok(BlockFrequencyLdp::new(alpha, l)?.rate(x))
}
