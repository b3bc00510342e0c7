//! Factorial moments and generating functions of the block-frequency counts
//! `M_{l,n}` (number of blocks of size `l` among `n` draws) and of
//! `N_{l,m}^(n)` (new blocks of size `l` among `m` further draws).
//!
//! All closed-form sums have nonnegative terms and are accumulated in the
//! log domain.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numkit::{
    ln_affine_product, ln_binomial, ln_factorial, ln_gamma, ln_gamma_ratio, LogValue,
};
use crate::partition::Params;

/// Terms smaller than this fraction of the largest one are dropped.
const NEGLIGIBLE: f64 = 1e-30;

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let cut = max + NEGLIGIBLE.ln();
    let mut kept: Vec<f64> = terms
        .iter()
        .copied()
        .filter(|&t| t >= cut)
        .map(|t| (t - max).exp())
        .collect();
    // smallest first
    kept.sort_by(|a, b| a.partial_cmp(b).unwrap());
    max + kept.iter().sum::<f64>().ln()
}

/// `ln[(1-α)_(l-1)/l!]`
fn ln_c_prime(alpha: f64, l: u64) -> f64 {
    ln_gamma_ratio(1.0 - alpha, (l - 1) as f64) - ln_factorial(l)
}

/// `ln ỹ` with `ỹ = y/(1-y) · α (1-α)_(l-1)/l!`.
fn ln_y_tilde(alpha: f64, l: u64, y: f64) -> f64 {
    y.ln() - (-y).ln_1p() + alpha.ln() + ln_c_prime(alpha, l)
}

/// `ln (x)_[k] = ln x!/(x-k)!` for integers `k ≤ x`.
fn ln_falling_int(x: u64, k: u64) -> f64 {
    ln_factorial(x) - ln_factorial(x - k)
}

fn check_alpha_positive(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_y(y: f64) -> Result<()> {
    if (0.0..1.0).contains(&y) {
        Ok(())
    } else {
        Err(domain(format!("y must lie in [0, 1), got {y}")))
    }
}

fn check_l(n: u64, l: u64) -> Result<()> {
    if l >= 1 && l <= n {
        Ok(())
    } else {
        Err(domain(format!("need 1 <= l <= n, got l = {l}, n = {n}")))
    }
}

/// `E[(M_{l,n})_(r)]`, the rising factorial moment of order `r`.
/// Uses the specialized sum when `θ = 0`.
pub fn rising_moment_m(params: &Params, n: u64, l: u64, r: u64) -> Result<f64> {
    if params.theta() == 0.0 {
        rising_moment_m_theta0(params.alpha(), n, l, r)
    } else {
        rising_moment_m_general(params, n, l, r)
    }
}

/// `E[(M_{l,n})_(r)]` for any valid `(α, θ)`:
///
/// `Σ_{i=1}^{min(r, ⌊n/l⌋)} r! C(r-1, i-1)/i! · c'^i · Π_{t=1}^{i-1}(θ+tα)
///   · (n)_[il] (θ+iα)_(n-il) / (θ+1)_(n-1)`, with `c' = (1-α)_(l-1)/l!`.
pub fn rising_moment_m_general(params: &Params, n: u64, l: u64, r: u64) -> Result<f64> {
    check_l(n, l)?;
    if r == 0 {
        return Ok(1.0);
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let lc = ln_c_prime(alpha, l);
    let norm = ln_gamma_ratio(theta + 1.0, (n - 1) as f64);
    let terms: Vec<f64> = (1..=r.min(n / l))
        .map(|i| {
            let rest = n - i * l;
            ln_factorial(r) + ln_binomial(r - 1, i - 1) - ln_factorial(i)
                + i as f64 * lc
                + ln_affine_product(theta, alpha, 1, i - 1)
                + ln_falling_int(n, i * l)
                + ln_gamma_ratio(theta + i as f64 * alpha, rest as f64)
                - norm
        })
        .collect();
    Ok(ln_sum_exp(&terms).exp())
}

/// `E[(M_{l,n})_(r)]` at `θ = 0`:
/// `(r-1)! Σ_i C(r, i) c^i (n)_[il] (iα)_(n-il) / (α Γ(n))`, `c = α c'`.
pub fn rising_moment_m_theta0(alpha: f64, n: u64, l: u64, r: u64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    check_l(n, l)?;
    if r == 0 {
        return Ok(1.0);
    }
    let lc = alpha.ln() + ln_c_prime(alpha, l);
    let terms: Vec<f64> = (1..=r.min(n / l))
        .map(|i| {
            let rest = n - i * l;
            ln_factorial(r - 1)
                + ln_binomial(r, i)
                + i as f64 * lc
                + ln_falling_int(n, i * l)
                + ln_gamma_ratio(i as f64 * alpha, rest as f64)
                - alpha.ln()
                - ln_factorial(n - 1)
        })
        .collect();
    Ok(ln_sum_exp(&terms).exp())
}

/// A generating-function evaluation point `y = 1 - e^{-λ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MgfPoint {
    pub y: f64,
    pub lambda: f64,
    pub value: f64,
}

impl MgfPoint {
    /// `E[e^{λ M_{l,n}}]` at `θ = 0`.
    pub fn for_m(alpha: f64, n: u64, l: u64, lambda: f64) -> Result<Self> {
        let y = -(-lambda).exp_m1();
        Ok(MgfPoint {
            y,
            lambda,
            value: mgf_m(alpha, n, l, y)?,
        })
    }
}

/// `G(y) = E[(1-y)^{-M_{l,n}}]` at `θ = 0`, in closed form:
/// `Σ_{i=0}^{⌊n/l⌋} ỹ^i T(i)` with `T(0) = 1` and
/// `T(i) = n Γ(n-il+iα) / (Γ(n-il+1) Γ(iα+1))`, which equals
/// `n/(n-il) C(n-il+iα-1, n-il-1)` and tends to `n/(iα)` when `n = il`.
pub fn mgf_m(alpha: f64, n: u64, l: u64, y: f64) -> Result<f64> {
    Ok(ln_mgf_m(alpha, n, l, y)?.exp())
}

/// Natural log of [`mgf_m`]; stays finite for large `n`.
pub fn ln_mgf_m(alpha: f64, n: u64, l: u64, y: f64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    check_l(n, l)?;
    check_y(y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    let lyt = ln_y_tilde(alpha, l, y);
    let mut terms = vec![0.0];
    for i in 1..=n / l {
        let rest = (n - i * l) as f64;
        let ia = i as f64 * alpha;
        terms.push(
            i as f64 * lyt + (n as f64).ln() + ln_gamma_ratio(rest + 1.0, ia - 1.0)
                - ln_gamma(ia + 1.0),
        );
    }
    Ok(ln_sum_exp(&terms))
}

/// Value of a truncated series with a bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms: usize,
}

/// `Σ_i y^i/i! E[(M_{l,n})_(i)]` for any `(α, θ)`, summed until the tail
/// bound falls below `tol · value`.
///
/// Since `M_{l,n} ≤ K = ⌊n/l⌋`, term `i` is at most `C(K+i-1, i) y^i`, whose
/// ratios `y(K+i)/(i+1)` decrease in `i`; after `N` terms the tail is at
/// most `t_N / (1 - ρ)` with `ρ = y(K+N)/(N+1)` once `ρ < 1`.
pub fn mgf_m_series(
    params: &Params,
    n: u64,
    l: u64,
    y: f64,
    max_terms: usize,
    tol: f64,
) -> Result<SeriesValue> {
    check_l(n, l)?;
    check_y(y)?;
    if max_terms == 0 {
        return Err(domain("max_terms must be at least 1"));
    }
    if y == 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            error_bound: 0.0,
            terms: 1,
        });
    }
    let k = (n / l) as f64;
    let mut value = 0.0;
    let mut bound = f64::INFINITY;
    for i in 0..max_terms {
        let moment = rising_moment_m(params, n, l, i as u64)?;
        value += (i as f64 * y.ln() - ln_factorial(i as u64)).exp() * moment;
        let big_n = (i + 1) as f64;
        let rho = y * (k + big_n) / (big_n + 1.0);
        bound = if rho < 1.0 {
            // t_N = C(K+N-1, N) y^N
            let ln_t = ln_gamma_ratio(k, big_n) - ln_gamma(big_n + 1.0) + big_n * y.ln();
            ln_t.exp() / (1.0 - rho)
        } else {
            f64::INFINITY
        };
        if bound <= tol * value {
            return Ok(SeriesValue {
                value,
                error_bound: bound,
                terms: i + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        bound,
        tol: tol * value,
        terms: max_terms,
    })
}

fn check_conditional(n: u64, j: u64, m: u64, l: u64) -> Result<()> {
    if j < 1 || j > n {
        return Err(domain(format!("need 1 <= j <= n, got j = {j}, n = {n}")));
    }
    if m < 1 || l < 1 {
        return Err(domain(format!(
            "need m >= 1 and l >= 1, got m = {m}, l = {l}"
        )));
    }
    Ok(())
}

/// `E[(N_{l,m}^(n))_(r) | K_n = j]`. Only `(n, j)` of the initial sample
/// enter. Returns 0 when `l > m`. Uses the specialized sum when `θ = 0`.
pub fn cond_rising_moment_n(
    params: &Params,
    n: u64,
    j: u64,
    m: u64,
    l: u64,
    r: u64,
) -> Result<f64> {
    if params.theta() == 0.0 {
        cond_rising_moment_n_theta0(params.alpha(), n, j, m, l, r)
    } else {
        cond_rising_moment_n_general(params, n, j, m, l, r)
    }
}

/// General-`θ` conditional moment:
///
/// `Σ_{i=1}^{min(r, ⌊m/l⌋)} r! C(r-1, i-1)/i! · c'^i · Π_{t=j}^{j+i-1}(θ+tα)
///   · (m)_[il] (θ+iα+n)_(m-il) / (θ+n)_(m)`.
pub fn cond_rising_moment_n_general(
    params: &Params,
    n: u64,
    j: u64,
    m: u64,
    l: u64,
    r: u64,
) -> Result<f64> {
    check_conditional(n, j, m, l)?;
    if r == 0 {
        return Ok(1.0);
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let lc = ln_c_prime(alpha, l);
    let norm = ln_gamma_ratio(theta + n as f64, m as f64);
    let terms: Vec<f64> = (1..=r.min(m / l))
        .map(|i| {
            let rest = (m - i * l) as f64;
            ln_factorial(r) + ln_binomial(r - 1, i - 1) - ln_factorial(i)
                + i as f64 * lc
                + ln_affine_product(theta, alpha, j, i)
                + ln_falling_int(m, i * l)
                + ln_gamma_ratio(theta + i as f64 * alpha + n as f64, rest)
                - norm
        })
        .collect();
    Ok(ln_sum_exp(&terms).exp())
}

/// `θ = 0` conditional moment:
/// `j (r-1)! Σ_i C(r, i) C(j+i-1, i-1) c^i (m)_[il] (iα+n)_(m-il) / (n)_(m)`.
pub fn cond_rising_moment_n_theta0(
    alpha: f64,
    n: u64,
    j: u64,
    m: u64,
    l: u64,
    r: u64,
) -> Result<f64> {
    check_alpha_positive(alpha)?;
    check_conditional(n, j, m, l)?;
    if r == 0 {
        return Ok(1.0);
    }
    let lc = alpha.ln() + ln_c_prime(alpha, l);
    let norm = ln_gamma_ratio(n as f64, m as f64);
    let terms: Vec<f64> = (1..=r.min(m / l))
        .map(|i| {
            let rest = (m - i * l) as f64;
            (j as f64).ln()
                + ln_factorial(r - 1)
                + ln_binomial(r, i)
                + ln_binomial(j + i - 1, i - 1)
                + i as f64 * lc
                + ln_falling_int(m, i * l)
                + ln_gamma_ratio(i as f64 * alpha + n as f64, rest)
                - norm
        })
        .collect();
    Ok(ln_sum_exp(&terms).exp())
}

/// `E[(1-y)^{-N_{l,m}^(n)} | K_n = j]` at `θ = 0`:
/// `m!/(n)_(m) Σ_{i=0}^{⌊m/l⌋} ỹ^i C(j+i-1, i) (n+iα)_(m-il)/(m-il)!`.
pub fn mgf_n_cond(alpha: f64, n: u64, j: u64, m: u64, l: u64, y: f64) -> Result<f64> {
    Ok(ln_mgf_n_cond(alpha, n, j, m, l, y)?.exp())
}

/// Natural log of [`mgf_n_cond`].
pub fn ln_mgf_n_cond(alpha: f64, n: u64, j: u64, m: u64, l: u64, y: f64) -> Result<f64> {
    check_alpha_positive(alpha)?;
    check_conditional(n, j, m, l)?;
    check_y(y)?;
    if y == 0.0 || l > m {
        return Ok(0.0);
    }
    let lyt = ln_y_tilde(alpha, l, y);
    let lead = ln_factorial(m) - ln_gamma_ratio(n as f64, m as f64);
    let terms: Vec<f64> = (0..=m / l)
        .map(|i| {
            let rest = m - i * l;
            let yi = if i == 0 { 0.0 } else { i as f64 * lyt };
            lead + yi
                + ln_binomial(j + i - 1, i)
                + ln_gamma_ratio(n as f64 + i as f64 * alpha, rest as f64)
                - ln_factorial(rest)
        })
        .collect();
    Ok(ln_sum_exp(&terms))
}

/// Finite-size bounds relating the conditional and unconditional
/// generating functions at `θ = 0`.
#[derive(Clone, Copy, Debug)]
pub struct SandwichBounds {
    pub lower: LogValue,
    pub value: LogValue,
    pub upper: LogValue,
}

impl SandwichBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// Lower and upper bounds on `G_N = mgf_n_cond(α, n, j, m, l, y)`:
///
/// * upper: `(m+n)^{n+j-1} G_M(α, n+m, l, y)`
/// * lower: `((n-1)!/(m+n)^{n-1})² [G_M(α, n+m, l, y)
///   - Σ_{i=⌊m/l⌋+1}^{⌊(n+m)/l⌋} ỹ^i C(n+m+iα-il-1, n+m-il-1)]`
///
/// where the binomial is taken through gamma functions and vanishes when
/// `n+m = il`.
pub fn sandwich_bounds(
    alpha: f64,
    n: u64,
    j: u64,
    m: u64,
    l: u64,
    y: f64,
) -> Result<SandwichBounds> {
    let value = LogValue::from_ln(ln_mgf_n_cond(alpha, n, j, m, l, y)?);
    let total = n + m;
    let ln_gm = ln_mgf_m(alpha, total, l, y)?;
    let ln_mn = (total as f64).ln();
    let upper = LogValue::from_ln((n + j - 1) as f64 * ln_mn + ln_gm);
    let lyt = ln_y_tilde(alpha, l, y);
    let correction: LogValue = if y == 0.0 {
        LogValue::ZERO
    } else {
        (m / l + 1..=total / l)
            .filter(|&i| total > i * l)
            .map(|i| {
                let big_n = (total - i * l) as f64;
                let ia = i as f64 * alpha;
                // Γ(N+iα) / (Γ(N) Γ(iα+1))
                LogValue::from_ln(i as f64 * lyt + ln_gamma_ratio(big_n, ia) - ln_gamma(ia + 1.0))
            })
            .sum()
    };
    let factor = LogValue::from_ln(2.0 * (ln_factorial(n - 1) - (n - 1) as f64 * ln_mn));
    let lower = factor * (LogValue::from_ln(ln_gm) - correction);
    Ok(SandwichBounds {
        lower,
        value,
        upper,
    })
}
