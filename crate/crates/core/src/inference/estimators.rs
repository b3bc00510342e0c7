use serde::Serialize;

use super::posterior::{check_nj, SampleSummary};
use crate::error::{domain, Result};
use crate::numkit::ln_gamma_ratio;
use crate::partition::Params;

/// `ln[Γ(θ+n)/Γ(θ+n+α)]`, the scale of the limiting diversity.
fn ln_diversity_scale(params: &Params, n: u64) -> f64 {
    -ln_gamma_ratio(params.theta() + n as f64, params.alpha())
}

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        Err(domain("m must be at least 1"))
    } else {
        Ok(())
    }
}

/// Posterior mean of the probability that draw `n+m+1` is a new species:
/// `(θ+jα)/(θ+n) · (θ+n+α)_(m)/(θ+n+1)_(m)`.
pub fn discovery_estimate(params: &Params, n: u64, j: u64, m: u64) -> Result<f64> {
    check_nj(n, j)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    let base = theta + n as f64;
    // (b+α)_(m)/(b+1)_(m) = [Γ(b+α+m)/Γ(b+1+m)] / [Γ(b+α)/Γ(b+1)], both of small order
    let ln_ratio = ln_gamma_ratio(base + 1.0 + m as f64, alpha - 1.0)
        - ln_gamma_ratio(base + 1.0, alpha - 1.0);
    Ok((theta + j as f64 * alpha) / base * ln_ratio.exp())
}

/// Normalization rates `r_M` and `r_D` that replace `m^α` and `m^{α-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectedRates {
    /// `Γ(θ+α+n+m-1)/Γ(θ+n+m) · (m1 (θ+α+n-1)/(θ+jα) + m)`
    pub r_m: f64,
    /// `Γ(θ+α+n+m)/Γ(θ+n+m+1)`
    pub r_d: f64,
}

pub fn corrected_rates(params: &Params, n: u64, j: u64, m1: u64, m: u64) -> Result<CorrectedRates> {
    check_nj(n, j)?;
    check_m(m)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    let top = theta + (n + m) as f64;
    let r_d = ln_gamma_ratio(top + 1.0, alpha - 1.0).exp();
    let lead = ln_gamma_ratio(top, alpha - 1.0).exp();
    let r_m = lead
        * (m1 as f64 * (theta + alpha + n as f64 - 1.0) / (theta + j as f64 * alpha) + m as f64);
    Ok(CorrectedRates { r_m, r_d })
}

/// Large-`m` approximation of [`discovery_estimate`]:
/// `rate · (jα+θ) Γ(θ+n)/Γ(θ+n+α)` with `rate = m^{α-1}`, or `r_D` when
/// `corrected`.
pub fn discovery_asymptotic(
    params: &Params,
    n: u64,
    j: u64,
    m: u64,
    corrected: bool,
) -> Result<f64> {
    check_nj(n, j)?;
    check_m(m)?;
    let (alpha, theta) = (params.alpha(), params.theta());
    let rate = if corrected {
        corrected_rates(params, n, j, 0, m)?.r_d
    } else {
        (m as f64).powf(alpha - 1.0)
    };
    Ok(rate * (j as f64 * alpha + theta) * ln_diversity_scale(params, n).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum M1Variant {
    Exact,
    Uncorrected,
    Corrected,
}

/// Estimators of `m^{-1} M_{1,m}^(n)`, the singleton count among the
/// additional draws per draw.
///
/// * exact: `(m1/m)(θ+n-1+α)_(m)/(θ+n)_(m) + (θ+jα)(θ+n+α)_(m-1)/(θ+n)_(m)`
/// * uncorrected: `m^{α-1} (jα+θ) Γ(θ+n)/Γ(θ+n+α)`
/// * corrected: `(r_M/m)(jα+θ) Γ(θ+n)/Γ(θ+n+α)`
pub fn m1_estimate(
    params: &Params,
    n: u64,
    j: u64,
    m1: u64,
    m: u64,
    variant: M1Variant,
) -> Result<f64> {
    check_nj(n, j)?;
    check_m(m)?;
    if m1 > j {
        return Err(domain(format!(
            "singletons m1 = {m1} exceed blocks j = {j}"
        )));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let base = theta + n as f64;
    let scale = (j as f64 * alpha + theta) * ln_diversity_scale(params, n).exp();
    Ok(match variant {
        M1Variant::Exact => {
            // Γ(b+α-1+m)/Γ(b+m), shared by both terms
            let top = ln_gamma_ratio(base + m as f64, alpha - 1.0);
            let first = m1 as f64 / m as f64 * (top - ln_gamma_ratio(base, alpha - 1.0)).exp();
            let second = (theta + j as f64 * alpha) * (top - ln_gamma_ratio(base, alpha)).exp();
            first + second
        }
        M1Variant::Uncorrected => (m as f64).powf(alpha - 1.0) * scale,
        M1Variant::Corrected => corrected_rates(params, n, j, m1, m)?.r_m / m as f64 * scale,
    })
}

/// One line of an estimator table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub m: u64,
    pub exact: f64,
    pub uncorrected: f64,
    pub corrected: f64,
}

/// Additional sample sizes `n/100, n/10, n, 10n, 100n`, the first two
/// rounded to the nearest integer (at least 1).
pub fn default_m_list(n: u64) -> Vec<u64> {
    let frac = |d: f64| ((n as f64 / d).round() as u64).max(1);
    vec![frac(100.0), frac(10.0), n, 10 * n, 100 * n]
}

/// Discovery-probability table: exact, `m^{α-1}` and `r_D` estimators.
pub fn discovery_table(params: &Params, s: &SampleSummary, ms: &[u64]) -> Result<Vec<TableRow>> {
    ms.iter()
        .map(|&m| {
            Ok(TableRow {
                m,
                exact: discovery_estimate(params, s.n, s.j, m)?,
                uncorrected: discovery_asymptotic(params, s.n, s.j, m, false)?,
                corrected: discovery_asymptotic(params, s.n, s.j, m, true)?,
            })
        })
        .collect()
}

/// Singleton-proportion table: exact, `m^{α-1}` and `r_M/m` estimators.
pub fn singleton_table(params: &Params, s: &SampleSummary, ms: &[u64]) -> Result<Vec<TableRow>> {
    ms.iter()
        .map(|&m| {
            Ok(TableRow {
                m,
                exact: m1_estimate(params, s.n, s.j, s.m1, m, M1Variant::Exact)?,
                uncorrected: m1_estimate(params, s.n, s.j, s.m1, m, M1Variant::Uncorrected)?,
                corrected: m1_estimate(params, s.n, s.j, s.m1, m, M1Variant::Corrected)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn no_extra_draws() {
        let p = Params::new(0.5, 3.0).unwrap();
        assert_relative_eq!(
            discovery_estimate(&p, 10, 4, 0).unwrap(),
            5.0 / 13.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn corrected_matches_exact() {
        let p = Params::new(0.37, 2.4).unwrap();
        for &m in &[1, 2, 17, 400, 100_000] {
            let d = discovery_estimate(&p, 30, 11, m).unwrap();
            let dc = discovery_asymptotic(&p, 30, 11, m, true).unwrap();
            assert_relative_eq!(d, dc, max_relative = 1e-12);
            let e = m1_estimate(&p, 30, 11, 6, m, M1Variant::Exact).unwrap();
            let c = m1_estimate(&p, 30, 11, 6, m, M1Variant::Corrected).unwrap();
            assert_relative_eq!(e, c, max_relative = 1e-12);
        }
    }

    #[test]
    fn hand_rate() {
        let p = Params::new(0.5, 0.5).unwrap();
        let r = corrected_rates(&p, 2, 1, 1, 1).unwrap();
        let expected = (crate::numkit::ln_gamma(4.0) - crate::numkit::ln_gamma(4.5)).exp();
        assert_relative_eq!(r.r_d, expected, max_relative = 1e-13);
    }

    #[test]
    fn m_list() {
        assert_eq!(default_m_list(715), vec![7, 72, 715, 7150, 71500]);
        assert_eq!(default_m_list(363), vec![4, 36, 363, 3630, 36300]);
        assert_eq!(default_m_list(20), vec![1, 2, 20, 200, 2000]);
    }
}
