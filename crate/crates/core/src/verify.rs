//! Self-checks comparing closed forms with exact enumeration, series and
//! algebraic identities. Every group is cheap enough to run on demand.

use serde::Serialize;

use crate::error::Result;
use crate::inference::{
    discovery_asymptotic, discovery_estimate, expected_new_blocks, m1_estimate, posterior_k_pmf,
    M1Variant,
};
use crate::ldp::{rate_closed_half, BlockFrequencyLdp};
use crate::moments::{cond_rising_moment_n, mgf_m, mgf_m_series, rising_moment_m, sandwich_bounds};
use crate::numkit::{
    gen_fact_coeff_exact_row, gen_fact_coeff_recurrence_row, log_rising, rising,
    stirling_first_unsigned, stirling_second,
};
use crate::partition::{enumerate_conditional, enumerate_distribution, Params};

/// `(α, θ) ∈ {0, 0.25, 0.5, 0.75} × {-0.1, 0.5, 1, 10}` with `θ > -α`.
pub fn standard_grid() -> Vec<Params> {
    let mut out = Vec::new();
    for &alpha in &[0.0, 0.25, 0.5, 0.75] {
        for &theta in &[-0.1, 0.5, 1.0, 10.0] {
            if let Ok(p) = Params::new(alpha, theta) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Largest sample size used by the enumeration comparisons (at most 9).
    pub max_n: u64,
    /// Also check the finite-size bounds between conditional and
    /// unconditional generating functions.
    pub sandwich: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 6,
            sandwich: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub max_error: f64,
    pub tolerance: f64,
    /// First failing case, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub groups: Vec<GroupResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.passed)
    }
}

struct Tracker {
    result: GroupResult,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tracker {
            result: GroupResult {
                name,
                passed: true,
                checks: 0,
                max_error: 0.0,
                tolerance,
                failure: None,
            },
        }
    }

    fn record(&mut self, error: f64, context: impl FnOnce() -> String) {
        let r = &mut self.result;
        r.checks += 1;
        if error.is_nan() || error > r.tolerance {
            r.passed = false;
            if r.failure.is_none() {
                r.failure = Some(format!("{} (error {error:e})", context()));
            }
        }
        if !error.is_nan() {
            r.max_error = r.max_error.max(error);
        }
    }

    fn require(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { f64::INFINITY }, context);
    }

    fn fail(&mut self, context: String) {
        self.record(f64::NAN, || context);
    }

    fn finish(self) -> GroupResult {
        self.result
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let max_n = opts.max_n.clamp(1, 9);
    let mut groups = vec![
        special_functions()?,
        eppf_normalization(max_n)?,
        moments_vs_enumeration(max_n)?,
        mgf_vs_series(max_n)?,
        conditional_moments(max_n.min(6))?,
        posterior_pmf()?,
        rate_functions()?,
        estimator_identities()?,
    ];
    if opts.sandwich {
        groups.push(sandwich()?);
    }
    Ok(VerifyReport { groups })
}

fn special_functions() -> Result<GroupResult> {
    let mut t = Tracker::new("special-functions", 1e-12);
    for &x in &[0.3, 1.0, 7.5, 250.0] {
        for &(a, b) in &[(0.5, 2.0), (3.0, 11.25), (40.0, 0.1)] {
            let lhs = log_rising(x, a + b)?;
            let rhs = log_rising(x, a)? + log_rising(x + a, b)?;
            t.record((lhs - rhs).abs() / lhs.abs().max(1.0), || {
                format!("log_rising additivity x={x} a={a} b={b}")
            });
        }
    }
    for n in 0..=12u64 {
        for m in 0..=12u64 {
            let mut acc = num_bigint::BigInt::from(0);
            for k in 0..=12u64 {
                let term = stirling_second(n, k)? * stirling_first_unsigned(k, m)?;
                if (k + m) % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            let expected = num_bigint::BigInt::from(u8::from(n == m));
            t.require(acc == expected, || {
                format!("Stirling orthogonality n={n} m={m}")
            });
        }
    }
    for &(s, r) in &[(0.5, -3.5), (0.25, -7.75), (0.75, -1.25)] {
        for n in 0..=20u64 {
            let exact = gen_fact_coeff_exact_row(n, s, r, n);
            let rec = gen_fact_coeff_recurrence_row(n, s, r);
            for k in 0..=n as usize {
                let scale = exact[k].abs() + rec[k].abs();
                let err = if scale.is_zero() {
                    0.0
                } else {
                    ((exact[k] - rec[k]).abs() / scale).to_f64()
                };
                t.record(err, || {
                    format!("generalized factorial coefficient n={n} k={k} s={s} r={r}")
                });
            }
        }
    }
    Ok(t.finish())
}

fn eppf_normalization(max_n: u64) -> Result<GroupResult> {
    let mut t = Tracker::new("eppf-normalization", 1e-12);
    for p in standard_grid() {
        for n in 1..=max_n {
            let total: f64 = enumerate_distribution(&p, n)?.values().sum();
            t.record((total - 1.0).abs(), || format!("{p:?} n={n}"));
        }
    }
    Ok(t.finish())
}

fn moments_vs_enumeration(max_n: u64) -> Result<GroupResult> {
    let mut t = Tracker::new("rising-moments-vs-enumeration", 1e-10);
    for p in standard_grid() {
        for n in 1..=max_n {
            let dist = enumerate_distribution(&p, n)?;
            for l in 1..=n {
                for r in 1..=4 {
                    let oracle: f64 = dist
                        .iter()
                        .map(|(shape, prob)| prob * rising(shape.get(l) as f64, r).to_f64())
                        .sum();
                    let v = rising_moment_m(&p, n, l, r)?;
                    t.record(rel(v, oracle), || {
                        format!("{p:?} n={n} l={l} r={r}: {v} vs {oracle}")
                    });
                }
            }
        }
    }
    Ok(t.finish())
}

fn mgf_vs_series(max_n: u64) -> Result<GroupResult> {
    let mut t = Tracker::new("mgf-vs-series", 1e-10);
    for p in standard_grid() {
        for n in 1..=max_n {
            let dist = enumerate_distribution(&p, n)?;
            for l in 1..=n {
                for &y in &[0.1, 0.3, 0.5] {
                    let series = mgf_m_series(&p, n, l, y, 2000, 1e-14)?.value;
                    let oracle: f64 = dist
                        .iter()
                        .map(|(shape, prob)| prob * (1.0 - y).powi(-(shape.get(l) as i32)))
                        .sum();
                    t.record(rel(series, oracle), || {
                        format!("series {p:?} n={n} l={l} y={y}")
                    });
                    if p.alpha() > 0.0 {
                        let closed = mgf_m(p.alpha(), n, l, y)?;
                        let at_zero =
                            mgf_m_series(&Params::new(p.alpha(), 0.0)?, n, l, y, 2000, 1e-14)?
                                .value;
                        t.record(rel(closed, at_zero), || {
                            format!("closed form alpha={} n={n} l={l} y={y}", p.alpha())
                        });
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

fn conditional_moments(max_m: u64) -> Result<GroupResult> {
    let mut t = Tracker::new("conditional-moments-vs-enumeration", 1e-9);
    let initials: [&[u64]; 3] = [&[1], &[3, 1], &[2, 1, 1]];
    let mut grid = standard_grid();
    grid.extend([Params::new(0.5, 0.0)?, Params::new(0.3, 0.0)?]);
    for p in grid {
        for initial in initials {
            let n: u64 = initial.iter().sum();
            let j = initial.len() as u64;
            for m in 1..=max_m {
                let outcomes = enumerate_conditional(&p, initial, m)?;
                for l in 1..=m {
                    for r in 1..=3 {
                        let oracle: f64 = outcomes
                            .iter()
                            .map(|o| o.probability * rising(o.state.n_l(l) as f64, r).to_f64())
                            .sum();
                        let v = cond_rising_moment_n(&p, n, j, m, l, r)?;
                        t.record(rel(v, oracle), || {
                            format!("{p:?} initial={initial:?} m={m} l={l} r={r}")
                        });
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

fn posterior_pmf() -> Result<GroupResult> {
    let mut t = Tracker::new("posterior-pmf", 1e-8);
    for p in standard_grid() {
        for &(n, j) in &[(1, 1), (10, 4), (50, 30)] {
            for &m in &[1, 10, 50, 200] {
                match posterior_k_pmf(&p, n, j, m) {
                    Ok(pmf) => {
                        t.record((pmf.total() - 1.0).abs(), || {
                            format!("sum {p:?} n={n} j={j} m={m}")
                        });
                        let mean = expected_new_blocks(&p, n, j, m)?;
                        t.record((pmf.mean() - mean).abs() / mean.max(1.0), || {
                            format!("mean {p:?} n={n} j={j} m={m}")
                        });
                        t.require(pmf.probs.iter().all(|&q| q >= 0.0), || {
                            format!("negative mass {p:?}")
                        });
                    }
                    Err(e) => t.fail(format!("{p:?} n={n} j={j} m={m}: {e}")),
                }
            }
        }
    }
    Ok(t.finish())
}

fn rate_functions() -> Result<GroupResult> {
    let mut t = Tracker::new("rate-functions", 1e-6);
    let half = BlockFrequencyLdp::new(0.5, 1)?;
    for i in 1..20 {
        let x = i as f64 * 0.05;
        let closed = rate_closed_half(x)?;
        t.record((half.rate(x) - closed).abs(), || {
            format!("generic vs closed form at x={x}")
        });
    }
    t.record(
        (rate_closed_half(1.0)? - std::f64::consts::LN_2).abs(),
        || "closed form at 1".into(),
    );
    for &alpha in &[0.3, 0.5, 0.8] {
        for l in 1..=3u64 {
            let ldp = BlockFrequencyLdp::new(alpha, l)?;
            t.require(ldp.rate(0.0) == 0.0, || format!("I(0) alpha={alpha} l={l}"));
            t.require(ldp.rate(1.0 / l as f64 + 0.01).is_infinite(), || {
                format!("I beyond 1/l alpha={alpha} l={l}")
            });
            let mut prev = 0.0;
            for i in 1..=20 {
                let v = ldp.rate(i as f64 / (20 * l) as f64);
                t.require(v >= prev - 1e-9, || {
                    format!("monotonicity alpha={alpha} l={l} i={i}")
                });
                prev = v;
            }
        }
    }
    Ok(t.finish())
}

fn estimator_identities() -> Result<GroupResult> {
    let mut t = Tracker::new("estimator-identities", 1e-12);
    let points = [
        (0.5, 206.75, 715, 460, 378),
        (0.5, 132.92, 363, 248, 200),
        (0.1, -0.05, 20, 3, 1),
        (0.9, 4.0, 12, 11, 10),
        (0.25, 0.0, 100, 40, 25),
    ];
    for &(alpha, theta, n, j, m1) in &points {
        let p = Params::new(alpha, theta)?;
        for &m in &[1, 7, 100, 5000, 100_000] {
            let d = discovery_estimate(&p, n, j, m)?;
            let dc = discovery_asymptotic(&p, n, j, m, true)?;
            t.record(rel(d, dc), || format!("discovery {p:?} n={n} j={j} m={m}"));
            let e = m1_estimate(&p, n, j, m1, m, M1Variant::Exact)?;
            let c = m1_estimate(&p, n, j, m1, m, M1Variant::Corrected)?;
            t.record(rel(e, c), || format!("singletons {p:?} n={n} j={j} m={m}"));
        }
    }
    Ok(t.finish())
}

/// Parameter points `(α, n, j, m, l, y)` for the finite-size bounds.
pub const SANDWICH_POINTS: [(f64, u64, u64, u64, u64, f64); 5] = [
    (0.5, 3, 2, 6, 1, 0.4),
    (0.5, 5, 3, 20, 1, 0.3),
    (0.3, 4, 2, 40, 2, 0.5),
    (0.7, 10, 4, 60, 1, 0.2),
    (0.25, 6, 6, 30, 1, 0.9),
];

fn sandwich() -> Result<GroupResult> {
    let mut t = Tracker::new("sandwich-bounds", 0.0);
    for &(alpha, n, j, m, l, y) in &SANDWICH_POINTS {
        let b = sandwich_bounds(alpha, n, j, m, l, y)?;
        t.require(b.lower <= b.value, || {
            format!("lower bound alpha={alpha} n={n} j={j} m={m} l={l} y={y}")
        });
        t.require(b.value <= b.upper, || {
            format!("upper bound alpha={alpha} n={n} j={j} m={m} l={l} y={y}")
        });
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_respects_domain() {
        let g = standard_grid();
        assert_eq!(g.len(), 15);
        assert!(g.iter().all(|p| p.theta() > -p.alpha()));
    }
}
