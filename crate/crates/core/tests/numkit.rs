use approx::assert_relative_eq;
use ewens_pitman::numkit::*;
use ewens_pitman::partition::{enumerate_distribution, Params};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[test]
fn ln_gamma_agrees_with_statrs() {
    for &z in &[0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.25, 57.5, 171.3, 1e4, 2.5e6] {
        let ours = ln_gamma(z);
        let theirs = statrs::function::gamma::ln_gamma(z);
        assert!(
            (ours - theirs).abs() <= 1e-12 * theirs.abs().max(1.0),
            "z = {z}: {ours} vs {theirs}"
        );
    }
}

#[test]
fn log_rising_matches_products() {
    for &x in &[0.25, 1.0, 3.5, 40.0] {
        for k in 0..30u64 {
            let direct: f64 = (0..k).map(|i| (x + i as f64).ln()).sum();
            let v = log_rising(x, k as f64).unwrap();
            assert!(
                (v - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                "x={x} k={k}"
            );
            assert_relative_eq!(
                rising(x, k).ln_abs(),
                direct,
                epsilon = 1e-12,
                max_relative = 1e-12
            );
        }
    }
}

#[test]
fn falling_changes_sign() {
    // 2.5 · 1.5 · 0.5 · (-0.5)
    let v = falling(2.5, 4);
    assert_eq!(v.sign(), -1);
    assert_relative_eq!(v.to_f64(), -0.9375, max_relative = 1e-14);
    assert!(falling(3.0, 5).is_zero());
}

#[test]
fn ratio_of_large_gammas() {
    // Γ(x+a)/Γ(x) ~ x^a for huge x
    let x = 1e12;
    let r = ln_gamma_ratio(x, 0.5);
    assert_relative_eq!(r, 0.5 * x.ln(), max_relative = 1e-12);
    assert_relative_eq!(
        ln_gamma_ratio(5.0, 2.0),
        (5.0f64 * 6.0).ln(),
        max_relative = 1e-14
    );
}

#[test]
fn binomial_table() {
    for n in 0..40u64 {
        let mut c = BigInt::one();
        for k in 0..=n {
            let v = c.to_f64().unwrap().ln();
            assert!(
                (ln_binomial(n, k) - v).abs() <= 1e-12 * v.max(1.0),
                "n={n} k={k}"
            );
            c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        }
    }
}

#[test]
fn rising_from_falling_on_a_two_point_law() {
    // Y uniform on {0, 2}: E[(Y)_[0..=2]] = 1, 1, 1 and E[(Y)_(1)] = 1, E[(Y)_(2)] = 3.
    let falling_moments = [LogValue::ONE, LogValue::ONE, LogValue::ONE];
    let rising_moments = rising_from_falling(&falling_moments).unwrap();
    let expected = [1.0, 1.0, 3.0];
    for (v, e) in rising_moments.iter().zip(expected) {
        assert_relative_eq!(v.to_f64(), e, max_relative = 1e-14);
    }
}

#[test]
fn rising_from_falling_on_a_binomial() {
    // Y ~ Binomial(6, 0.3): E[(Y)_[j]] = (6)_[j] 0.3^j
    let (n, p) = (6u64, 0.3f64);
    let falling_moments: Vec<LogValue> = (0..=n)
        .map(|j| falling(n as f64, j) * LogValue::from_f64(p.powi(j as i32)))
        .collect();
    let rising_moments = rising_from_falling(&falling_moments).unwrap();
    for r in 0..=n {
        let oracle: f64 = (0..=n)
            .map(|y| {
                let pmf =
                    ln_binomial(n, y).exp() * p.powi(y as i32) * (1.0 - p).powi((n - y) as i32);
                pmf * rising(y as f64, r).to_f64()
            })
            .sum();
        assert_relative_eq!(
            rising_moments[r as usize].to_f64(),
            oracle,
            max_relative = 1e-12
        );
    }
}

#[test]
fn stirling_recurrences() {
    for n in 1..=30u64 {
        for k in 1..=n {
            let s1 = stirling_first_unsigned(n, k).unwrap();
            let expected = BigInt::from(n - 1) * stirling_first_unsigned(n - 1, k).unwrap()
                + stirling_first_unsigned(n - 1, k - 1).unwrap();
            assert_eq!(s1, expected);
            let s2 = stirling_second(n, k).unwrap();
            let expected = BigInt::from(k) * stirling_second(n - 1, k).unwrap()
                + stirling_second(n - 1, k - 1).unwrap();
            assert_eq!(s2, expected);
        }
    }
    assert!(stirling_second(STIRLING_MAX_N + 1, 2).is_err());
}

/// `𝒞(n,k;s,r) = (1/k!) Σ_j (-1)^j C(k,j) (-js - r)_(n)` in exact rationals.
fn gen_fact_oracle(n: u64, k: u64, s: f64, r: f64) -> f64 {
    let s = BigRational::from_float(s).unwrap();
    let r = BigRational::from_float(r).unwrap();
    let mut total = BigRational::zero();
    let mut binom = BigInt::one();
    for j in 0..=k {
        let x = -(&r + &s * BigRational::from_integer(BigInt::from(j)));
        let mut rise = BigRational::one();
        for i in 0..n {
            rise *= &x + BigRational::from_integer(BigInt::from(i));
        }
        let term = rise * BigRational::from_integer(binom.clone());
        if j % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    let kfact: BigInt = (1..=k).map(BigInt::from).product();
    (total / BigRational::from_integer(kfact)).to_f64().unwrap()
}

#[test]
fn generalized_factorial_coefficient_against_rationals() {
    for &(s, r) in &[(0.5, -2.5), (0.3, 1.0), (0.75, -10.25), (0.5, 0.0)] {
        for n in 0..=14u64 {
            for k in 0..=n {
                let v = gen_fact_coeff(n, k, s, r).to_f64();
                let o = gen_fact_oracle(n, k, s, r);
                if o == 0.0 {
                    assert!(v.abs() <= 1e-300, "n={n} k={k}: {v}");
                } else {
                    assert!(
                        ((v - o) / o).abs() <= 1e-12,
                        "n={n} k={k} s={s} r={r}: {v} vs {o}"
                    );
                }
            }
        }
    }
}

#[test]
fn float_path_flags_cancellation() {
    let c = gen_fact_coeff_float(300, 60, 0.5, -80.0);
    assert_eq!(c.method, GfcMethod::Compensated);
    assert!(c.flagged());
    let exact = gen_fact_coeff_detailed(12, 3, 0.5, -4.0);
    assert_eq!(exact.method, GfcMethod::ExactRational);
    assert!(!exact.flagged());
}

#[test]
fn posterior_pmf_normalization_through_coefficients() {
    // Σ_k 𝒞(m,k;α,-n+αj) (θ/α+j)_(k) / (θ+n)_(m) = 1
    let (alpha, theta, n, j, m) = (0.5, 1.0, 5u64, 3u64, 10u64);
    let row = gen_fact_coeff_exact_row(m, alpha, -(n as f64) + alpha * j as f64, m);
    let norm = rising(theta + n as f64, m);
    let total: LogValue = row
        .iter()
        .enumerate()
        .map(|(k, c)| *c * rising(theta / alpha + j as f64, k as u64) / norm)
        .sum();
    assert_relative_eq!(total.to_f64(), 1.0, max_relative = 1e-13);
}

#[test]
fn prior_block_count_through_coefficients() {
    // P[K_n = k] = Π_{i<k}(θ+iα) 𝒞(n,k;α,0) / (α^k (θ)_(n))
    let p = Params::new(0.5, 1.0).unwrap();
    let n = 7u64;
    let dist = enumerate_distribution(&p, n).unwrap();
    for k in 1..=n {
        let oracle: f64 = dist
            .iter()
            .filter(|(s, _)| s.k() == k)
            .map(|(_, q)| q)
            .sum();
        let num: f64 = (0..k).map(|i| 1.0 + 0.5 * i as f64).product();
        let v = num * gen_fact_coeff(n, k, 0.5, 0.0).to_f64()
            / (0.5f64.powi(k as i32) * rising(1.0, n).to_f64());
        assert_relative_eq!(v, oracle, max_relative = 1e-12);
    }
}

#[test]
fn compensated_sum_survives_cancellation() {
    let terms = [
        LogValue::from_f64(1e15),
        LogValue::from_f64(3.0),
        LogValue::from_f64(-1e15),
    ];
    let (s, range) = compensated_sum(&terms);
    assert_relative_eq!(s.to_f64(), 3.0, max_relative = 1e-12);
    assert!(range > 1e14);
}

#[test]
fn log_value_arithmetic() {
    let a = LogValue::from_f64(-2.5);
    let b = LogValue::from_f64(4.0);
    assert_relative_eq!((a + b).to_f64(), 1.5, max_relative = 1e-15);
    assert_relative_eq!((a * b).to_f64(), -10.0, max_relative = 1e-15);
    assert_relative_eq!((b / a).to_f64(), -1.6, max_relative = 1e-15);
    assert_relative_eq!((a - b).to_f64(), -6.5, max_relative = 1e-15);
    assert!(a < b);
    assert!((a + (-a)).is_zero());
    let huge = LogValue::from_ln(1e6);
    assert_eq!(huge.to_f64(), f64::INFINITY);
    assert_relative_eq!((huge / huge).to_f64(), 1.0);
}
