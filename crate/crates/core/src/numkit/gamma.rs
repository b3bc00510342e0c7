use super::LogValue;
use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// Arguments at or above this use the asymptotic series directly.
const STIRLING_MIN: f64 = 10.0;

/// B_{2k} / (2k (2k-1)) for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Correction term of Stirling's series, `ln Γ(z) - [(z - 1/2) ln z - z + ln √(2π)]`.
fn stirling_tail(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(z)` for `z > 0`. Returns NaN outside the domain.
pub fn ln_gamma(z: f64) -> f64 {
    if !(z > 0.0) {
        return f64::NAN;
    }
    if z == f64::INFINITY {
        return z;
    }
    if z <= 21.0 && z == z.floor() {
        return ln_factorial(z as u64 - 1);
    }
    let mut shift = 1.0;
    let mut w = z;
    while w < STIRLING_MIN {
        shift *= w;
        w += 1.0;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + stirling_tail(w) - shift.ln()
}

/// `ln Γ(x + a) - ln Γ(x)` for `x > 0`, `x + a > 0`, with `a` any real.
///
/// The large-argument branch differences the Stirling expansions
/// analytically so that no large logarithms cancel; this keeps ratios such
/// as `Γ(θ+n+α+m)/Γ(θ+n+1+m)` accurate to a few ulps even when `m` is
/// in the tens of thousands.
pub fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    let y = x + a;
    if !(x > 0.0) || !(y > 0.0) {
        return f64::NAN;
    }
    if a == 0.0 {
        return 0.0;
    }
    let lo = x.min(y);
    if lo < STIRLING_MIN {
        // Γ(x+a)/Γ(x) = [Γ(x+a+k)/Γ(x+k)] · Π_{t<k} (x+t)/(x+a+t)
        let k = (STIRLING_MIN - lo).ceil();
        let mut ratio = 1.0;
        let mut t = 0.0;
        while t < k {
            ratio *= (x + t) / (y + t);
            t += 1.0;
        }
        return ln_gamma_ratio(x + k, a) + ratio.ln();
    }
    (x - 0.5) * (a / x).ln_1p() + a * y.ln() - a + stirling_tail(y) - stirling_tail(x)
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 20 {
        return ((1..=n).product::<u64>() as f64).ln();
    }
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)` for integers `0 <= k <= n`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln (x)_(a) = ln Γ(x + a) - ln Γ(x)`, the log of the rising factorial
/// with a real order. Integer orders reproduce `x (x+1) … (x+a-1)`.
pub fn log_rising(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) || !(x + a > 0.0) {
        return Err(domain(format!(
            "log_rising needs x > 0 and x + a > 0, got x = {x}, a = {a}"
        )));
    }
    Ok(ln_gamma_ratio(x, a))
}

/// Rising factorial `x (x+1) … (x+k-1)` for any real `x`, sign tracked.
pub fn rising(x: f64, k: u64) -> LogValue {
    if k == 0 {
        return LogValue::ONE;
    }
    let kf = k as f64;
    if x > 0.0 {
        return LogValue::from_ln(ln_gamma_ratio(x, kf));
    }
    if x == x.floor() && -x < kf {
        // one factor is exactly zero
        return LogValue::ZERO;
    }
    // Factors x, x+1, …, x+p-1 are negative.
    let p = (-x).ceil().min(kf);
    let neg_part = ln_gamma_ratio(-x - p + 1.0, p);
    let pos_part = if p < kf {
        ln_gamma_ratio(x + p, kf - p)
    } else {
        0.0
    };
    let sign = if (p as u64) % 2 == 1 { -1 } else { 1 };
    LogValue::new(sign, neg_part + pos_part)
}

/// Falling factorial `x (x-1) … (x-k+1)`, sign tracked.
pub fn falling(x: f64, k: u64) -> LogValue {
    let r = rising(-x, k);
    if k % 2 == 1 {
        -r
    } else {
        r
    }
}

/// `ln Π_{t=start}^{start+count-1} (θ + t α)`; every factor must be positive.
///
/// With `α > 0` this is `count·ln α + ln (θ/α + start)_(count)`; with
/// `α = 0` every factor equals `θ`.
pub(crate) fn ln_affine_product(theta: f64, alpha: f64, start: u64, count: u64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    if alpha == 0.0 {
        count as f64 * theta.ln()
    } else {
        count as f64 * alpha.ln() + ln_gamma_ratio(theta / alpha + start as f64, count as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn ln_gamma_known_values() {
        assert_relative_eq!(
            ln_gamma(0.5),
            std::f64::consts::PI.sqrt().ln(),
            max_relative = 1e-13
        );
        assert_relative_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(ln_gamma(2.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(ln_gamma(11.0), 3_628_800f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(
            ln_factorial(20),
            2_432_902_008_176_640_000f64.ln(),
            max_relative = 1e-15
        );
        assert!(ln_gamma(0.0).is_nan());
        assert!(ln_gamma(-1.5).is_nan());
    }

    #[test]
    fn ln_gamma_agrees_with_statrs() {
        for &z in &[
            1e-3, 0.1, 0.7, 1.5, 3.3, 9.99, 10.0, 17.25, 123.456, 1e4, 7.15e4, 1e7,
        ] {
            let ours = ln_gamma(z);
            let reference = statrs::function::gamma::ln_gamma(z);
            assert!(
                (ours - reference).abs() <= 1e-13 * ours.abs().max(1.0),
                "z = {z}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn log_rising_examples() {
        assert_relative_eq!(
            log_rising(2.0, 3.0).unwrap(),
            24f64.ln(),
            max_relative = 1e-15
        );
        assert_eq!(log_rising(7.3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            log_rising(0.5, 2.0).unwrap(),
            0.75f64.ln(),
            max_relative = 1e-14
        );
        assert!(log_rising(0.0, 1.0).is_err());
        assert!(log_rising(1.0, -2.0).is_err());
    }

    #[test]
    fn large_argument_ratio_matches_direct_product() {
        // (921.75)_(7) by direct multiplication
        let direct: f64 = (0..7).map(|t| (921.75 + t as f64).ln()).sum();
        assert_relative_eq!(ln_gamma_ratio(921.75, 7.0), direct, max_relative = 1e-15);
        let direct: f64 = (0..5000).map(|t| (3.25 + t as f64).ln()).sum();
        assert_relative_eq!(ln_gamma_ratio(3.25, 5000.0), direct, max_relative = 1e-13);
    }

    #[test]
    fn rising_handles_negative_arguments() {
        assert_relative_eq!(
            rising(-0.5, 3).to_f64(),
            -0.5 * 0.5 * 1.5,
            max_relative = 1e-15
        );
        assert_relative_eq!(rising(-2.5, 2).to_f64(), -2.5 * -1.5, max_relative = 1e-15);
        assert!(rising(-2.0, 3).is_zero());
        assert_relative_eq!(rising(-2.0, 2).to_f64(), 2.0, max_relative = 1e-15);
        assert_eq!(rising(-3.7, 0), LogValue::ONE);
    }

    #[test]
    fn falling_examples() {
        assert_relative_eq!(falling(5.0, 2).to_f64(), 20.0, max_relative = 1e-15);
        assert_eq!(falling(-1.3, 0), LogValue::ONE);
        assert!(falling(2.0, 3).is_zero());
        assert_relative_eq!(
            falling(0.5, 3).to_f64(),
            0.5 * -0.5 * -1.5,
            max_relative = 1e-15
        );
    }

    proptest! {
        #[test]
        fn log_rising_is_additive_in_order(x in 1e-3..50.0f64, a in 0.0..30.0f64, b in 0.0..30.0f64) {
            let lhs = log_rising(x, a + b).unwrap();
            let rhs = log_rising(x, a).unwrap() + log_rising(x + a, b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
        }

        #[test]
        fn falling_is_signed_rising_of_negation(x in -20i32..20, k in 0u64..15) {
            let x = f64::from(x);
            let lhs = falling(x, k);
            let direct: f64 = (0..k).map(|t| x - t as f64).product();
            prop_assert!((lhs.to_f64() - direct).abs() <= 1e-12 * direct.abs().max(1.0));
            let mut rhs = rising(-x, k);
            if k % 2 == 1 { rhs = -rhs; }
            prop_assert!(lhs.rel_diff(&rhs) <= 1e-14);
        }
    }
}
