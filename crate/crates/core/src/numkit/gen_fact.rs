//! Noncentral generalized factorial coefficients
//!
//! `𝒞(n, k; s, r) = (k!)^{-1} Σ_{0≤i≤k} (-1)^i C(k, i) (-i s - r)_(n)`
//!
//! The alternating sum cancels catastrophically in floating point once `n`
//! grows, so the default evaluation is exact: every finite `f64` is a
//! dyadic rational, and over a common power-of-two denominator the whole
//! sum is an integer computation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gamma::{ln_factorial, rising};
use super::log_value::compensated_sum;
use super::stirling::bigint_to_log_scaled;
use super::LogValue;

/// Orders up to this use the exact integer path.
pub const EXACT_MAX_N: u64 = 500;

/// Dynamic range above which a floating-point evaluation is flagged.
pub const CANCELLATION_FLAG: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfcMethod {
    ExactRational,
    Compensated,
}

/// A coefficient value with the route used to obtain it.
#[derive(Clone, Copy, Debug)]
pub struct GenFactCoeff {
    pub value: LogValue,
    pub method: GfcMethod,
    /// Largest summand magnitude over the result magnitude (1 for exact).
    pub dynamic_range: f64,
}

impl GenFactCoeff {
    /// True when the floating-point sum lost more than 12 digits.
    pub fn flagged(&self) -> bool {
        self.method == GfcMethod::Compensated && !(self.dynamic_range <= CANCELLATION_FLAG)
    }
}

/// `𝒞(n, k; s, r)` as a sign-tracked log value.
pub fn gen_fact_coeff(n: u64, k: u64, s: f64, r: f64) -> LogValue {
    gen_fact_coeff_detailed(n, k, s, r).value
}

/// Like [`gen_fact_coeff`], also reporting the evaluation route.
pub fn gen_fact_coeff_detailed(n: u64, k: u64, s: f64, r: f64) -> GenFactCoeff {
    if n <= EXACT_MAX_N && s.is_finite() && r.is_finite() {
        let value = ExactSum::new(n, s, r, k).coefficient(k);
        GenFactCoeff {
            value,
            method: GfcMethod::ExactRational,
            dynamic_range: 1.0,
        }
    } else {
        gen_fact_coeff_float(n, k, s, r)
    }
}

/// Alternating sum in floating point with Neumaier compensation.
pub fn gen_fact_coeff_float(n: u64, k: u64, s: f64, r: f64) -> GenFactCoeff {
    let mut terms = Vec::with_capacity(k as usize + 1);
    let ln_kfact = ln_factorial(k);
    for i in 0..=k {
        let binom = LogValue::from_ln(ln_kfact - ln_factorial(i) - ln_factorial(k - i));
        let mut term = binom * rising(-(i as f64) * s - r, n);
        if i % 2 == 1 {
            term = -term;
        }
        terms.push(term);
    }
    let (sum, dynamic_range) = compensated_sum(&terms);
    GenFactCoeff {
        value: sum / LogValue::from_ln(ln_kfact),
        method: GfcMethod::Compensated,
        dynamic_range,
    }
}

/// Exact `𝒞(n, k; s, r)` for all `k = 0..=k_max`.
pub fn gen_fact_coeff_exact_row(n: u64, s: f64, r: f64, k_max: u64) -> Vec<LogValue> {
    let sum = ExactSum::new(n, s, r, k_max);
    sum.row(k_max)
}

/// `𝒞(n, k; s, r)` for `k = 0..=n` from the three-term recurrence
/// `𝒞(t+1, k) = (t - r - s k) 𝒞(t, k) + s 𝒞(t, k-1)`, `𝒞(0, k) = δ_{k0}`.
///
/// Every term is nonnegative whenever `s ≥ 0` and `t - r - s k ≥ 0`, which
/// is the case for the posterior of the number of new blocks.
pub fn gen_fact_coeff_recurrence_row(n: u64, s: f64, r: f64) -> Vec<LogValue> {
    let mut row = vec![LogValue::ONE];
    let s_log = LogValue::from_f64(s);
    for t in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        for k in 0..=row.len() {
            let stay = row
                .get(k)
                .map(|&c| c * LogValue::from_f64(t as f64 - r - s * k as f64))
                .unwrap_or(LogValue::ZERO);
            let grow = if k > 0 {
                row[k - 1] * s_log
            } else {
                LogValue::ZERO
            };
            next.push(stay + grow);
        }
        row = next;
    }
    row
}

/// `v = mantissa · 2^exponent` with an odd mantissa (or zero).
fn dyadic(v: f64) -> (i64, i32) {
    if v == 0.0 {
        return (0, 0);
    }
    let bits = v.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mut mant, mut exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), exp_bits - 1075)
    };
    let tz = mant.trailing_zeros();
    mant >>= tz;
    exp += tz as i32;
    if v < 0.0 {
        mant = -mant;
    }
    (mant, exp)
}

/// Shared state of the exact evaluation: the integer numerators
/// `f(i) = Π_{t<n} (t·D - i·S - R)` where `s = S/D`, `r = R/D`, `D = 2^e`.
struct ExactSum {
    /// `D^n = 2^denominator_pow2`
    denominator_pow2: u64,
    numerators: Vec<BigInt>,
}

impl ExactSum {
    fn new(n: u64, s: f64, r: f64, k_max: u64) -> Self {
        let (ms, es) = dyadic(s);
        let (mr, er) = dyadic(r);
        let min_exp = match (ms == 0, mr == 0) {
            (true, true) => 0,
            (true, false) => er,
            (false, true) => es,
            (false, false) => es.min(er),
        };
        let e = (-min_exp).max(0) as u32;
        let scale = |m: i64, ex: i32| -> BigInt {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from(m) << ((ex + e as i32) as u32)
            }
        };
        let big_s = scale(ms, es);
        let big_r = scale(mr, er);
        let big_d = BigInt::one() << e;
        let numerators = (0..=k_max)
            .map(|i| {
                let base = -(BigInt::from(i) * &big_s) - &big_r;
                let mut acc = BigInt::one();
                let mut factor = base;
                for _ in 0..n {
                    acc *= &factor;
                    if acc.is_zero() {
                        break;
                    }
                    factor += &big_d;
                }
                acc
            })
            .collect();
        ExactSum {
            denominator_pow2: n * e as u64,
            numerators,
        }
    }

    fn finish(&self, sum: &BigInt, k: u64) -> LogValue {
        bigint_to_log_scaled(sum, self.denominator_pow2) / LogValue::from_ln(ln_factorial(k))
    }

    fn coefficient(&self, k: u64) -> LogValue {
        let mut binom = BigInt::one();
        let mut sum = BigInt::zero();
        for i in 0..=k {
            if i > 0 {
                binom = binom * BigInt::from(k - i + 1) / BigInt::from(i);
            }
            let term = &binom * &self.numerators[i as usize];
            if i % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        self.finish(&sum, k)
    }

    fn row(&self, k_max: u64) -> Vec<LogValue> {
        // Pascal rows with the alternating sign folded in.
        let mut pascal: Vec<BigInt> = vec![BigInt::one()];
        let mut out = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            if k > 0 {
                let mut next = Vec::with_capacity(pascal.len() + 1);
                next.push(BigInt::one());
                for w in pascal.windows(2) {
                    next.push(&w[0] + &w[1]);
                }
                next.push(BigInt::one());
                pascal = next;
            }
            let mut sum = BigInt::zero();
            for (i, b) in pascal.iter().enumerate() {
                let term = b * &self.numerators[i];
                if i % 2 == 1 {
                    sum -= term;
                } else {
                    sum += term;
                }
            }
            out.push(self.finish(&sum, k));
        }
        out
    }
}
