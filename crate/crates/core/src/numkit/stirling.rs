use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::LogValue;
use crate::error::{Error, Result};

/// Largest `n` for which Stirling numbers are tabulated.
pub const STIRLING_MAX_N: u64 = 64;

struct Tables {
    first: Vec<Vec<BigInt>>,
    second: Vec<Vec<BigInt>>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let size = STIRLING_MAX_N as usize + 1;
        let mut first = vec![vec![BigInt::zero(); size]; size];
        let mut second = vec![vec![BigInt::zero(); size]; size];
        first[0][0] = BigInt::one();
        second[0][0] = BigInt::one();
        for n in 1..size {
            for k in 1..=n {
                // |s(n,k)| = (n-1)|s(n-1,k)| + |s(n-1,k-1)|
                first[n][k] = &first[n - 1][k] * BigInt::from(n - 1) + &first[n - 1][k - 1];
                // S(n,k) = k S(n-1,k) + S(n-1,k-1)
                second[n][k] = &second[n - 1][k] * BigInt::from(k) + &second[n - 1][k - 1];
            }
        }
        Tables { first, second }
    })
}

fn check(n: u64) -> Result<()> {
    if n > STIRLING_MAX_N {
        Err(Error::TooLarge {
            what: "Stirling numbers",
            n,
            limit: STIRLING_MAX_N,
        })
    } else {
        Ok(())
    }
}

/// Unsigned Stirling number of the first kind `|s(n, k)|`: permutations of
/// `n` elements with exactly `k` cycles. Zero when `k > n`.
pub fn stirling_first_unsigned(n: u64, k: u64) -> Result<BigInt> {
    check(n)?;
    if k > n {
        return Ok(BigInt::zero());
    }
    Ok(tables().first[n as usize][k as usize].clone())
}

/// Stirling number of the second kind `S(n, k)`: set partitions of `n`
/// elements into `k` blocks. Zero when `k > n`.
pub fn stirling_second(n: u64, k: u64) -> Result<BigInt> {
    check(n)?;
    if k > n {
        return Ok(BigInt::zero());
    }
    Ok(tables().second[n as usize][k as usize].clone())
}

/// Natural log of an arbitrary-size integer as a [`LogValue`].
pub fn bigint_to_log(v: &BigInt) -> LogValue {
    bigint_to_log_scaled(v, 0)
}

/// `v / 2^pow2` as a [`LogValue`]. The power of two is folded into the
/// exponent before taking logs, so a result of moderate size keeps full
/// relative precision even when `v` has thousands of bits.
pub fn bigint_to_log_scaled(v: &BigInt, pow2: u64) -> LogValue {
    if v.is_zero() {
        return LogValue::ZERO;
    }
    let sign = if v.is_negative() { -1 } else { 1 };
    let mag = v.abs();
    let bits = mag.bits();
    let shift = bits.saturating_sub(64);
    let top: BigInt = &mag >> shift;
    let ln2_exp = shift as f64 - pow2 as f64;
    LogValue::new(
        sign,
        bigint_to_f64(&top).ln() + ln2_exp * std::f64::consts::LN_2,
    )
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Converts falling factorial moments `E[(Y)_[j]]`, `j = 0..=n`, into rising
/// factorial moments `E[(Y)_(r)]`, `r = 0..=n`, through
/// `(y)_(r) = Σ_i Σ_j |s(r,i)| S(i,j) (y)_[j]`.
pub fn rising_from_falling(falling_moments: &[LogValue]) -> Result<Vec<LogValue>> {
    if falling_moments.is_empty() {
        return Ok(Vec::new());
    }
    let n = falling_moments.len() as u64 - 1;
    check(n)?;
    let t = tables();
    let mut out = Vec::with_capacity(falling_moments.len());
    for r in 0..=n as usize {
        let mut acc = LogValue::ZERO;
        for (j, &mu) in falling_moments.iter().enumerate().take(r + 1) {
            // Σ_i |s(r,i)| S(i,j), exact
            let mut coeff = BigInt::zero();
            for i in j..=r {
                coeff += &t.first[r][i] * &t.second[i][j];
            }
            acc = acc + bigint_to_log(&coeff) * mu;
        }
        out.push(acc);
    }
    Ok(out)
}
