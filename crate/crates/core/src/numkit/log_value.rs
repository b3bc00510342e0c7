use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Products and quotients of factorial-sized quantities stay finite, and
/// sums resolve signs through a log-sum-exp step. A sign of zero is exact
/// zero; the magnitude field is ignored in that case.
#[derive(Clone, Copy, Debug)]
pub struct LogValue {
    sign: i8,
    ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        ln_abs: 0.0,
    };

    /// Builds a value from a sign and a log-magnitude. Any nonzero sign is
    /// normalized to +1 or -1; a log-magnitude of -inf collapses to zero.
    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    /// A positive value given by its logarithm.
    pub fn from_ln(ln: f64) -> Self {
        Self::new(1, ln)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else if v > 0.0 {
            Self::new(1, v.ln())
        } else {
            Self::new(-1, (-v).ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_abs
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogValue {
                sign: 1,
                ln_abs: self.ln_abs,
            }
        }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return if k > 0 {
                Self::ZERO
            } else {
                Self::new(1, f64::INFINITY)
            };
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        Self::new(sign, self.ln_abs * f64::from(k))
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`, computed without
    /// leaving the log domain when both operands share a sign.
    pub fn rel_diff(&self, other: &LogValue) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (a, b) if a != b => {
                if a == 0 || b == 0 {
                    1.0
                } else {
                    2.0
                }
            }
            _ => {
                let d = (self.ln_abs - other.ln_abs).abs();
                -(-d).exp_m1()
            }
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl PartialEq for LogValue {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.ln_abs == other.ln_abs)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_abs.partial_cmp(&other.ln_abs),
                _ => other.ln_abs.partial_cmp(&self.ln_abs),
            },
            ord => Some(ord),
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.ln_abs),
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            LogValue::ZERO
        } else {
            LogValue::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    /// Division by zero yields a signed infinity, matching f64.
    fn div(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            LogValue::ZERO
        } else if rhs.sign == 0 {
            LogValue::new(self.sign, f64::INFINITY)
        } else {
            LogValue::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if big.ln_abs == f64::INFINITY {
            return big;
        }
        let d = small.ln_abs - big.ln_abs;
        if big.sign == small.sign {
            LogValue::new(big.sign, big.ln_abs + d.exp().ln_1p())
        } else if d == 0.0 {
            LogValue::ZERO
        } else {
            // |big| - |small| = |big| (1 - e^d)
            LogValue::new(big.sign, big.ln_abs + (-d.exp_m1()).ln())
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ZERO, |acc, v| acc + v)
    }
}

impl Product for LogValue {
    fn product<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ONE, |acc, v| acc * v)
    }
}

/// Sums log-domain terms after rescaling by the largest magnitude, with
/// Neumaier compensation on the rescaled values.
///
/// Returns the sum together with its dynamic range, i.e. the ratio of the
/// largest term magnitude to the magnitude of the result. A dynamic range
/// of 1e12 means roughly 12 of the 16 available digits were cancelled.
pub fn compensated_sum(terms: &[LogValue]) -> (LogValue, f64) {
    let max_ln = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_ln == f64::NEG_INFINITY {
        return (LogValue::ZERO, 1.0);
    }
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let v = f64::from(t.sign) * (t.ln_abs - max_ln).exp();
        let s = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - s) + v;
        } else {
            comp += (v - s) + sum;
        }
        sum = s;
    }
    let total = sum + comp;
    let value = LogValue::from_f64(total) * LogValue::from_ln(max_ln);
    let range = if total == 0.0 {
        f64::INFINITY
    } else {
        1.0 / total.abs()
    };
    (value, range)
}
