use std::fmt::Write;

use serde::Serialize;

/// Rate-function values on a grid, ascending in `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateCurve {
    pub alpha: f64,
    /// Block size; 0 for the block-count rate.
    pub l: u64,
    pub points: Vec<(f64, f64)>,
}

impl RateCurve {
    /// `(x, exp(-m I(x)))`, the large-deviation approximation of a right tail.
    pub fn tail(&self, m: f64) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|&(x, i)| (x, (-m * i).exp()))
            .collect()
    }

    /// CSV with header `x,I` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,I\n");
        for &(x, i) in &self.points {
            writeln!(out, "{},{}", format_full(x), format_full(i)).expect("writing to a String");
        }
        out
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip any `f64`.
pub fn format_full(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        lo + step * i as f64
                    }
                })
                .collect()
        }
    }
}
