use crate::error::{domain, Result};

/// Real root `B₁(x)` of `(1-x)²B³ + 2(1-x)B² + (1-x)²B - 2x = 0` from the
/// trigonometric (Viète) formula, for `0 ≤ x < 1`.
pub fn closed_half_root(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!("B1 is defined for 0 <= x < 1, got {x}")));
    }
    let u = 1.0 - x;
    let p = 1.0 - 4.0 / (3.0 * u * u);
    let q = (16.0 - 18.0 * u * u - 54.0 * x * u) / (27.0 * u * u * u);
    let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    Ok(2.0 * (-p / 3.0).sqrt() * (arg.acos() / 3.0).cos() - 2.0 / (3.0 * u))
}

/// Closed-form rate of the singleton proportion at `α = 1/2`:
/// `x ln(B₁+1) + ln 2 - ln(1 + √(B₁² + 1))`, with `ln 2` at `x = 1`.
pub fn rate_closed_half(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!(
            "closed-form rate is defined on [0, 1], got {x}"
        )));
    }
    if x == 1.0 {
        return Ok(std::f64::consts::LN_2);
    }
    let b = closed_half_root(x)?;
    Ok(x * b.ln_1p() + std::f64::consts::LN_2 - (1.0 + b.hypot(1.0)).ln())
}

/// Left side of the cubic satisfied by `B₁`, for residual checks.
pub fn closed_half_cubic(x: f64, b: f64) -> f64 {
    let u = 1.0 - x;
    u * u * b * b * b + 2.0 * u * b * b + u * u * b - 2.0 * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert!(closed_half_root(0.0).unwrap().abs() < 1e-15);
        assert!(rate_closed_half(0.0).unwrap().abs() < 1e-12);
        assert!((rate_closed_half(1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(rate_closed_half(1.5).is_err());
        assert!(rate_closed_half(-0.1).is_err());
    }

    #[test]
    fn cubic_residual() {
        let b = closed_half_root(0.37).unwrap();
        assert!(closed_half_cubic(0.37, b).abs() < 1e-9);
    }
}
