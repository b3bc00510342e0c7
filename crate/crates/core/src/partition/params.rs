use serde::Serialize;

use crate::error::{Error, Result};

/// Model parameters `(α, θ)` with `0 ≤ α < 1` and `θ > -α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    alpha: f64,
    theta: f64,
}

impl Params {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        let valid = (0.0..1.0).contains(&alpha) && theta.is_finite() && theta > -alpha;
        if valid {
            Ok(Params { alpha, theta })
        } else {
            Err(Error::InvalidParams { alpha, theta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The one-parameter case `α = 0`.
    pub fn is_ewens(&self) -> bool {
        self.alpha == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain() {
        assert!(Params::new(0.5, 0.0).is_ok());
        assert!(Params::new(0.5, -0.49).is_ok());
        assert!(Params::new(0.5, -0.5).is_err());
        assert!(Params::new(0.0, 0.0).is_err());
        assert!(Params::new(1.0, 3.0).is_err());
        assert!(Params::new(-0.1, 3.0).is_err());
        assert!(Params::new(0.2, f64::NAN).is_err());
        assert!(Params::new(0.0, 2.0).unwrap().is_ewens());
    }
}
