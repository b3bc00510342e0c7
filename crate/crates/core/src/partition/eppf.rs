use super::{FrequencyCounts, Params};
use crate::error::{Error, Result};
use crate::numkit::{ln_affine_product, ln_gamma_ratio};

/// Log-probability of one set partition with the given block sizes:
///
/// `ln [Π_{i=1}^{k-1}(θ + iα) / (θ+1)_(n-1)] + Σ_l m_l ln (1-α)_(l-1)`
///
/// This is the usual `Π_{i<k}(θ+iα)/(θ)_(n)` with the factor `θ` cancelled,
/// so it stays finite at `θ = 0`.
pub fn eppf_log(params: &Params, part: &FrequencyCounts) -> Result<f64> {
    if part.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let n = part.n();
    let k = part.k();
    let mut ln =
        ln_affine_product(theta, alpha, 1, k - 1) - ln_gamma_ratio(theta + 1.0, (n - 1) as f64);
    for (l, m) in part.iter() {
        if l > 1 {
            ln += m as f64 * ln_gamma_ratio(1.0 - alpha, (l - 1) as f64);
        }
    }
    Ok(ln)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_observations() {
        let p = Params::new(0.3, 1.7).unwrap();
        let pair = FrequencyCounts::from_block_sizes(&[2]).unwrap();
        let split = FrequencyCounts::from_block_sizes(&[1, 1]).unwrap();
        assert_relative_eq!(
            eppf_log(&p, &pair).unwrap(),
            (0.7f64 / 2.7).ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            eppf_log(&p, &split).unwrap(),
            (2.0f64 / 2.7).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn theta_zero_and_ewens() {
        // three singletons at θ = 0: α · 2α / (1 · 2)
        let p = Params::new(0.4, 0.0).unwrap();
        let c = FrequencyCounts::from_block_sizes(&[1, 1, 1]).unwrap();
        assert_relative_eq!(
            eppf_log(&p, &c).unwrap(),
            (0.4f64 * 0.8 / 2.0).ln(),
            max_relative = 1e-14
        );
        // Ewens, blocks {2, 1}: θ · 1 / ((θ+1)(θ+2)) with θ cancelled
        let p = Params::new(0.0, 2.0).unwrap();
        let c = FrequencyCounts::from_block_sizes(&[2, 1]).unwrap();
        assert_relative_eq!(
            eppf_log(&p, &c).unwrap(),
            (2.0f64 / 12.0).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn empty_is_error() {
        let p = Params::new(0.5, 1.0).unwrap();
        assert_eq!(
            eppf_log(&p, &FrequencyCounts::default()),
            Err(Error::EmptyPartition)
        );
    }
}
