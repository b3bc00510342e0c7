//! Exhaustive small-sample distributions, used as exact oracles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{eppf_log, ConditionalState, FrequencyCounts, Params};
use crate::error::{Error, Result};

pub const ENUMERATION_MAX_N: u64 = 9;
pub const CONDITIONAL_ENUMERATION_MAX_M: u64 = 10;

/// Integer partitions of `n` as `(l, m_l)` lists, parts at most `max_part`.
fn integer_partitions(n: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        integer_partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

/// Number of set partitions of `{1..n}` with the given shape:
/// `n! / Π_l (l!^{m_l} m_l!)`.
pub fn shape_multiplicity(shape: &FrequencyCounts) -> BigInt {
    let mut denom = BigInt::one();
    for (l, m) in shape.iter() {
        denom *= factorial(l).pow(m as u32) * factorial(m);
    }
    factorial(shape.n()) / denom
}

/// Exact law of the partition shape of `n ≤ 9` observations.
pub fn enumerate_distribution(params: &Params, n: u64) -> Result<BTreeMap<FrequencyCounts, f64>> {
    if n == 0 {
        return Err(Error::EmptyPartition);
    }
    if n > ENUMERATION_MAX_N {
        return Err(Error::TooLarge {
            what: "partition enumeration",
            n,
            limit: ENUMERATION_MAX_N,
        });
    }
    let mut shapes = Vec::new();
    integer_partitions(n, n, &mut Vec::new(), &mut shapes);
    let mut out = BTreeMap::new();
    for sizes in shapes {
        let shape = FrequencyCounts::from_block_sizes(&sizes)?;
        let mult = shape_multiplicity(&shape).to_f64().expect("small integer");
        let p = mult * eppf_log(params, &shape)?.exp();
        out.insert(shape, p);
    }
    Ok(out)
}

/// One terminal state of the conditional enumeration.
#[derive(Clone, Debug)]
pub struct ConditionalOutcome {
    pub state: ConditionalState,
    pub probability: f64,
}

/// Exact law of the continuation of `initial` by `m ≤ 10` draws, obtained by
/// pushing probability mass through the predictive rule one draw at a time.
/// States are the ordered block-size vectors (initial blocks first, new
/// blocks in order of creation).
pub fn enumerate_conditional(
    params: &Params,
    initial: &[u64],
    m: u64,
) -> Result<Vec<ConditionalOutcome>> {
    if m > CONDITIONAL_ENUMERATION_MAX_M {
        return Err(Error::TooLarge {
            what: "conditional enumeration",
            n: m,
            limit: CONDITIONAL_ENUMERATION_MAX_M,
        });
    }
    if initial.contains(&0) {
        return Err(Error::InvalidCounts("block sizes must be positive".into()));
    }
    let (alpha, theta) = (params.alpha(), params.theta());
    let mut layer: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    layer.insert(initial.to_vec(), 1.0);
    for _ in 0..m {
        let mut next: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
        for (sizes, p) in layer {
            let i: u64 = sizes.iter().sum();
            let k = sizes.len();
            if i == 0 {
                *next.entry(vec![1]).or_insert(0.0) += p;
                continue;
            }
            let total = theta + i as f64;
            let mut grown = sizes.clone();
            grown.push(1);
            *next.entry(grown).or_insert(0.0) += p * (theta + k as f64 * alpha) / total;
            for b in 0..k {
                let mut grown = sizes.clone();
                grown[b] += 1;
                *next.entry(grown).or_insert(0.0) += p * (sizes[b] as f64 - alpha) / total;
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .map(|(sizes, probability)| ConditionalOutcome {
            state: ConditionalState::from_final_sizes(initial, &sizes),
            probability,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn shape_counts_sum_to_bell_numbers() {
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
        for n in 1..=9u64 {
            let mut shapes = Vec::new();
            integer_partitions(n, n, &mut Vec::new(), &mut shapes);
            let total: BigInt = shapes
                .iter()
                .map(|s| shape_multiplicity(&FrequencyCounts::from_block_sizes(s).unwrap()))
                .sum();
            assert_eq!(total, BigInt::from(bell[n as usize]));
        }
    }

    #[test]
    fn two_observations() {
        let p = Params::new(0.5, 1.0).unwrap();
        let d = enumerate_distribution(&p, 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_relative_eq!(
            d[&FrequencyCounts::from_block_sizes(&[2]).unwrap()],
            0.25,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            d[&FrequencyCounts::from_block_sizes(&[1, 1]).unwrap()],
            0.75,
            max_relative = 1e-14
        );
    }

    #[test]
    fn normalization() {
        let p = Params::new(0.5, 1.0).unwrap();
        let total: f64 = enumerate_distribution(&p, 6).unwrap().values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(enumerate_distribution(&p, 10).is_err());
    }

    #[test]
    fn conditional_agrees_with_unconditional_from_empty() {
        let p = Params::new(0.25, 0.5).unwrap();
        let mut from_seq: BTreeMap<FrequencyCounts, f64> = BTreeMap::new();
        for o in enumerate_conditional(&p, &[], 6).unwrap() {
            *from_seq.entry(o.state.final_counts()).or_insert(0.0) += o.probability;
        }
        let direct = enumerate_distribution(&p, 6).unwrap();
        assert_eq!(from_seq.len(), direct.len());
        for (shape, q) in direct {
            assert_relative_eq!(from_seq[&shape], q, max_relative = 1e-12);
        }
    }
}
