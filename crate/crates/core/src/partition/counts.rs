use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Frequency-of-frequencies summary `{l → m_l}` of a partition.
///
/// Only positive multiplicities are stored, so two summaries of the same
/// partition shape compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FrequencyCounts {
    counts: BTreeMap<u64, u64>,
}

impl FrequencyCounts {
    /// Builds counts from `(frequency, multiplicity)` pairs. Repeated
    /// frequencies accumulate; zero frequencies are rejected and zero
    /// multiplicities are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (l, m) in pairs {
            if l == 0 {
                return Err(Error::InvalidCounts("frequency must be at least 1".into()));
            }
            if m > 0 {
                *counts.entry(l).or_insert(0) += m;
            }
        }
        Ok(FrequencyCounts { counts })
    }

    pub fn from_block_sizes(sizes: &[u64]) -> Result<Self> {
        Self::from_pairs(sizes.iter().map(|&s| (s, 1)))
    }

    /// Sample size `n = Σ l m_l`.
    pub fn n(&self) -> u64 {
        self.counts.iter().map(|(l, m)| l * m).sum()
    }

    /// Number of blocks `k = Σ m_l`.
    pub fn k(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `m_l`, zero when absent.
    pub fn get(&self, l: u64) -> u64 {
        self.counts.get(&l).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `(l, m_l)` pairs in increasing `l`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&l, &m)| (l, m))
    }

    /// Block sizes in decreasing order.
    pub fn block_sizes(&self) -> Vec<u64> {
        let mut sizes: Vec<u64> = self
            .iter()
            .flat_map(|(l, m)| std::iter::repeat_n(l, m as usize))
            .collect();
        sizes.reverse();
        sizes
    }

    pub fn max_frequency(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// A named observed partition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dataset {
    pub name: String,
    pub counts: FrequencyCounts,
}

/// Identifiers accepted by [`Dataset::builtin`].
pub const BUILTIN_DATASETS: [&str; 2] = ["mastigamoeba-nn", "mastigamoeba-n"];

impl Dataset {
    pub fn new(name: impl Into<String>, counts: FrequencyCounts) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidCounts("dataset name is empty".into()));
        }
        if counts.is_empty() {
            return Err(Error::EmptyPartition);
        }
        Ok(Dataset { name, counts })
    }

    /// EST libraries of Mastigamoeba balamuthi: non-normalized (`n = 715`,
    /// 460 genes) and normalized (`n = 363`, 248 genes).
    pub fn builtin(id: &str) -> Result<Self> {
        let pairs: &[(u64, u64)] = match id {
            "mastigamoeba-nn" => &[
                (1, 378),
                (2, 33),
                (3, 21),
                (4, 9),
                (5, 6),
                (6, 1),
                (7, 3),
                (8, 1),
                (9, 1),
                (10, 1),
                (13, 1),
                (15, 5),
            ],
            "mastigamoeba-n" => &[
                (1, 200),
                (2, 21),
                (3, 14),
                (4, 4),
                (5, 3),
                (6, 3),
                (7, 1),
                (9, 1),
                (14, 1),
            ],
            _ => {
                return Err(Error::InvalidCounts(format!(
                    "unknown builtin dataset '{id}' (known: {})",
                    BUILTIN_DATASETS.join(", ")
                )))
            }
        };
        Dataset::new(id, FrequencyCounts::from_pairs(pairs.iter().copied())?)
    }

    pub fn n(&self) -> u64 {
        self.counts.n()
    }

    pub fn j(&self) -> u64 {
        self.counts.k()
    }

    /// Number of singletons.
    pub fn m1(&self) -> u64 {
        self.counts.get(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_totals() {
        let c = FrequencyCounts::from_block_sizes(&[3, 1, 1, 2]).unwrap();
        assert_eq!(c.n(), 7);
        assert_eq!(c.k(), 4);
        assert_eq!(c.get(1), 2);
        assert_eq!(c.get(5), 0);
        assert_eq!(c.block_sizes(), vec![3, 2, 1, 1]);
        assert_eq!(
            c,
            FrequencyCounts::from_pairs([(1, 2), (2, 1), (3, 1), (4, 0)]).unwrap()
        );
        assert!(FrequencyCounts::from_pairs([(0, 2)]).is_err());
    }

    #[test]
    fn builtins() {
        let nn = Dataset::builtin("mastigamoeba-nn").unwrap();
        assert_eq!((nn.n(), nn.j(), nn.m1()), (715, 460, 378));
        let n = Dataset::builtin("mastigamoeba-n").unwrap();
        assert_eq!((n.n(), n.j(), n.m1()), (363, 248, 200));
        assert!(Dataset::builtin("nope").is_err());
    }

    #[test]
    fn empty_dataset_rejected() {
        let err = Dataset::new("x", FrequencyCounts::default()).unwrap_err();
        assert_eq!(err, Error::EmptyPartition);
    }
}
