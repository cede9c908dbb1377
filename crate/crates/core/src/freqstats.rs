//! Frequency spectra W_D(k), log2-binned views and vocabulary growth curves.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::TokenSequence;
use crate::{Error, Result};

/// Per-k distinct word counts of one text (or an average over sections, in
/// which case counts are fractional).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyDistribution {
    counts: BTreeMap<u64, f64>,
    w_total: f64,
    w_distinct: f64,
}

impl FrequencyDistribution {
    /// Count token frequencies. An empty sequence gives the empty
    /// distribution with `W_T = W_D = 0`.
    pub fn from_tokens(tokens: &TokenSequence) -> Self {
        let mut per_word: HashMap<&str, u64> = HashMap::new();
        for t in &tokens.tokens {
            *per_word.entry(t.as_str()).or_insert(0) += 1;
        }
        let mut counts: BTreeMap<u64, f64> = BTreeMap::new();
        for &k in per_word.values() {
            *counts.entry(k).or_insert(0.0) += 1.0;
        }
        Self::from_counts(counts)
    }

    /// Build from an explicit k -> W_D(k) map (fractional values allowed).
    pub fn from_counts(counts: BTreeMap<u64, f64>) -> Self {
        let mut counts = counts;
        counts.retain(|_, v| *v > 0.0);
        let w_distinct: f64 = counts.values().sum();
        let w_total: f64 = counts.iter().map(|(&k, &v)| k as f64 * v).sum();
        Self { counts, w_total, w_distinct }
    }

    /// W_D(k), the number of distinct words occurring exactly k times.
    pub fn count(&self, k: u64) -> f64 {
        self.counts.get(&k).copied().unwrap_or(0.0)
    }

    /// P(k) = W_D(k) / W_D.
    pub fn p(&self, k: u64) -> f64 {
        if self.w_distinct == 0.0 {
            0.0
        } else {
            self.count(k) / self.w_distinct
        }
    }

    /// Total tokens W_T.
    pub fn w_total(&self) -> f64 {
        self.w_total
    }

    /// Total distinct words W_D.
    pub fn w_distinct(&self) -> f64 {
        self.w_distinct
    }

    /// Largest k with W_D(k) > 0, or 0 for the empty distribution.
    pub fn k_max(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Average occurrence count <k> = W_T / W_D.
    pub fn mean_k(&self) -> f64 {
        if self.w_distinct == 0.0 {
            0.0
        } else {
            self.w_total / self.w_distinct
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Iterate over (k, W_D(k)) pairs in increasing k.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Dense normalized vector `p[k-1] = P(k)` for k = 1..=k_max.
    pub fn p_vec(&self, k_max: usize) -> Vec<f64> {
        let mut p = vec![0.0; k_max];
        for (&k, &v) in &self.counts {
            if (k as usize) <= k_max {
                p[k as usize - 1] = v / self.w_distinct;
            }
        }
        p
    }
}

/// One log2 bin of a frequency spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub k_low: u64,
    pub k_high: u64,
    /// Geometric mean of the bin endpoints, the log-log plotting abscissa.
    pub k_rep: f64,
    /// Arithmetic mean of P(k) over every integer k in the bin, zeros
    /// included.
    pub mean_p: f64,
}

/// Log2-binned view: bin i spans [2^(i-1), 2^i - 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDistribution {
    pub bins: Vec<Bin>,
}

/// Bin boundaries [2^(i-1), 2^i - 1] covering [1, k_max].
pub(crate) fn log2_bin_bounds(k_max: u64) -> Vec<(u64, u64)> {
    let mut bounds = Vec::new();
    let mut low = 1u64;
    while low <= k_max {
        let high = 2 * low - 1;
        bounds.push((low, high));
        low *= 2;
    }
    bounds
}

/// Bin a spectrum into log2 bins.
pub fn log2_bin(dist: &FrequencyDistribution) -> Result<BinnedDistribution> {
    if dist.is_empty() {
        return Err(Error::InvalidInput("cannot bin an empty distribution".into()));
    }
    let bins = log2_bin_bounds(dist.k_max())
        .into_iter()
        .map(|(k_low, k_high)| {
            let width = (k_high - k_low + 1) as f64;
            let sum_p: f64 = dist
                .counts
                .range(k_low..=k_high)
                .map(|(_, &v)| v / dist.w_distinct)
                .sum();
            Bin {
                k_low,
                k_high,
                k_rep: ((k_low as f64) * (k_high as f64)).sqrt(),
                mean_p: sum_p / width,
            }
        })
        .collect();
    Ok(BinnedDistribution { bins })
}

/// Provenance of a growth curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveLabel {
    Real,
    Randomized,
    RbtProjected,
    OffsetSection,
}

/// Distinct words w_D as a function of tokens read w_T; `values[i]` is
/// w_D(w_T = i + 1). Token-derived curves are integer valued; expected
/// curves from the random book transformation are real valued.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCurve {
    pub values: Vec<f64>,
    pub label: CurveLabel,
}

impl GrowthCurve {
    /// Number of tokens the curve covers.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Final value w_D(W_T).
    pub fn final_distinct(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

pub(crate) fn growth_from_slice(tokens: &[String], label: CurveLabel) -> GrowthCurve {
    let mut seen: HashSet<&str> = HashSet::with_capacity(tokens.len() / 4);
    let mut values = Vec::with_capacity(tokens.len());
    let mut distinct = 0u64;
    for t in tokens {
        if seen.insert(t.as_str()) {
            distinct += 1;
        }
        values.push(distinct as f64);
    }
    GrowthCurve { values, label }
}

/// Vocabulary growth curve of a full text.
pub fn vocabulary_growth(tokens: &TokenSequence) -> Result<GrowthCurve> {
    if tokens.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(growth_from_slice(&tokens.tokens, CurveLabel::Real))
}

/// Convenience shorthand for `FrequencyDistribution::from_tokens`.
pub fn frequency_distribution(tokens: &TokenSequence) -> FrequencyDistribution {
    FrequencyDistribution::from_tokens(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenSequence;

    fn seq(words: &[&str]) -> TokenSequence {
        TokenSequence::new(words.iter().map(|s| s.to_string()).collect(), "test")
    }

    #[test]
    fn distribution_direct_count() {
        let d = frequency_distribution(&seq(&["a", "b", "a", "c", "a", "b"]));
        assert_eq!(d.count(1), 1.0);
        assert_eq!(d.count(2), 1.0);
        assert_eq!(d.count(3), 1.0);
        assert_eq!(d.w_total(), 6.0);
        assert_eq!(d.w_distinct(), 3.0);
        assert_eq!(d.mean_k(), 2.0);
    }

    #[test]
    fn distribution_single_token() {
        let d = frequency_distribution(&seq(&["x"]));
        assert_eq!(d.count(1), 1.0);
        assert_eq!(d.w_total(), 1.0);
        assert_eq!(d.w_distinct(), 1.0);
    }

    #[test]
    fn distribution_empty_allowed() {
        let d = frequency_distribution(&seq(&[]));
        assert!(d.is_empty());
        assert_eq!(d.w_total(), 0.0);
        assert_eq!(d.w_distinct(), 0.0);
    }

    #[test]
    fn distribution_invariants() {
        let d = frequency_distribution(&seq(&["a", "b", "a", "c", "a", "b", "d"]));
        let sum_wd: f64 = d.iter().map(|(_, v)| v).sum();
        let sum_kwd: f64 = d.iter().map(|(k, v)| k as f64 * v).sum();
        assert_eq!(sum_wd, d.w_distinct());
        assert_eq!(sum_kwd, d.w_total());
        let sum_p: f64 = d.iter().map(|(k, _)| d.p(k)).sum();
        assert!((sum_p - 1.0).abs() < 1e-12);
        let mean: f64 = d.iter().map(|(k, _)| k as f64 * d.p(k)).sum();
        assert!((mean - d.mean_k()).abs() < 1e-12);
    }

    #[test]
    fn log2_bin_means() {
        // W_D(k) = [4,2,2,1,1,1,1] for k = 1..7, W_D = 12
        let mut counts = BTreeMap::new();
        for (k, v) in [(1, 4.0), (2, 2.0), (3, 2.0), (4, 1.0), (5, 1.0), (6, 1.0), (7, 1.0)] {
            counts.insert(k, v);
        }
        let d = FrequencyDistribution::from_counts(counts);
        let b = log2_bin(&d).unwrap();
        assert_eq!(b.bins.len(), 3);
        assert_eq!((b.bins[0].k_low, b.bins[0].k_high), (1, 1));
        assert!((b.bins[0].mean_p - 4.0 / 12.0).abs() < 1e-12);
        assert_eq!((b.bins[1].k_low, b.bins[1].k_high), (2, 3));
        assert!((b.bins[1].mean_p - 2.0 / 12.0).abs() < 1e-12);
        assert_eq!((b.bins[2].k_low, b.bins[2].k_high), (4, 7));
        assert!((b.bins[2].mean_p - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn log2_bin_single_word() {
        let d = frequency_distribution(&seq(&["x"]));
        let b = log2_bin(&d).unwrap();
        assert_eq!(b.bins.len(), 1);
        assert_eq!((b.bins[0].k_low, b.bins[0].k_high), (1, 1));
        assert!((b.bins[0].mean_p - 1.0).abs() < 1e-12);
        assert!((b.bins[0].k_rep - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log2_bin_rejects_empty() {
        let d = frequency_distribution(&seq(&[]));
        assert!(log2_bin(&d).is_err());
    }

    #[test]
    fn bin_sizes_cover_power_of_two() {
        // sum of bin sizes = smallest power-of-two cover of [1, k_max]
        for k_max in [1u64, 2, 3, 7, 8, 100, 1000] {
            let bounds = log2_bin_bounds(k_max);
            let total: u64 = bounds.iter().map(|(lo, hi)| hi - lo + 1).sum();
            let cover = (k_max + 1).next_power_of_two().max(2) - 1;
            assert_eq!(total, cover, "k_max={k_max}");
            // contiguous partition starting at 1
            assert_eq!(bounds[0].0, 1);
            for w in bounds.windows(2) {
                assert_eq!(w[0].1 + 1, w[1].0);
            }
        }
    }

    #[test]
    fn growth_basic() {
        let g = vocabulary_growth(&seq(&["a", "b", "a"])).unwrap();
        assert_eq!(g.values, vec![1.0, 2.0, 2.0]);
    }

    #[test]
    fn growth_all_distinct_is_identity() {
        let g = vocabulary_growth(&seq(&["a", "b", "c", "d", "e"])).unwrap();
        assert_eq!(g.values, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn growth_first_word_distinct_and_rejects_empty() {
        let g = vocabulary_growth(&seq(&["z", "z"])).unwrap();
        assert_eq!(g.values[0], 1.0);
        assert!(vocabulary_growth(&seq(&[])).is_err());
    }

    #[test]
    fn growth_final_matches_distribution() {
        let s = seq(&["a", "b", "a", "c", "b", "b", "d"]);
        let g = vocabulary_growth(&s).unwrap();
        let d = frequency_distribution(&s);
        assert_eq!(g.final_distinct(), d.w_distinct());
    }
}
