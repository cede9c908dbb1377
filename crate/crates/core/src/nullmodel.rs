//! The random-book null model: uniform shuffles of the token multiset,
//! frequency-class half-read profiles, and shuffle-ensemble significance
//! bands.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::TokenSequence;
use crate::freqstats::{log2_bin_bounds, FrequencyDistribution};
use crate::{Error, Result};

/// Which per-class reading statistic to aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Share of a class's token occurrences inside the first half of the
    /// text.
    FractionAtHalf,
    /// Smallest prefix fraction t/W_T containing half of a class's token
    /// occurrences.
    PrefixForHalf,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::FractionAtHalf => write!(f, "fraction_at_half"),
            Metric::PrefixForHalf => write!(f, "prefix_for_half"),
        }
    }
}

/// One log2 bin of a half-read profile. Classes inside a bin are weighted
/// by their token totals k * W_D(k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfReadBin {
    pub k_low: u64,
    pub k_high: u64,
    pub fraction_at_half: f64,
    pub prefix_for_half: f64,
    pub class_token_total: f64,
}

/// Half-read statistics of one text, binned like the frequency spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfReadProfile {
    pub bins: Vec<HalfReadBin>,
}

impl HalfReadProfile {
    pub fn metric(&self, bin: usize, metric: Metric) -> f64 {
        match metric {
            Metric::FractionAtHalf => self.bins[bin].fraction_at_half,
            Metric::PrefixForHalf => self.bins[bin].prefix_for_half,
        }
    }
}

/// One bin of a shuffle-ensemble band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandBin {
    pub k_low: u64,
    pub k_high: u64,
    pub mean: f64,
    pub sigma: f64,
    pub sigma1_low: f64,
    pub sigma1_high: f64,
    pub sigma2_low: f64,
    pub sigma2_high: f64,
}

/// Ensemble mean and 1/2-sigma bands of a half-read metric under shuffling.
#[derive(Debug, Clone, PartialEq)]
pub struct NullBands {
    pub metric: Metric,
    pub bins: Vec<BandBin>,
}

/// Derive an independent per-member seed from (seed, index). SplitMix64
/// finalizer over the pair.
pub(crate) fn member_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform random permutation of the token multiset. Deterministic for a
/// fixed seed; leaves the frequency distribution invariant.
pub fn shuffle_book(tokens: &TokenSequence, seed: u64) -> TokenSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = tokens.tokens.clone();
    shuffled.shuffle(&mut rng);
    TokenSequence::new(shuffled, format!("{}:shuffled", tokens.source_id))
}

/// Per-frequency-class reading statistics, aggregated into log2 bins.
pub fn half_read_profile(tokens: &TokenSequence) -> Result<HalfReadProfile> {
    let w_total = tokens.len();
    if w_total < 2 {
        return Err(Error::InvalidInput("need at least two tokens".into()));
    }
    let dist = FrequencyDistribution::from_tokens(tokens);
    // per word: total count and count inside the first half
    let half = w_total / 2;
    let mut total: HashMap<&str, u64> = HashMap::new();
    let mut in_half: HashMap<&str, u64> = HashMap::new();
    for (i, t) in tokens.tokens.iter().enumerate() {
        *total.entry(t.as_str()).or_insert(0) += 1;
        if i < half {
            *in_half.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    // per class k: occurrences in the first half
    let k_max = dist.k_max();
    let mut class_in_half = vec![0u64; k_max as usize + 1];
    for (word, &k) in &total {
        class_in_half[k as usize] += in_half.get(word).copied().unwrap_or(0);
    }
    // per class k: smallest prefix holding half of the class's occurrences.
    // One pass over the text, tracking the running per-class occurrence count.
    let mut class_total = vec![0u64; k_max as usize + 1];
    for (_, &k) in &total {
        class_total[k as usize] += k;
    }
    let need: Vec<u64> = class_total.iter().map(|&n| n.div_ceil(2)).collect();
    let mut running = vec![0u64; k_max as usize + 1];
    let mut prefix_len = vec![0u64; k_max as usize + 1];
    let mut remaining_classes: usize = (1..=k_max as usize).filter(|&k| class_total[k] > 0).count();
    for (i, t) in tokens.tokens.iter().enumerate() {
        let k = total[t.as_str()] as usize;
        running[k] += 1;
        if prefix_len[k] == 0 && running[k] >= need[k] {
            prefix_len[k] = (i + 1) as u64;
            remaining_classes -= 1;
            if remaining_classes == 0 {
                break;
            }
        }
    }

    let w_total_f = w_total as f64;
    let bins = log2_bin_bounds(k_max)
        .into_iter()
        .map(|(k_low, k_high)| {
            let mut weight = 0.0;
            let mut frac = 0.0;
            let mut prefix = 0.0;
            for k in k_low..=k_high.min(k_max) {
                let tok = class_total[k as usize] as f64;
                if tok == 0.0 {
                    continue;
                }
                weight += tok;
                frac += class_in_half[k as usize] as f64;
                prefix += tok * (prefix_len[k as usize] as f64 / w_total_f);
            }
            HalfReadBin {
                k_low,
                k_high,
                fraction_at_half: if weight > 0.0 { frac / weight } else { 0.0 },
                prefix_for_half: if weight > 0.0 { prefix / weight } else { 0.0 },
                class_token_total: weight,
            }
        })
        .collect();
    Ok(HalfReadProfile { bins })
}

/// Shuffle-ensemble bands of a half-read metric. The binning is fixed by
/// the (shuffle-invariant) frequency distribution, so bins line up across
/// ensemble members.
pub fn null_bands(
    tokens: &TokenSequence,
    metric: Metric,
    ensemble: usize,
    seed: u64,
) -> Result<NullBands> {
    if ensemble < 2 {
        return Err(Error::InvalidInput("ensemble must be at least 2".into()));
    }
    let mut sums: Vec<f64> = Vec::new();
    let mut sq_sums: Vec<f64> = Vec::new();
    let mut bounds: Vec<(u64, u64)> = Vec::new();
    for member in 0..ensemble {
        let shuffled = shuffle_book(tokens, member_seed(seed, member as u64));
        let profile = half_read_profile(&shuffled)?;
        if member == 0 {
            sums = vec![0.0; profile.bins.len()];
            sq_sums = vec![0.0; profile.bins.len()];
            bounds = profile.bins.iter().map(|b| (b.k_low, b.k_high)).collect();
        }
        for (i, _) in profile.bins.iter().enumerate() {
            let v = profile.metric(i, metric);
            sums[i] += v;
            sq_sums[i] += v * v;
        }
    }
    let n = ensemble as f64;
    let bins = bounds
        .into_iter()
        .enumerate()
        .map(|(i, (k_low, k_high))| {
            let mean = sums[i] / n;
            let var = (sq_sums[i] / n - mean * mean).max(0.0) * n / (n - 1.0);
            let sigma = var.sqrt();
            BandBin {
                k_low,
                k_high,
                mean,
                sigma,
                sigma1_low: mean - sigma,
                sigma1_high: mean + sigma,
                sigma2_low: mean - 2.0 * sigma,
                sigma2_high: mean + 2.0 * sigma,
            }
        })
        .collect();
    Ok(NullBands { metric, bins })
}
