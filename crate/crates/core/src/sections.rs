//! Section statistics: averaged n-th-part frequency spectra with periodic
//! boundaries, growth curves from arbitrary offsets, and the
//! translational-invariance measures xi_rms / xi_delta.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::TokenSequence;
use crate::freqstats::{growth_from_slice, CurveLabel, FrequencyDistribution, GrowthCurve};
use crate::{Error, Result};

/// How to cut a text into sections for averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionSpec {
    /// Section length is floor(W_T / n_parts).
    pub n_parts: usize,
    /// Number of random section placements averaged.
    pub sample_count: usize,
    /// Wrap sections past the end of the text back to the beginning.
    pub periodic: bool,
}

impl SectionSpec {
    pub fn new(n_parts: usize) -> Self {
        Self { n_parts, sample_count: 1_000, periodic: true }
    }
}

/// Translational-invariance statistics over three consecutive parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiStats {
    pub part_length: usize,
    pub xi_rms: f64,
    pub xi_delta: f64,
}

/// Average the frequency spectrum of `sample_count` random sections of
/// length floor(W_T / n_parts). Counts in the result are fractional.
pub fn section_distribution(
    tokens: &TokenSequence,
    spec: &SectionSpec,
    seed: u64,
) -> Result<FrequencyDistribution> {
    if spec.n_parts == 0 || spec.sample_count == 0 {
        return Err(Error::InvalidInput("n_parts and sample_count must be positive".into()));
    }
    let w_total = tokens.len();
    let section_len = w_total / spec.n_parts;
    if section_len == 0 {
        return Err(Error::InvalidInput(format!(
            "section length is zero (W_T = {w_total}, n_parts = {})",
            spec.n_parts
        )));
    }
    if spec.n_parts == 1 {
        // the section is the whole book; no sampling involved
        return Ok(FrequencyDistribution::from_tokens(tokens));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum_counts: BTreeMap<u64, f64> = BTreeMap::new();
    let mut word_counts: HashMap<&str, u64> = HashMap::new();
    for _ in 0..spec.sample_count {
        let start = rng.random_range(0..w_total);
        word_counts.clear();
        for i in 0..section_len {
            let idx = if spec.periodic {
                (start + i) % w_total
            } else {
                start + i
            };
            if idx >= w_total {
                return Err(Error::InvalidInput(
                    "section runs past the end of the text with periodic=false".into(),
                ));
            }
            *word_counts.entry(tokens.tokens[idx].as_str()).or_insert(0) += 1;
        }
        for &k in word_counts.values() {
            *sum_counts.entry(k).or_insert(0.0) += 1.0;
        }
    }
    let n = spec.sample_count as f64;
    for v in sum_counts.values_mut() {
        *v /= n;
    }
    Ok(FrequencyDistribution::from_counts(sum_counts))
}

/// Vocabulary growth of the consecutive window tokens[start .. start+length).
pub fn growth_from_offset(
    tokens: &TokenSequence,
    start: usize,
    length: usize,
) -> Result<GrowthCurve> {
    if length == 0 {
        return Err(Error::InvalidInput("window length must be positive".into()));
    }
    let end = start
        .checked_add(length)
        .ok_or_else(|| Error::InvalidInput("window overflows".into()))?;
    if end > tokens.len() {
        return Err(Error::InvalidInput(format!(
            "window [{start}, {end}) exceeds text length {}",
            tokens.len()
        )));
    }
    Ok(growth_from_slice(&tokens.tokens[start..end], CurveLabel::OffsetSection))
}

/// xi_rms and xi_delta over the three consecutive parts of length
/// `part_length` anchored at the start of the text. The average runs over
/// the ordered pairs (i, j) with i > j, i being the later part.
pub fn xi_stats(tokens: &TokenSequence, part_length: usize) -> Result<XiStats> {
    if part_length == 0 {
        return Err(Error::InvalidInput("part_length must be positive".into()));
    }
    if tokens.len() < 3 * part_length {
        return Err(Error::InvalidInput(format!(
            "text too short: need 3 * {part_length} tokens, have {}",
            tokens.len()
        )));
    }
    let curves: Vec<GrowthCurve> = (0..3)
        .map(|i| growth_from_offset(tokens, i * part_length, part_length))
        .collect::<Result<_>>()?;

    let len = part_length as f64;
    let mut rms_sum = 0.0;
    let mut delta_sum = 0.0;
    let mut pairs = 0.0;
    for i in 1..3 {
        for j in 0..i {
            let (later, earlier) = (&curves[i].values, &curves[j].values);
            let mut sq = 0.0;
            let mut diff = 0.0;
            for (a, b) in later.iter().zip(earlier) {
                let d = a - b;
                sq += d * d;
                diff += d;
            }
            rms_sum += (sq / len).sqrt();
            delta_sum += diff / len;
            pairs += 1.0;
        }
    }
    Ok(XiStats { part_length, xi_rms: rms_sum / pairs, xi_delta: delta_sum / pairs })
}
