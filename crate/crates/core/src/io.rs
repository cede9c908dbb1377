//! File schemas: CSV emitters/parsers for spectra, binned spectra and
//! growth curves, and JSON records for xi statistics, half-read profiles
//! and fit results.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! emit -> parse -> emit is a byte-level fixed point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::freqstats::{Bin, BinnedDistribution, CurveLabel, FrequencyDistribution, GrowthCurve};
use crate::nullmodel::{HalfReadProfile, Metric, NullBands};
use crate::rbt::{FitResult, FormKind, ParametricForm};
use crate::sections::XiStats;
use crate::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn field<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {name}: {s:?}")))
}

fn split_row<'a>(row: &'a str, line: usize, n: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != n {
        return Err(parse_err(line, format!("expected {n} fields, got {}", fields.len())));
    }
    Ok(fields)
}

// ---- frequency distribution: k,w_d_k,p_k ----

pub const DIST_HEADER: &str = "k,w_d_k,p_k";

/// One row of the raw-spectrum CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistRow {
    pub k: u64,
    pub w_d_k: f64,
    pub p_k: f64,
}

pub fn dist_rows(dist: &FrequencyDistribution) -> Vec<DistRow> {
    dist.iter().map(|(k, v)| DistRow { k, w_d_k: v, p_k: dist.p(k) }).collect()
}

pub fn dist_to_csv(dist: &FrequencyDistribution) -> String {
    let mut out = String::from(DIST_HEADER);
    out.push('\n');
    for (k, v) in dist.iter() {
        out.push_str(&format!("{k},{v},{}\n", dist.p(k)));
    }
    out
}

pub fn parse_dist_csv(text: &str) -> Result<Vec<DistRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == DIST_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header {DIST_HEADER:?}"))),
    }
    let mut rows = Vec::new();
    for (i, row) in lines {
        let line = i + 1;
        if row.trim().is_empty() {
            continue;
        }
        let f = split_row(row, line, 3)?;
        rows.push(DistRow {
            k: field(f[0], line, "k")?,
            w_d_k: field(f[1], line, "w_d_k")?,
            p_k: field(f[2], line, "p_k")?,
        });
    }
    Ok(rows)
}

/// Rebuild a distribution from parsed rows (the p_k column is redundant and
/// ignored).
pub fn dist_from_rows(rows: &[DistRow]) -> FrequencyDistribution {
    let mut counts = BTreeMap::new();
    for r in rows {
        *counts.entry(r.k).or_insert(0.0) += r.w_d_k;
    }
    FrequencyDistribution::from_counts(counts)
}

// ---- binned distribution: k_low,k_high,k_rep,p_mean ----

pub const BINNED_HEADER: &str = "k_low,k_high,k_rep,p_mean";

pub fn binned_to_csv(binned: &BinnedDistribution) -> String {
    let mut out = String::from(BINNED_HEADER);
    out.push('\n');
    for b in &binned.bins {
        out.push_str(&format!("{},{},{},{}\n", b.k_low, b.k_high, b.k_rep, b.mean_p));
    }
    out
}

pub fn parse_binned_csv(text: &str) -> Result<BinnedDistribution> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == BINNED_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header {BINNED_HEADER:?}"))),
    }
    let mut bins = Vec::new();
    for (i, row) in lines {
        let line = i + 1;
        if row.trim().is_empty() {
            continue;
        }
        let f = split_row(row, line, 4)?;
        bins.push(Bin {
            k_low: field(f[0], line, "k_low")?,
            k_high: field(f[1], line, "k_high")?,
            k_rep: field(f[2], line, "k_rep")?,
            mean_p: field(f[3], line, "p_mean")?,
        });
    }
    Ok(BinnedDistribution { bins })
}

// ---- growth curve: w_t,w_d ----

pub const GROWTH_HEADER: &str = "w_t,w_d";

/// One row of the growth-curve schema (JSON form).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub w_t: usize,
    pub w_d: f64,
}

pub fn growth_rows(curve: &GrowthCurve) -> Vec<GrowthRow> {
    curve.values.iter().enumerate().map(|(i, &v)| GrowthRow { w_t: i + 1, w_d: v }).collect()
}

pub fn growth_to_csv(curve: &GrowthCurve) -> String {
    let mut out = String::from(GROWTH_HEADER);
    out.push('\n');
    for (i, v) in curve.values.iter().enumerate() {
        out.push_str(&format!("{},{v}\n", i + 1));
    }
    out
}

pub fn parse_growth_csv(text: &str, label: CurveLabel) -> Result<GrowthCurve> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == GROWTH_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header {GROWTH_HEADER:?}"))),
    }
    let mut values = Vec::new();
    for (i, row) in lines {
        let line = i + 1;
        if row.trim().is_empty() {
            continue;
        }
        let f = split_row(row, line, 2)?;
        let w_t: usize = field(f[0], line, "w_t")?;
        if w_t != values.len() + 1 {
            return Err(parse_err(line, format!("w_t must be dense, expected {}", values.len() + 1)));
        }
        values.push(field(f[1], line, "w_d")?);
    }
    Ok(GrowthCurve { values, label })
}

// ---- JSON records ----

/// Per-bin half-read record combining the real-book value with the
/// shuffle-ensemble statistics of the same metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfReadRecord {
    pub k_low: u64,
    pub k_high: u64,
    pub metric: Metric,
    pub value: f64,
    pub null_mean: f64,
    pub null_sigma: f64,
}

/// Join a profile with the null bands of one metric into flat records.
pub fn half_read_records(profile: &HalfReadProfile, bands: &NullBands) -> Result<Vec<HalfReadRecord>> {
    if profile.bins.len() != bands.bins.len() {
        return Err(Error::InvalidInput(format!(
            "profile has {} bins, bands have {}",
            profile.bins.len(),
            bands.bins.len()
        )));
    }
    Ok(profile
        .bins
        .iter()
        .zip(&bands.bins)
        .enumerate()
        .map(|(i, (p, b))| HalfReadRecord {
            k_low: p.k_low,
            k_high: p.k_high,
            metric: bands.metric,
            value: profile.metric(i, bands.metric),
            null_mean: b.mean,
            null_sigma: b.sigma,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParamsRecord {
    pub gamma: f64,
    pub b: f64,
    pub c: f64,
}

/// JSON shape of a fit result: {form, params:{gamma,b,c}, goodness,
/// objective, iterations}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResultRecord {
    pub form: FormKind,
    pub params: FitParamsRecord,
    pub goodness: f64,
    pub objective: f64,
    pub iterations: usize,
}

impl From<&FitResult> for FitResultRecord {
    fn from(fit: &FitResult) -> Self {
        Self {
            form: fit.form.kind,
            params: FitParamsRecord { gamma: fit.form.gamma, b: fit.form.b, c: fit.form.c },
            goodness: fit.goodness,
            objective: fit.objective,
            iterations: fit.iterations,
        }
    }
}

impl From<&FitResultRecord> for ParametricForm {
    fn from(rec: &FitResultRecord) -> Self {
        ParametricForm { kind: rec.form, gamma: rec.params.gamma, b: rec.params.b, c: rec.params.c }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse { line: 0, message: e.to_string() })
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

/// Round-trip helper for xi statistics.
pub fn xi_to_json(xi: &XiStats) -> Result<String> {
    to_json_pretty(xi)
}
