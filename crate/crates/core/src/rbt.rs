//! The random book transformation (RBT): binomial thinning of a frequency
//! spectrum from a full text of W_T tokens down to sections of w_T tokens,
//! its triangular inverse, the expected vocabulary growth curve it implies,
//! and parametric fitting of P(k) against the w_D/w_T curve of a randomized
//! book.

use serde::{Deserialize, Serialize};

use crate::freqstats::{BinnedDistribution, CurveLabel, GrowthCurve};
use crate::numeric::ln_binomial;
use crate::optim::{nelder_mead, SimplexOptions};
use crate::{Error, Result};

/// Sizes of the transformation: full text W_T, section w_T, and the
/// truncation order k_max.
#[derive(Debug, Clone)]
pub struct RbtContext {
    w_total: f64,
    section_total: f64,
    k_max: usize,
}

impl RbtContext {
    pub fn new(w_total: f64, section_total: f64, k_max: usize) -> Result<Self> {
        if !(section_total >= 1.0 && section_total <= w_total) {
            return Err(Error::InvalidInput(format!(
                "need 1 <= w_T <= W_T, got w_T={section_total}, W_T={w_total}"
            )));
        }
        if k_max == 0 {
            return Err(Error::InvalidInput("k_max must be positive".into()));
        }
        Ok(Self { w_total, section_total, k_max })
    }

    /// Ratio r = W_T / w_T >= 1.
    pub fn ratio(&self) -> f64 {
        self.w_total / self.section_total
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Section success rate p = w_T / W_T.
    fn rate(&self) -> f64 {
        self.section_total / self.w_total
    }
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidInput(format!("{what}: empty distribution")));
    }
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput(format!("{what}: entries must be finite and non-negative")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("{what}: sums to {sum}, expected 1 within 1e-9")));
    }
    Ok(())
}

/// Matrix element A_{k k'}: the probability that a word occurring k' times
/// in the full text occurs exactly k times in a random section, i.e. the
/// binomial PMF with k' trials at rate w_T/W_T. Zero for k > k'. Evaluated
/// in log space.
pub fn rbt_entry(k: u64, k_prime: u64, ctx: &RbtContext) -> f64 {
    if k > k_prime {
        return 0.0;
    }
    let p = ctx.rate();
    let q = 1.0 - p;
    // exact limits where a log would be singular (0^0 := 1)
    if q == 0.0 {
        return if k == k_prime { 1.0 } else { 0.0 };
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let mut ln = ln_binomial(k_prime, k);
    if k > 0 {
        ln += k as f64 * p.ln();
    }
    if k_prime > k {
        ln += (k_prime - k) as f64 * q.ln();
    }
    ln.exp()
}

/// Normalizer C = 1 / (1 - sum_k' ((W_T - w_T)/W_T)^k' P(k')): the inverse
/// probability that a word of the full book appears in the section at all.
fn normalizer(p: &[f64], ctx: &RbtContext) -> Result<f64> {
    let q = 1.0 - ctx.rate();
    let mut missing = 0.0;
    let mut qk = 1.0;
    for &pv in p {
        qk *= q;
        missing += qk * pv;
    }
    let denom = 1.0 - missing;
    if denom <= 0.0 {
        return Err(Error::NumericalBreakdown(
            "degenerate normalizer: section keeps no words".into(),
        ));
    }
    Ok(1.0 / denom)
}

/// Forward transform: P_{w_T}(k) = C sum_{k' >= k} A_{k k'} P(k').
/// Input and output are dense vectors with `p[k-1] = P(k)`, k = 1..=k_max.
pub fn rbt_forward(p: &[f64], ctx: &RbtContext) -> Result<Vec<f64>> {
    check_distribution(p, "rbt_forward input")?;
    if p.len() > ctx.k_max {
        return Err(Error::InvalidInput(format!(
            "distribution has {} entries but k_max is {}",
            p.len(),
            ctx.k_max
        )));
    }
    let c = normalizer(p, ctx)?;
    let mut out = vec![0.0; p.len()];
    for (i, &pv) in p.iter().enumerate() {
        if pv == 0.0 {
            continue;
        }
        let k_prime = (i + 1) as u64;
        for k in 1..=k_prime {
            out[k as usize - 1] += rbt_entry(k, k_prime, ctx) * pv;
        }
    }
    for v in &mut out {
        *v *= c;
    }
    Ok(out)
}

/// Inverse matrix element A^-1_{k k'} = (r-1)^(k'-k) r^k (-1)^(k'+k) C(k', k).
fn rbt_inverse_entry(k: u64, k_prime: u64, ratio: f64) -> f64 {
    let sign = if (k_prime + k) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (ratio - 1.0).powi((k_prime - k) as i32)
        * ratio.powi(k as i32)
        * ln_binomial(k_prime, k).exp()
}

/// Default conditioning limit on the ratio for the inverse transform. The
/// alternating (r-1)^(k'-k) growth makes the inversion explosive for large
/// r, so anything beyond this is rejected up front.
pub const DEFAULT_INVERSE_RATIO_LIMIT: f64 = 2.0;

/// Largest k_max accepted by the inverse transform.
pub const INVERSE_K_MAX_LIMIT: usize = 64;

/// Invert the thinning: recover the full-book P(k) from a section P_{w_T}(k).
/// The C-scaling is undone by renormalizing after applying A^-1. Entries
/// below -1e-6 signal numerical breakdown (or an input that is not a
/// thinned spectrum) and raise an error; smaller negatives are clamped to
/// zero before renormalizing.
pub fn rbt_inverse(p_section: &[f64], ctx: &RbtContext) -> Result<Vec<f64>> {
    rbt_inverse_with_limit(p_section, ctx, DEFAULT_INVERSE_RATIO_LIMIT)
}

/// `rbt_inverse` with an explicit conditioning limit on the ratio.
pub fn rbt_inverse_with_limit(p_section: &[f64], ctx: &RbtContext, r_max: f64) -> Result<Vec<f64>> {
    check_distribution(p_section, "rbt_inverse input")?;
    if ctx.ratio() > r_max {
        return Err(Error::NumericalBreakdown(format!(
            "inverse transform limited to ratio <= {r_max}, got {}",
            ctx.ratio()
        )));
    }
    if ctx.k_max > INVERSE_K_MAX_LIMIT || p_section.len() > INVERSE_K_MAX_LIMIT {
        return Err(Error::NumericalBreakdown(format!(
            "inverse transform limited to k_max <= {INVERSE_K_MAX_LIMIT}, got {}",
            ctx.k_max
        )));
    }
    let ratio = ctx.ratio();
    let n = p_section.len();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let k = (i + 1) as u64;
        for (j, &pv) in p_section.iter().enumerate().skip(i) {
            let k_prime = (j + 1) as u64;
            *o += rbt_inverse_entry(k, k_prime, ratio) * pv;
        }
    }
    let mut sum = 0.0;
    for v in &mut out {
        if *v < -1e-6 {
            return Err(Error::NumericalBreakdown(format!(
                "inverse produced entry {v}; input is not a consistent thinned spectrum"
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
        sum += *v;
    }
    if sum <= 0.0 {
        return Err(Error::NumericalBreakdown("inverse produced an all-zero spectrum".into()));
    }
    for v in &mut out {
        *v /= sum;
    }
    Ok(out)
}

/// Expected distinct words in one random section of `section_len` tokens,
/// w_d = W_D (1 - sum_k' (1 - w_T/W_T)^k' P(k')).
pub fn expected_distinct(p: &[f64], w_distinct: f64, w_total: f64, section_len: f64) -> f64 {
    let x = 1.0 - section_len / w_total;
    let mut missing = 0.0;
    let mut xk = 1.0;
    for &pv in p {
        xk *= x;
        if xk == 0.0 {
            break;
        }
        missing += xk * pv;
    }
    w_distinct * (1.0 - missing)
}

/// Dense expected growth curve of a randomized book with spectrum P(k):
/// one value per section size w_T = 1..=W_T.
pub fn expected_growth_curve(p: &[f64], w_distinct: f64, w_total: f64) -> Result<GrowthCurve> {
    check_distribution(p, "expected_growth_curve input")?;
    if !(w_distinct >= 1.0 && w_total >= w_distinct) {
        return Err(Error::InvalidInput(format!(
            "inconsistent totals: W_D={w_distinct}, W_T={w_total}"
        )));
    }
    let mean_k: f64 = p.iter().enumerate().map(|(i, &pv)| (i + 1) as f64 * pv).sum();
    let implied = w_total / w_distinct;
    if (mean_k - implied).abs() > 0.01 * implied {
        return Err(Error::InvalidInput(format!(
            "inconsistent inputs: sum k P(k) = {mean_k} but W_T/W_D = {implied} (must agree within 1%)"
        )));
    }
    // suffix mass lets the inner sum stop once the tail cannot contribute
    let n = p.len();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + p[i];
    }
    let total = w_total as usize;
    let mut values = Vec::with_capacity(total);
    for w in 1..=total {
        let x = 1.0 - w as f64 / w_total;
        let mut missing = 0.0;
        let mut xk = 1.0;
        for (i, &pv) in p.iter().enumerate() {
            xk *= x;
            if xk * suffix[i] < 1e-13 {
                break;
            }
            missing += xk * pv;
        }
        values.push(w_distinct * (1.0 - missing));
    }
    Ok(GrowthCurve { values, label: CurveLabel::RbtProjected })
}

/// The three candidate parametrizations of P(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    /// P(k) ~ 1/k^gamma
    Power,
    /// P(k) ~ exp(-b k)/k^gamma
    PowerExpCutoff,
    /// P(k) ~ exp(-b k) / ((k + c) k^(gamma - 1))
    Augmented,
}

impl std::fmt::Display for FormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormKind::Power => write!(f, "power"),
            FormKind::PowerExpCutoff => write!(f, "power_exp_cutoff"),
            FormKind::Augmented => write!(f, "augmented"),
        }
    }
}

/// A parametrization together with its parameter values. `b` and `c` are
/// only meaningful for the forms that use them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricForm {
    pub kind: FormKind,
    pub gamma: f64,
    pub b: f64,
    pub c: f64,
}

impl ParametricForm {
    pub fn power(gamma: f64) -> Self {
        Self { kind: FormKind::Power, gamma, b: 0.0, c: 0.0 }
    }

    pub fn power_exp_cutoff(gamma: f64, b: f64) -> Self {
        Self { kind: FormKind::PowerExpCutoff, gamma, b, c: 0.0 }
    }

    pub fn augmented(gamma: f64, b: f64, c: f64) -> Self {
        Self { kind: FormKind::Augmented, gamma, b, c }
    }

    fn unnormalized(&self, k: f64) -> f64 {
        match self.kind {
            FormKind::Power => k.powf(-self.gamma),
            FormKind::PowerExpCutoff => (-self.b * k).exp() * k.powf(-self.gamma),
            FormKind::Augmented => {
                (-self.b * k).exp() / ((k + self.c) * k.powf(self.gamma - 1.0))
            }
        }
    }
}

/// Evaluate a parametrization on k = 1..=k_max, normalized to sum 1.
pub fn evaluate_form(form: &ParametricForm, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be positive".into()));
    }
    if !(form.gamma > 0.0) || form.b < 0.0 || form.c < 0.0 {
        return Err(Error::InvalidInput(format!(
            "parameters out of domain: gamma={}, b={}, c={}",
            form.gamma, form.b, form.c
        )));
    }
    let mut p: Vec<f64> = (1..=k_max).map(|k| form.unnormalized(k as f64)).collect();
    let sum: f64 = p.iter().sum();
    if !sum.is_finite() || sum <= 0.0 {
        return Err(Error::NumericalBreakdown(format!(
            "form evaluates to non-finite mass (gamma={}, b={}, c={})",
            form.gamma, form.b, form.c
        )));
    }
    for v in &mut p {
        *v /= sum;
    }
    Ok(p)
}

/// Maximum absolute difference between two curves compared as w_D/w_T
/// ratios.
pub fn goodness_max_abs(curve_a: &GrowthCurve, curve_b: &GrowthCurve) -> Result<f64> {
    if curve_a.len() != curve_b.len() || curve_a.is_empty() {
        return Err(Error::InvalidInput(format!(
            "curves must have equal nonzero length, got {} and {}",
            curve_a.len(),
            curve_b.len()
        )));
    }
    let mut max = 0.0f64;
    for (i, (a, b)) in curve_a.values.iter().zip(&curve_b.values).enumerate() {
        let w = (i + 1) as f64;
        max = max.max((a / w - b / w).abs());
    }
    Ok(max)
}

/// Initial slope estimate for the fit: minus the log-log regression slope
/// of binned mean P over bins with representative k in [4, 64].
pub fn initial_gamma(binned: &BinnedDistribution) -> f64 {
    let pts: Vec<(f64, f64)> = binned
        .bins
        .iter()
        .filter(|b| b.k_rep >= 4.0 && b.k_rep <= 64.0 && b.mean_p > 0.0)
        .map(|b| (b.k_rep.ln(), b.mean_p.ln()))
        .collect();
    if pts.len() < 2 {
        return 1.7;
    }
    let n = pts.len() as f64;
    let mx: f64 = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my: f64 = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (-slope).clamp(0.2, 5.0)
}

/// Result of fitting one parametrization against a growth curve.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub form: ParametricForm,
    /// Maximum absolute w_D/w_T difference at the optimum, over the full
    /// dense curve.
    pub goodness: f64,
    /// Least-squares objective value at the optimum.
    pub objective: f64,
    pub iterations: usize,
}

/// Knobs of the fitting pipeline.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Starting gamma; pass `initial_gamma` of the empirical spectrum when
    /// available.
    pub init_gamma: f64,
    /// Simplex restarts from the incumbent after the first run.
    pub restarts: usize,
    pub max_iters: usize,
    /// Log-spaced section sizes at which the least-squares objective
    /// compares the w_D/w_T ratios.
    pub sample_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { init_gamma: 1.7, restarts: 3, max_iters: 800, sample_points: 200 }
    }
}

/// Log-spaced unique section sizes in [1, w_total], always including both
/// endpoints.
fn sample_sizes(w_total: usize, points: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1).max(1) as f64;
            ((w_total as f64).powf(t)).round() as usize
        })
        .collect();
    sizes.push(w_total);
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

fn form_from_params(kind: FormKind, x: &[f64]) -> ParametricForm {
    match kind {
        FormKind::Power => ParametricForm::power(x[0].exp()),
        FormKind::PowerExpCutoff => ParametricForm::power_exp_cutoff(x[0].exp(), x[1].exp()),
        FormKind::Augmented => ParametricForm::augmented(x[0].exp(), x[1].exp(), x[2].exp()),
    }
}

/// Fit one parametrization of P(k) so that its expected w_D/w_T curve
/// reproduces the target curve of a randomized book. Least squares on the
/// ratios; the reported goodness is the max-abs difference over the full
/// dense curve.
pub fn fit_form(
    kind: FormKind,
    target: &GrowthCurve,
    k_max: usize,
    opts: &FitOptions,
) -> Result<FitResult> {
    if target.len() < 2 {
        return Err(Error::InvalidInput("target curve too short to fit".into()));
    }
    let w_total = target.len();
    let sizes = sample_sizes(w_total, opts.sample_points);
    let target_ratios: Vec<f64> =
        sizes.iter().map(|&w| target.values[w - 1] / w as f64).collect();
    let w_total_f = w_total as f64;

    let objective = |x: &[f64]| -> f64 {
        let form = form_from_params(kind, x);
        let p = match evaluate_form(&form, k_max) {
            Ok(p) => p,
            Err(_) => return 1e12,
        };
        let mean_k: f64 = p.iter().enumerate().map(|(i, &pv)| (i + 1) as f64 * pv).sum();
        let w_distinct = w_total_f / mean_k;
        let mut sum = 0.0;
        for (&w, &t) in sizes.iter().zip(&target_ratios) {
            let model = expected_distinct(&p, w_distinct, w_total_f, w as f64) / w as f64;
            let d = model - t;
            sum += d * d;
        }
        if sum.is_finite() {
            sum
        } else {
            1e12
        }
    };

    let x0: Vec<f64> = match kind {
        FormKind::Power => vec![opts.init_gamma.ln()],
        FormKind::PowerExpCutoff => vec![opts.init_gamma.ln(), (1.0 / k_max as f64).ln()],
        FormKind::Augmented => vec![opts.init_gamma.ln(), (1.0 / k_max as f64).ln(), 0.0],
    };
    let simplex_opts = SimplexOptions { max_iters: opts.max_iters, f_tol: 1e-12, initial_step: 0.25 };
    let mut best = nelder_mead(objective, &x0, &simplex_opts);
    let mut iterations = best.iterations;
    for _ in 0..opts.restarts {
        let restart_opts = SimplexOptions { initial_step: 0.05, ..simplex_opts };
        let r = nelder_mead(objective, &best.x, &restart_opts);
        iterations += r.iterations;
        if r.fx < best.fx {
            best = r;
        } else {
            best.converged = best.converged || r.converged;
        }
    }
    let form = form_from_params(kind, &best.x);
    if !best.converged {
        return Err(Error::NumericalBreakdown(format!(
            "fit did not converge within the restart budget; best so far: {} gamma={:.4} b={:.6} c={:.4} objective={:.3e}",
            kind, form.gamma, form.b, form.c, best.fx
        )));
    }

    let p = evaluate_form(&form, k_max)?;
    let mean_k: f64 = p.iter().enumerate().map(|(i, &pv)| (i + 1) as f64 * pv).sum();
    let w_distinct = w_total_f / mean_k;
    let model_curve = expected_growth_curve(&p, w_distinct, w_total_f)?;
    let goodness = goodness_max_abs(target, &model_curve)?;
    Ok(FitResult { form, goodness, objective: best.fx, iterations })
}

/// Least-squares fit of the exp-cutoff form directly to a log2-binned
/// spectrum, in log space over occupied bins. Returns (gamma, b). Used for
/// the section-steepening diagnostics where only the slope matters.
pub fn fit_exp_cutoff_to_binned(binned: &BinnedDistribution, k_max: usize) -> Result<(f64, f64)> {
    let occupied: Vec<(u64, u64, f64)> = binned
        .bins
        .iter()
        .filter(|b| b.mean_p > 0.0)
        .map(|b| (b.k_low, b.k_high, b.mean_p.ln()))
        .collect();
    if occupied.len() < 2 {
        return Err(Error::InvalidInput("need at least two occupied bins".into()));
    }
    let objective = |x: &[f64]| -> f64 {
        let form = ParametricForm::power_exp_cutoff(x[0].exp(), x[1].exp());
        let p = match evaluate_form(&form, k_max) {
            Ok(p) => p,
            Err(_) => return 1e12,
        };
        let mut sum = 0.0;
        for &(k_low, k_high, ln_target) in &occupied {
            let hi = (k_high as usize).min(k_max);
            if k_low as usize > hi {
                continue;
            }
            let width = (k_high - k_low + 1) as f64;
            let mass: f64 = p[(k_low as usize - 1)..hi].iter().sum();
            let mean = mass / width;
            if mean <= 0.0 {
                return 1e12;
            }
            let d = mean.ln() - ln_target;
            sum += d * d;
        }
        sum
    };
    let x0 = vec![1.5f64.ln(), (1.0 / k_max as f64).ln()];
    let opts = SimplexOptions { max_iters: 2000, f_tol: 1e-12, initial_step: 0.4 };
    let mut best = nelder_mead(objective, &x0, &opts);
    let refine = nelder_mead(objective, &best.x, &SimplexOptions { initial_step: 0.05, ..opts });
    if refine.fx < best.fx {
        best = refine;
    }
    Ok((best.x[0].exp(), best.x[1].exp()))
}
