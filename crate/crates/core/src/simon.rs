//! The Simon text-growth model: the generator plus the closed-form
//! asymptotics (hapax survival probability, expected class sizes, half-read
//! fractions and expected occurrence counts).
//!
//! Internally the analytics use rho = 1 / (1 - alpha), defined only for
//! alpha < 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::TokenSequence;
use crate::{Error, Result};

/// Parameters of one generated book.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimonParams {
    /// Probability of emitting a brand-new word at each step.
    pub alpha: f64,
    /// Total tokens to generate (T = W_T).
    pub total_tokens: usize,
    pub seed: u64,
}

impl SimonParams {
    pub fn new(alpha: f64, total_tokens: usize, seed: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidInput(format!("alpha must be in (0, 1], got {alpha}")));
        }
        if total_tokens == 0 {
            return Err(Error::InvalidInput("total_tokens must be at least 1".into()));
        }
        Ok(Self { alpha, total_tokens, seed })
    }
}

fn check_alpha_open(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("alpha must be in (0, 1), got {alpha}")))
    }
}

fn check_time(t: f64, total: f64) -> Result<()> {
    if t >= 1.0 && t <= total {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("time {t} outside [1, {total}]")))
    }
}

/// Generate one Simon book. The first token is always new; afterwards each
/// step emits a new word with probability alpha, otherwise it copies a
/// uniformly chosen earlier token position (so an old word is picked with
/// probability proportional to its current count). Words are named "w1",
/// "w2", ... in introduction order.
pub fn generate_simon(params: &SimonParams) -> Result<TokenSequence> {
    SimonParams::new(params.alpha, params.total_tokens, params.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut ids: Vec<u32> = Vec::with_capacity(params.total_tokens);
    let mut next_id = 1u32;
    ids.push(next_id);
    for step in 1..params.total_tokens {
        if rng.random::<f64>() < params.alpha {
            next_id += 1;
            ids.push(next_id);
        } else {
            let pos = rng.random_range(0..step);
            ids.push(ids[pos]);
        }
    }
    let tokens = ids.iter().map(|id| format!("w{id}")).collect();
    Ok(TokenSequence::new(tokens, format!("simon(alpha={}, T={})", params.alpha, params.total_tokens)))
}

/// Probability that a word introduced at time t is never repeated in a book
/// of length T: p(t) = (t/T)^(1-alpha).
pub fn simon_survival(alpha: f64, t: f64, total: f64) -> Result<f64> {
    check_time(t, total)?;
    Ok((t / total).powf(1.0 - alpha))
}

/// Closed-form expected class size W_D(k) for k = 1 or 2:
/// W_D(1) ~ T/(2-alpha), W_D(2) ~ T/(1-alpha) (1/(2-alpha) - 1/(3-2 alpha)).
///
/// These integrate the survival densities over one candidate introduction
/// per time step. Introductions actually happen at rate alpha, so the raw
/// expected class count of a simulated book is alpha times this value; the
/// factor cancels in every half-read ratio built from these forms.
pub fn simon_expected_class_size(alpha: f64, total: f64, k: u64) -> Result<f64> {
    match k {
        1 => Ok(total / (2.0 - alpha)),
        2 => {
            if alpha >= 1.0 {
                return Err(Error::InvalidInput("k=2 class size needs alpha < 1".into()));
            }
            Ok(total / (1.0 - alpha) * (1.0 / (2.0 - alpha) - 1.0 / (3.0 - 2.0 * alpha)))
        }
        _ => Err(Error::InvalidInput(format!("closed form only for k in {{1, 2}}, got {k}"))),
    }
}

/// Asymptotic regime of the half-read fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfReadRegime {
    /// Hapax words (k = 1).
    K1,
    /// Words occurring exactly twice.
    K2,
    /// Words alone in their frequency class (large k).
    LargeK,
}

/// Left side of the k=2 half-read equation minus 1. Its root on (0, 1) is
/// the prefix fraction at which half the k=2 class tokens have been read.
fn k2_equation(alpha: f64, x: f64) -> f64 {
    let a2 = 2.0 - alpha;
    let a3 = 3.0 - 2.0 * alpha;
    let numer = x.powf(a3) * (1.0 / a2 - 2.0 / a3) + x.powf(a2) / a2;
    numer / (1.0 / a2 - 1.0 / a3) - 1.0
}

fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NumericalBreakdown("root not bracketed".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Fraction of the book to read before encountering half the tokens of a
/// frequency class, in the stated asymptotic regime:
/// k1 -> (1/2)^(1/(2-alpha)), large k -> 2^(-1/(1-alpha)), k2 -> numeric
/// root of the k=2 equation (bisection to 1e-10).
pub fn simon_prefix_for_half(alpha: f64, regime: HalfReadRegime) -> Result<f64> {
    check_alpha_open(alpha)?;
    match regime {
        HalfReadRegime::K1 => Ok(0.5f64.powf(1.0 / (2.0 - alpha))),
        HalfReadRegime::LargeK => Ok(2.0f64.powf(-1.0 / (1.0 - alpha))),
        HalfReadRegime::K2 => bisect(|x| k2_equation(alpha, x), 1e-9, 1.0 - 1e-9, 1e-10),
    }
}

/// Generalization of the k=1 half-read fraction to an arbitrary fraction n
/// of the hapax words: T_n/T = n^(1/(2-alpha)).
pub fn simon_prefix_for_fraction(alpha: f64, n: f64) -> Result<f64> {
    check_alpha_open(alpha)?;
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::InvalidInput(format!("fraction must be in (0, 1], got {n}")));
    }
    Ok(n.powf(1.0 / (2.0 - alpha)))
}

/// Probability density that a word introduced at t1 is repeated exactly
/// once, at t2: p(t1, t2) = T^(2(alpha-1)) t1^(1-alpha) t2^(-alpha).
pub fn simon_pair_survival(alpha: f64, t1: f64, t2: f64, total: f64) -> Result<f64> {
    check_alpha_open(alpha)?;
    check_time(t1, total)?;
    check_time(t2, total)?;
    if t1 >= t2 {
        return Err(Error::InvalidInput(format!("need t1 < t2, got t1={t1}, t2={t2}")));
    }
    Ok(total.powf(2.0 * (alpha - 1.0)) * t1.powf(1.0 - alpha) * t2.powf(-alpha))
}

/// Expected final occurrence count of a word introduced at time t:
/// k(t) = (T/t)^(1-alpha).
pub fn simon_expected_occurrences(alpha: f64, t: f64, total: f64) -> Result<f64> {
    check_time(t, total)?;
    Ok((total / t).powf(1.0 - alpha))
}
