//! The independent, non-stationary binary substitution/erasure channel.
//!
//! Position `i` is flipped with probability `p_f(i)`, erased with
//! probability `p_e(i)` and passed through otherwise, independently of every
//! other position.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{constant, Probability, Real};
use crate::words::{ReceivedWord, Word};

/// Generator for Monte Carlo stream `stream` of experiment `seed`.
///
/// Streams are independent ChaCha8 streams keyed by the same seed, so a
/// trial's randomness depends only on `(seed, stream)` and not on the order
/// or thread in which trials run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-position substitution and erasure probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile<T> {
    p_f: Vec<T>,
    p_e: Vec<T>,
}

impl<T: Probability> NoiseProfile<T> {
    pub fn new(p_f: Vec<T>, p_e: Vec<T>) -> Result<Self> {
        if p_f.is_empty() {
            return Err(Error::domain("noise profile has length zero"));
        }
        Error::check_len(p_f.len(), p_e.len())?;
        for (i, (f, e)) in p_f.iter().zip(&p_e).enumerate() {
            if f.is_negative_value() || e.is_negative_value() || f.clone() + e.clone() > T::one() {
                return Err(Error::domain(format!(
                    "position {}: p_f = {}, p_e = {} is not a valid split of [0, 1]",
                    i + 1,
                    f.lossy_f64(),
                    e.lossy_f64()
                )));
            }
        }
        Ok(Self { p_f, p_e })
    }

    pub fn uniform(n: usize, p_f: T, p_e: T) -> Result<Self> {
        Self::new(vec![p_f; n], vec![p_e; n])
    }

    pub fn noiseless(n: usize) -> Result<Self> {
        Self::uniform(n, T::zero(), T::zero())
    }

    pub fn len(&self) -> usize {
        self.p_f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_f.is_empty()
    }

    pub fn p_f(&self) -> &[T] {
        &self.p_f
    }

    pub fn p_e(&self) -> &[T] {
        &self.p_e
    }
}

/// What the channel does at one position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseEvent {
    Clean,
    Substitute,
    Erase,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoiseRealization(Vec<NoiseEvent>);

impl NoiseRealization {
    pub fn new(events: Vec<NoiseEvent>) -> Self {
        Self(events)
    }

    pub fn events(&self) -> &[NoiseEvent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `T_f`.
    pub fn substitutions(&self) -> usize {
        self.count(NoiseEvent::Substitute)
    }

    /// `T_e`.
    pub fn erasures(&self) -> usize {
        self.count(NoiseEvent::Erase)
    }

    pub fn erasure_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, e)| (*e == NoiseEvent::Erase).then_some(i))
            .collect()
    }

    fn count(&self, kind: NoiseEvent) -> usize {
        self.0.iter().filter(|&&e| e == kind).count()
    }
}

/// Draws one realization; consumes exactly one uniform per position.
pub fn sample_noise<T: Probability, R: Rng + ?Sized>(
    profile: &NoiseProfile<T>,
    rng: &mut R,
) -> NoiseRealization {
    let events = profile
        .p_f
        .iter()
        .zip(&profile.p_e)
        .map(|(f, e)| {
            let f = f.lossy_f64();
            let e = e.lossy_f64();
            let u: f64 = rng.gen();
            if u < f {
                NoiseEvent::Substitute
            } else if u < f + e {
                NoiseEvent::Erase
            } else {
                NoiseEvent::Clean
            }
        })
        .collect();
    NoiseRealization(events)
}

/// Applies a noise realization to a binary word.
pub fn transmit(x: &Word, w: &NoiseRealization) -> Result<ReceivedWord> {
    Error::check_len(x.len(), w.len())?;
    if !x.is_binary() {
        return Err(Error::domain(
            "the substitution/erasure channel takes binary words",
        ));
    }
    let entries = x
        .symbols()
        .iter()
        .zip(w.events())
        .map(|(&bit, event)| match event {
            NoiseEvent::Clean => Some(bit),
            NoiseEvent::Substitute => Some(1 - bit),
            NoiseEvent::Erase => None,
        })
        .collect();
    ReceivedWord::new(entries)
}

/// Expected noise counts and the derived error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStats<T> {
    pub n: usize,
    /// Expected number of substitutions.
    pub mu_f: T,
    /// Expected number of erasures.
    pub mu_e: T,
    /// `(2 mu_f + mu_e) / n`.
    pub p_eff: T,
    /// `floor(n p_eff (1 + 2 eps))`.
    pub t: u64,
    pub eps: T,
}

impl<T: Probability> ChannelStats<T> {
    /// Minimum distance that corrects every pattern with `2 T_f + T_e <= t`.
    pub fn distance(&self) -> u64 {
        self.t + 1
    }

    pub fn exceeds_half(&self) -> bool {
        self.p_eff.clone() * constant::<T>(2.0) >= T::one()
    }
}

pub fn channel_stats<T: Probability>(profile: &NoiseProfile<T>, eps: T) -> Result<ChannelStats<T>> {
    if !(eps > T::zero()) {
        return Err(Error::domain(format!(
            "slack eps = {} must be positive",
            eps.lossy_f64()
        )));
    }
    let sum = |v: &[T]| v.iter().fold(T::zero(), |a, b| a + b.clone());
    let mu_f = sum(&profile.p_f);
    let mu_e = sum(&profile.p_e);
    let two = T::one() + T::one();
    let budget = two.clone() * mu_f.clone() + mu_e.clone();
    let n = T::from_usize(profile.len()).expect("length fits the scalar");
    let p_eff = budget.clone() / n;
    // n * p_eff is the budget itself; multiplying it directly avoids a
    // division round trip in floating point.
    let t = (budget * (T::one() + two * eps.clone()))
        .floor_count()
        .ok_or_else(|| Error::domain("error budget is not a finite count"))?;
    Ok(ChannelStats {
        n: profile.len(),
        mu_f,
        mu_e,
        p_eff,
        t,
        eps,
    })
}

/// `2 exp(-eps^2 mu / 4)`, bounding `P(|T - mu| >= eps mu)` for a sum of
/// independent indicators with mean `mu`.
pub fn concentration_bound<F: Real>(mu: F, eps: F) -> Result<F> {
    if !(mu > F::zero()) || !(eps > F::zero()) {
        return Err(Error::domain(format!(
            "concentration bound needs mu > 0 and eps > 0, got mu = {}, eps = {}",
            mu.lossy_f64(),
            eps.lossy_f64()
        )));
    }
    let four = constant::<F>(4.0);
    Ok(constant::<F>(2.0) * (-(eps * eps) * mu / four).exp())
}
