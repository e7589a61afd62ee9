//! Monte Carlo estimation of per-codeword decoding error.

use std::time::{Duration, Instant};

use dictcode::{
    sample_noise, stream_rng, transmit, Code, DecodeOutcome, NoiseProfile, TwoStageDecoder,
};
use rayon::prelude::*;

use crate::report::Report;
use crate::CliError;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub const MIN_TRIALS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Interval {
        lo: (center - half).clamp(0.0, 1.0).min(p),
        hi: (center + half).clamp(0.0, 1.0).max(p),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodewordEstimate {
    pub word: String,
    pub errors: u64,
    pub rate: f64,
    pub interval: Interval,
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub estimates: Vec<CodewordEstimate>,
    pub max: f64,
    pub trials: u64,
    pub seed: u64,
    pub wall_time: Duration,
}

impl SimulationReport {
    /// Key-value rendering; wall time is left out so that output bytes depend
    /// only on the inputs and the seed.
    pub fn render(&self) -> String {
        let mut r = Report::new();
        r.put("codewords", self.estimates.len());
        r.put("trials", self.trials);
        r.put("seed", self.seed);
        r.put("max_error", self.max);
        for (i, e) in self.estimates.iter().enumerate() {
            r.put(
                format!("word[{i}]"),
                format!(
                    "{} errors={} rate={} ci95=[{},{}]",
                    e.word, e.errors, e.rate, e.interval.lo, e.interval.hi
                ),
            );
        }
        r.render()
    }
}

/// Trial `t` of codeword `i` draws from stream `(i << 32) | t`, so results do
/// not depend on scheduling.
pub fn simulate(
    code: &Code,
    d: usize,
    profile: &NoiseProfile<f64>,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport, CliError> {
    if trials < MIN_TRIALS {
        return Err(CliError::Infeasible(format!(
            "trials = {trials} < {MIN_TRIALS}"
        )));
    }
    if trials > u32::MAX as u64 || code.len() > u32::MAX as usize {
        return Err(CliError::Infeasible(
            "trials and code size must fit in 32 bits".into(),
        ));
    }
    dictcode::Error::check_len(code.word_len(), profile.len())?;
    let decoder = TwoStageDecoder::new(code, d)?;
    let start = Instant::now();
    let counts: Vec<u64> = code
        .words()
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream_rng(seed, ((i as u64) << 32) | t);
                    let w = sample_noise(profile, &mut rng);
                    let y = transmit(x, &w).expect("noise matches code length");
                    match decoder
                        .decode(&y)
                        .expect("received word matches code length")
                    {
                        DecodeOutcome::Decoded(ref z) if z == x => 0,
                        _ => 1,
                    }
                })
                .sum()
        })
        .collect();
    let wall_time = start.elapsed();
    let estimates: Vec<CodewordEstimate> = code
        .words()
        .iter()
        .zip(&counts)
        .map(|(x, &errors)| CodewordEstimate {
            word: code.alphabet().render_word(x),
            errors,
            rate: errors as f64 / trials as f64,
            interval: wilson_interval(errors, trials, Z95),
        })
        .collect();
    let max = estimates.iter().map(|e| e.rate).fold(0.0, f64::max);
    Ok(SimulationReport {
        estimates,
        max,
        trials,
        seed,
        wall_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate_and_stays_in_unit_interval() {
        for (k, n) in [(0, 100), (1, 100), (50, 100), (100, 100), (3, 10_000)] {
            let ci = wilson_interval(k, n, Z95);
            let p = k as f64 / n as f64;
            assert!(ci.contains(p), "{k}/{n}: {ci:?}");
            assert!(0.0 <= ci.lo && ci.hi <= 1.0);
        }
        let zero = wilson_interval(0, 100, Z95);
        assert_eq!(zero.lo, 0.0);
        assert!((zero.hi - 0.036_993_6).abs() < 1e-6);
    }
}
