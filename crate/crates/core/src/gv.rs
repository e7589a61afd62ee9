//! Greedy Gilbert-Varshamov codes inside a dictionary, the two-stage
//! erasure/substitution decoder, and the binary-channel rate pipeline.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::binary_channel::{channel_stats, ChannelStats, NoiseProfile};
use crate::entropy::binary_entropy;
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::words::{
    ball_volume, distance_unchecked, min_distance, Alphabet, Code, Dictionary, ReceivedWord, Word,
    MAX_MATERIALIZED_WORDS,
};

/// Result of [`greedy_gv_construct`].
#[derive(Debug, Clone, PartialEq)]
pub struct GvReport {
    pub code: Code,
    pub d: usize,
    /// `ceil(#D / V(n, d - 1))`.
    pub guarantee: BigUint,
    pub achieved_size: usize,
}

impl GvReport {
    pub fn meets_guarantee(&self) -> bool {
        BigUint::from(self.achieved_size) >= self.guarantee
    }
}

/// `ceil(dict_size / ball_volume(n, d - 1, q))`.
pub fn gv_guarantee(dict_size: usize, n: usize, d: usize, q: usize) -> Result<BigUint> {
    if d == 0 || d > n {
        return Err(Error::domain(format!("distance {d} must lie in 1..={n}")));
    }
    let ball = ball_volume(n, d - 1, q)?;
    Ok(BigUint::from(dict_size).div_ceil(&ball))
}

/// Scans the dictionary in order and keeps every word at distance at least
/// `d` from all words kept so far. The result is a maximal code.
pub fn greedy_gv_construct(dict: &Dictionary, d: usize) -> Result<GvReport> {
    let n = dict.word_len();
    if dict.is_empty() {
        return Err(Error::domain(
            "cannot build a code from an empty dictionary",
        ));
    }
    let guarantee = gv_guarantee(dict.len(), n, d, dict.alphabet().size())?;
    let mut kept: Vec<Word> = Vec::new();
    for candidate in dict.iter() {
        let admissible = kept
            .iter()
            .all(|c| distance_unchecked(c.symbols(), candidate.symbols()) >= d);
        if admissible {
            kept.push(candidate.clone());
        }
    }
    let achieved_size = kept.len();
    let code = Code::new(dict.alphabet().clone(), n, kept)?;
    Ok(GvReport {
        code,
        d,
        guarantee,
        achieved_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeFailure {
    /// More than one reduced code word is nearest to the unerased part.
    DistanceTie,
    /// The nearest reduced word extends to more than one code word.
    AmbiguousCompletion,
}

impl DecodeFailure {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeFailure::DistanceTie => "distance_tie",
            DecodeFailure::AmbiguousCompletion => "ambiguous_completion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Word),
    DecodingError(DecodeFailure),
}

/// Two-stage decoder for a code of known minimum distance.
///
/// Stage one punctures every code word and the received word at the erased
/// positions and looks for a unique nearest reduced word. Stage two restores
/// the erased positions by requiring exactly one code word with that
/// reduction. Whenever `2 T_f + T_e <= d - 1` the transmitted word comes back.
#[derive(Debug, Clone)]
pub struct TwoStageDecoder<'a> {
    code: &'a Code,
}

impl<'a> TwoStageDecoder<'a> {
    /// Checks `min_distance(code) >= d` once up front.
    pub fn new(code: &'a Code, d: usize) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::domain("cannot decode with an empty code"));
        }
        if code.len() >= 2 {
            let actual = min_distance(code)?;
            if actual < d {
                return Err(Error::domain(format!(
                    "code has minimum distance {actual}, below the claimed {d}"
                )));
            }
        }
        Ok(Self { code })
    }

    pub fn code(&self) -> &Code {
        self.code
    }

    pub fn decode(&self, y: &ReceivedWord) -> Result<DecodeOutcome> {
        Error::check_len(self.code.word_len(), y.len())?;
        let words = self.code.words();
        let erased = y.erasure_count();
        if erased == y.len() {
            return Ok(if words.len() == 1 {
                DecodeOutcome::Decoded(words[0].clone())
            } else {
                DecodeOutcome::DecodingError(DecodeFailure::DistanceTie)
            });
        }

        let reduced_distance = |w: &Word| {
            w.symbols()
                .iter()
                .zip(y.entries())
                .filter(|(s, e)| matches!(e, Some(v) if v != *s))
                .count()
        };
        let mut best = usize::MAX;
        let mut nearest: Vec<&Word> = Vec::new();
        for w in words {
            let dist = reduced_distance(w);
            if dist < best {
                best = dist;
                nearest.clear();
            }
            if dist == best {
                nearest.push(w);
            }
        }

        // Stage 1: the nearest set, taken over distinct reduced words.
        let same_reduction = |a: &Word, b: &Word| {
            a.symbols()
                .iter()
                .zip(b.symbols())
                .zip(y.entries())
                .all(|((p, q), e)| e.is_none() || p == q)
        };
        let z = nearest[0];
        if nearest[1..].iter().any(|w| !same_reduction(z, w)) {
            return Ok(DecodeOutcome::DecodingError(DecodeFailure::DistanceTie));
        }

        // Stage 2: every code word with reduction z_red is at the minimum
        // distance, so the completions are exactly `nearest`.
        if nearest.len() != 1 {
            return Ok(DecodeOutcome::DecodingError(
                DecodeFailure::AmbiguousCompletion,
            ));
        }
        Ok(DecodeOutcome::Decoded(z.clone()))
    }
}

/// One-shot form of [`TwoStageDecoder::decode`].
pub fn two_stage_decode(code: &Code, d: usize, y: &ReceivedWord) -> Result<DecodeOutcome> {
    TwoStageDecoder::new(code, d)?.decode(y)
}

/// Where the pipeline's dictionary comes from.
#[derive(Debug, Clone)]
pub enum DictionarySource {
    Explicit(Dictionary),
    /// All of `{0,1}^n`, materialized only when small enough.
    FullSpace {
        n: usize,
    },
}

impl DictionarySource {
    pub fn word_len(&self) -> usize {
        match self {
            DictionarySource::Explicit(d) => d.word_len(),
            DictionarySource::FullSpace { n } => *n,
        }
    }

    /// `log2(#D) / n`.
    pub fn alpha(&self) -> f64 {
        match self {
            DictionarySource::Explicit(d) => (d.len() as f64).log2() / d.word_len() as f64,
            DictionarySource::FullSpace { .. } => 1.0,
        }
    }

    fn materialize(&self) -> Option<Result<Dictionary>> {
        match self {
            DictionarySource::Explicit(d) => Some(Ok(d.clone())),
            DictionarySource::FullSpace { n } => {
                let fits = *n < usize::BITS as usize && (1usize << n) <= MAX_MATERIALIZED_WORDS;
                fits.then(|| Dictionary::full_space(Alphabet::binary(), *n))
            }
        }
    }
}

/// Conditions under which the binary-channel rate guarantee does not apply.
#[derive(Debug, Clone, PartialEq)]
pub enum Infeasibility {
    /// `d = t + 1` exceeds the word length.
    DistanceExceedsLength { d: u64, n: usize },
    /// `p_eff >= 1/2`.
    NoiseTooHigh { p_eff: f64 },
    /// The full space is too large to materialize for greedy construction.
    NotMaterialized { n: usize },
}

impl Infeasibility {
    pub fn describe(&self) -> String {
        match self {
            Infeasibility::DistanceExceedsLength { d, n } => {
                format!("d = t + 1 = {d} > n = {n}")
            }
            Infeasibility::NoiseTooHigh { p_eff } => format!("p_eff = {p_eff} >= 1/2"),
            Infeasibility::NotMaterialized { n } => {
                format!("2^{n} exceeds the materialization cap of {MAX_MATERIALIZED_WORDS} words")
            }
        }
    }

    /// Whether no code can be produced at all.
    pub fn blocks_construction(&self) -> bool {
        !matches!(self, Infeasibility::NoiseTooHigh { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Theorem1Report<T> {
    pub stats: ChannelStats<T>,
    pub d: u64,
    pub alpha: f64,
    /// `alpha - H(p_eff)` when `p_eff < 1/2`.
    pub target_rate: Option<f64>,
    pub construction: Option<GvReport>,
    /// `log2(#C) / n`.
    pub achieved_rate: Option<f64>,
    pub issues: Vec<Infeasibility>,
}

/// Sets `d = t + 1` from the channel statistics, builds the greedy code and
/// compares its rate to `alpha - H(p_eff)`.
pub fn theorem1_pipeline<T: Probability>(
    dict: &DictionarySource,
    profile: &NoiseProfile<T>,
    eps: T,
) -> Result<Theorem1Report<T>> {
    let n = dict.word_len();
    Error::check_len(n, profile.len())?;
    if let DictionarySource::Explicit(d) = dict {
        if d.alphabet().size() != 2 {
            return Err(Error::domain(
                "the binary pipeline needs a binary dictionary",
            ));
        }
    }
    let stats = channel_stats(profile, eps)?;
    let d = stats.distance();
    let alpha = dict.alpha();
    let p_eff = stats.p_eff.lossy_f64();
    let mut issues = Vec::new();
    let target_rate = if stats.exceeds_half() {
        issues.push(Infeasibility::NoiseTooHigh { p_eff });
        None
    } else {
        Some(alpha - binary_entropy(p_eff)?)
    };
    if d > n as u64 {
        issues.push(Infeasibility::DistanceExceedsLength { d, n });
    }

    let mut construction = None;
    if issues.iter().all(|i| !i.blocks_construction()) {
        match dict.materialize() {
            Some(materialized) => {
                let dist = d.to_usize().expect("d <= n fits usize");
                construction = Some(greedy_gv_construct(&materialized?, dist)?);
            }
            None => issues.push(Infeasibility::NotMaterialized { n }),
        }
    }
    let achieved_rate = construction.as_ref().map(|c| c.code.rate_bits());
    Ok(Theorem1Report {
        stats,
        d,
        alpha,
        target_rate,
        construction,
        achieved_rate,
        issues,
    })
}
