//! Error-correcting codes drawn from predetermined dictionaries.
//!
//! Two constructions live here:
//!
//! * For the binary substitution/erasure channel ([`binary_channel`]), a
//!   greedy Gilbert-Varshamov code inside any dictionary ([`gv`]) decoded in
//!   two stages: minimum distance on the unerased positions, then unique
//!   completion of the erased ones.
//! * For a general discrete memoryless channel ([`conflict`]), a greedy
//!   packing of inputs with disjoint probable output sets, decoded by conflict
//!   sets, and the typical-set dictionaries that feed it.
//!
//! Probability-carrying types are generic over the scalar ([`scalar`]); use
//! `f64` for speed and [`Rational`] when every sum must be exact.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binary_channel;
pub mod conflict;
pub mod entropy;
pub mod error;
pub mod gv;
pub mod io;
pub mod scalar;
pub mod words;

pub use binary_channel::{
    channel_stats, concentration_bound, sample_noise, stream_rng, transmit, ChannelStats,
    NoiseEvent, NoiseProfile, NoiseRealization,
};
pub use conflict::{
    build_probable_sets, build_typical_sets, conflict_decode, exact_error_probability,
    greedy_disjoint_code, greedy_disjoint_packing, theorem3_pipeline, BlockChannel, ConflictCode,
    ConflictDecoder, DictSelector, Dmc, ErrorProfile, ProbableSetFamily, ProbableSetStrategy,
    Theorem3Report, ThresholdBase, TransitionLaw, TypicalSets,
};
pub use entropy::{
    asymmetric_alpha0, binary_entropy, entropy, joint_conditional_entropies, rate_curve,
    stirling_binomial_bound, Distribution, JointDistribution, JointEntropies, RatePoint,
};
pub use error::{Error, Result};
pub use gv::{
    greedy_gv_construct, theorem1_pipeline, two_stage_decode, DecodeFailure, DecodeOutcome,
    DictionarySource, GvReport, Infeasibility, Theorem1Report, TwoStageDecoder,
};
pub use scalar::{Probability, Real};
pub use words::{
    ball_volume, hamming_distance, min_distance, puncture, Alphabet, Code, Dictionary,
    ReceivedWord, Symbol, Word,
};

/// Exact rational probabilities.
pub type Rational = num_rational::Ratio<i64>;

pub type Distribution64 = Distribution<f64>;
pub type JointDistribution64 = JointDistribution<f64>;
pub type NoiseProfile64 = NoiseProfile<f64>;
pub type ExactNoiseProfile = NoiseProfile<Rational>;
pub type Dmc64 = Dmc<f64>;
pub type ExactDmc = Dmc<Rational>;
pub type ProbableSetFamily64 = ProbableSetFamily<f64>;
pub type ExactProbableSetFamily = ProbableSetFamily<Rational>;
pub type TypicalSets64 = TypicalSets<f64>;
