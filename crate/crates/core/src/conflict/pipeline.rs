//! Typical-set dictionaries with conflict-set codes on top.

use rand::seq::SliceRandom;

use super::typical::{build_typical_sets, BlockChannel, ThresholdBase, TypicalSets};
use super::{
    error_profile_with, greedy_disjoint_packing, Dmc, ErrorProfile, ProbableSetFamily,
    TransitionLaw,
};
use crate::binary_channel::stream_rng;
use crate::error::{Error, Result};
use crate::scalar::{constant, Real};

/// How the dictionary is picked out of `B_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DictSelector {
    /// The smallest indices of `B_n`.
    #[default]
    Canonical,
    /// A seeded uniform subset, scanned in ascending order.
    Seeded(u64),
}

/// Everything the pipeline computed, for reporting.
#[derive(Debug, Clone)]
pub struct Theorem3Report<F> {
    pub sets: TypicalSets<F>,
    pub alpha: F,
    /// `base^{n (H(X) - 2 eps)}`.
    pub b_size_target: F,
    /// `ceil(base^{n (alpha - 2 eps)})`.
    pub dict_target: usize,
    /// Block-word indices of the dictionary, ascending.
    pub dictionary: Vec<usize>,
    pub shortfall: bool,
    /// Probable sets `D_n(x)` over the dictionary (inputs are dictionary
    /// positions, outputs are block-word indices).
    pub family: Option<ProbableSetFamily<F>>,
    pub d_l_bound: F,
    pub d_r_bound: F,
    /// Largest `M` with `M d_L d_R < N0`.
    pub m_admissible: usize,
    /// Block-word indices of the code.
    pub code: Vec<usize>,
    /// No `M >= 1` satisfies the packing condition; the code is the single
    /// fallback word.
    pub below_threshold: bool,
    /// `log_base(#C) / n`.
    pub achieved_rate: Option<F>,
    /// `alpha - H(Y|X) - H(X|Y) - 7 eps`.
    pub target_rate: F,
    /// Outputs outside `A_{n,2}` count as errors.
    pub errors: Option<ErrorProfile<F>>,
}

impl<F: Real> Theorem3Report<F> {
    pub fn d_l(&self) -> usize {
        self.family.as_ref().map_or(0, ProbableSetFamily::d_l)
    }

    pub fn d_r(&self) -> usize {
        self.family.as_ref().map_or(0, ProbableSetFamily::d_r)
    }
}

struct DictionaryLaw<'a, F> {
    block: &'a BlockChannel<F>,
    dictionary: &'a [usize],
}

impl<F: Real> TransitionLaw<F> for DictionaryLaw<'_, F> {
    fn input_count(&self) -> usize {
        self.dictionary.len()
    }

    fn output_count(&self) -> usize {
        self.block.output_count()
    }

    fn prob(&self, x: usize, y: usize) -> F {
        self.block.prob(self.dictionary[x], y)
    }
}

/// Builds the typical sets, takes a dictionary of `ceil(base^{n(alpha -
/// 2 eps)})` words from `B_n`, and packs a conflict-set code using the
/// typical output sets as probable sets. `alpha = None` means `H(X)`.
pub fn theorem3_pipeline<F: Real>(
    p_x: &[F],
    channel: &Dmc<F>,
    n: usize,
    eps: F,
    alpha: Option<F>,
    selector: DictSelector,
    base: ThresholdBase,
) -> Result<Theorem3Report<F>> {
    if !(eps > F::zero() && eps < F::one()) {
        return Err(Error::domain("eps must lie strictly between 0 and 1"));
    }
    let sets = build_typical_sets(p_x, channel, n, eps, base)?;
    let h = *sets.entropies();
    let alpha = alpha.unwrap_or(h.h_x);
    let slack: F = constant(1e-12);
    if !(alpha > F::zero()) || alpha > h.h_x + slack {
        return Err(Error::domain(format!(
            "alpha = {} must lie in (0, H(X) = {}]",
            alpha.lossy_f64(),
            h.h_x.lossy_f64()
        )));
    }
    let two_eps = eps + eps;
    let b_size_target = sets.pow_n(h.h_x - two_eps);
    let dict_target = sets
        .pow_n(alpha - two_eps)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX);

    let mut dictionary: Vec<usize> = sets.b().to_vec();
    if let DictSelector::Seeded(seed) = selector {
        dictionary.shuffle(&mut stream_rng(seed, 0));
    }
    let shortfall = dictionary.len() < dict_target;
    dictionary.truncate(dict_target);
    dictionary.sort_unstable();

    let d_l_bound = sets.degree_bound(h.h_y_given_x);
    let d_r_bound = sets.degree_bound(h.h_x_given_y);
    let target_rate = alpha - h.h_y_given_x - h.h_x_given_y - constant::<F>(7.0) * eps;

    if dictionary.is_empty() {
        return Ok(Theorem3Report {
            sets,
            alpha,
            b_size_target,
            dict_target,
            dictionary,
            shortfall,
            family: None,
            d_l_bound,
            d_r_bound,
            m_admissible: 0,
            code: Vec::new(),
            below_threshold: true,
            achieved_rate: None,
            target_rate,
            errors: None,
        });
    }

    let probable: Vec<Vec<usize>> = dictionary
        .iter()
        .map(|&x| {
            sets.typical_outputs(x)
                .expect("B_n lies inside A1")
                .to_vec()
        })
        .collect();
    let family = ProbableSetFamily::from_sets(eps, sets.output_words(), probable)?;
    let law = DictionaryLaw {
        block: sets.channel(),
        dictionary: &dictionary,
    };
    family.verify_mass(&law)?;

    let m_admissible = family.max_admissible_size();
    let below_threshold = m_admissible == 0;
    let packed = greedy_disjoint_packing(&family, Some(m_admissible.max(1)));
    let errors = error_profile_with(&law, &family, &packed, |y| !sets.in_a2(y))?;
    let code: Vec<usize> = packed.members().iter().map(|&i| dictionary[i]).collect();
    let achieved_rate =
        Some(constant::<F>(code.len() as f64).ln() / (sets.base().ln() * constant::<F>(n as f64)));

    Ok(Theorem3Report {
        sets,
        alpha,
        b_size_target,
        dict_target,
        dictionary,
        shortfall,
        family: Some(family),
        d_l_bound,
        d_r_bound,
        m_admissible,
        code,
        below_threshold,
        achieved_rate,
        target_rate,
        errors: Some(errors),
    })
}
