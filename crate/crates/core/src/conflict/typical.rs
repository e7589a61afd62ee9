//! Exhaustive typical sets of a block of `n` uses of a memoryless channel.

use rayon::prelude::*;

use super::{Dmc, TransitionLaw};
use crate::entropy::{Distribution, JointDistribution, JointEntropies};
use crate::error::{Error, Result};
use crate::scalar::{constant, Real};

/// Largest `#X^n + #Y^n` that is enumerated.
pub const WORD_SPACE_CAP: usize = 1 << 24;
/// Largest `#A1 * #A2` that is scanned for jointly typical pairs.
pub const PAIR_CAP: usize = 1 << 28;

/// Logarithm base used for entropies and typicality thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdBase {
    /// Base `#X`, which is base 2 for binary inputs.
    #[default]
    AlphabetSize,
    /// Base `e`.
    Natural,
}

impl ThresholdBase {
    pub fn value<F: Real>(self, input_alphabet: usize) -> F {
        match self {
            ThresholdBase::AlphabetSize => constant(input_alphabet as f64),
            ThresholdBase::Natural => F::one().exp(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThresholdBase::AlphabetSize => "alphabet",
            ThresholdBase::Natural => "natural",
        }
    }
}

/// `n` independent uses of a per-symbol channel, with words indexed in
/// base `#X` (inputs) and `#Y` (outputs), most significant symbol first.
#[derive(Debug, Clone)]
pub struct BlockChannel<F> {
    symbol: Dmc<F>,
    n: usize,
    inputs: usize,
    outputs: usize,
}

impl<F: Real> BlockChannel<F> {
    pub fn new(symbol: Dmc<F>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("block length must be positive"));
        }
        let inputs = checked_pow(symbol.inputs(), n)?;
        let outputs = checked_pow(symbol.outputs(), n)?;
        if inputs.saturating_add(outputs) > WORD_SPACE_CAP {
            return Err(Error::Resource(format!(
                "#X^n + #Y^n = {} exceeds {WORD_SPACE_CAP}",
                inputs.saturating_add(outputs)
            )));
        }
        Ok(Self {
            symbol,
            n,
            inputs,
            outputs,
        })
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn symbol_channel(&self) -> &Dmc<F> {
        &self.symbol
    }

    /// Base-`q` digits of `index`, most significant first.
    pub fn digits(index: usize, q: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = rest % q;
            rest /= q;
        }
        out
    }
}

impl<F: Real> TransitionLaw<F> for BlockChannel<F> {
    fn input_count(&self) -> usize {
        self.inputs
    }

    fn output_count(&self) -> usize {
        self.outputs
    }

    fn prob(&self, x: usize, y: usize) -> F {
        let (q, r) = (self.symbol.inputs(), self.symbol.outputs());
        let (mut x, mut y) = (x, y);
        let mut p = F::one();
        for _ in 0..self.n {
            p = p * self.symbol.rows()[x % q][y % r];
            x /= q;
            y /= r;
        }
        p
    }
}

fn checked_pow(base: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::Resource(format!("{base}^{n} overflows")))
}

/// Product probability of every word of length `n` under an i.i.d. law.
fn product_probs<F: Real>(letter: &[F], n: usize, count: usize) -> Vec<F> {
    let q = letter.len();
    (0..count)
        .into_par_iter()
        .map(|mut i| {
            let mut p = F::one();
            for _ in 0..n {
                p = p * letter[i % q];
                i /= q;
            }
            p
        })
        .collect()
}

/// The sets `A1`, `A2`, `A = (A1 x A2) ∩ A3`, the per-input typical output
/// sets `D_n(x)` and `B = A4`, all enumerated exactly.
#[derive(Debug, Clone)]
pub struct TypicalSets<F> {
    n: usize,
    eps: F,
    base: F,
    entropies: JointEntropies<F>,
    channel: BlockChannel<F>,
    p_x: Vec<F>,
    p_y: Vec<F>,
    a1: Vec<usize>,
    a1_slot: Vec<Option<usize>>,
    a2: Vec<usize>,
    in_a2: Vec<bool>,
    typical_outputs: Vec<Vec<usize>>,
    typical_mass: Vec<F>,
    b: Vec<usize>,
    prob_typical: F,
}

impl<F: Real> TypicalSets<F> {
    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> F {
        self.eps
    }

    /// The logarithm base the thresholds and entropies use.
    pub fn base(&self) -> F {
        self.base
    }

    pub fn entropies(&self) -> &JointEntropies<F> {
        &self.entropies
    }

    pub fn channel(&self) -> &BlockChannel<F> {
        &self.channel
    }

    pub fn input_words(&self) -> usize {
        self.p_x.len()
    }

    pub fn output_words(&self) -> usize {
        self.p_y.len()
    }

    pub fn input_prob(&self, x: usize) -> F {
        self.p_x[x]
    }

    pub fn output_prob(&self, y: usize) -> F {
        self.p_y[y]
    }

    /// `A_{n,1}`, ascending.
    pub fn a1(&self) -> &[usize] {
        &self.a1
    }

    /// `A_{n,2}`, ascending.
    pub fn a2(&self) -> &[usize] {
        &self.a2
    }

    pub fn in_a1(&self, x: usize) -> bool {
        self.a1_slot.get(x).is_some_and(Option::is_some)
    }

    pub fn in_a2(&self, y: usize) -> bool {
        self.in_a2.get(y).copied().unwrap_or(false)
    }

    /// Membership in `A_{n,3}`.
    pub fn in_a3(&self, x: usize, y: usize) -> bool {
        let joint = self.p_x[x] * self.channel.prob(x, y);
        self.within_band(joint, self.entropies.h_xy)
    }

    /// Membership in `A_n`.
    pub fn in_typical(&self, x: usize, y: usize) -> bool {
        self.in_a1(x) && self.in_a2(y) && self.in_a3(x, y)
    }

    /// `D_n(x)` for `x` in `A1`, ascending.
    pub fn typical_outputs(&self, x: usize) -> Option<&[usize]> {
        self.a1_slot
            .get(x)
            .copied()
            .flatten()
            .map(|s| self.typical_outputs[s].as_slice())
    }

    /// `sum_{y in D_n(x)} p(y | x)` for `x` in `A1`.
    pub fn typical_mass(&self, x: usize) -> Option<F> {
        self.a1_slot
            .get(x)
            .copied()
            .flatten()
            .map(|s| self.typical_mass[s])
    }

    /// `B_n = A_{n,4}`: inputs of `A1` whose typical outputs carry at least
    /// `1 - eps` of their conditional mass. Ascending.
    pub fn b(&self) -> &[usize] {
        &self.b
    }

    /// Exact `P((X, Y) in A_n)`.
    pub fn prob_typical(&self) -> F {
        self.prob_typical
    }

    /// `max_x #D_n(x)` over all of `A1`.
    pub fn max_typical_outputs(&self) -> usize {
        self.typical_outputs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `max_y #{x in A1 : (x, y) in A_n}`.
    pub fn max_typical_inputs(&self) -> usize {
        let mut counts = vec![0usize; self.p_y.len()];
        for set in &self.typical_outputs {
            for &y in set {
                counts[y] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// `base^{n (h + 2 eps)}`, the cap on `#D_n(x)` (with `h = H(Y|X)`) or on
    /// the conflict sets (with `h = H(X|Y)`).
    pub fn degree_bound(&self, h: F) -> F {
        self.pow_n(h + self.eps + self.eps)
    }

    pub(crate) fn pow_n(&self, exponent: F) -> F {
        self.base.powf(constant::<F>(self.n as f64) * exponent)
    }

    /// `base^{-n (h + eps)} <= p <= base^{-n (h - eps)}`, tested on
    /// `-log_base(p) / n`.
    fn within_band(&self, p: F, h: F) -> bool {
        if !(p > F::zero()) {
            return false;
        }
        let rate = -p.ln() / (self.base.ln() * constant::<F>(self.n as f64));
        rate >= h - self.eps && rate <= h + self.eps
    }
}

/// Enumerates the typical sets of `n` channel uses with i.i.d. inputs `p_x`.
pub fn build_typical_sets<F: Real>(
    p_x: &[F],
    channel: &Dmc<F>,
    n: usize,
    eps: F,
    base: ThresholdBase,
) -> Result<TypicalSets<F>> {
    if !(eps > F::zero()) {
        return Err(Error::domain("typicality slack eps must be positive"));
    }
    let base_value: F = base.value(channel.inputs());
    let p_x_dist = Distribution::new(p_x.to_vec(), base_value)?;
    let joint = JointDistribution::from_channel(&p_x_dist, channel.rows())?;
    let entropies = joint.entropies();
    let block = BlockChannel::new(channel.clone(), n)?;

    let px_words = product_probs(p_x, n, block.input_count());
    let py_words = product_probs(joint.p_y(), n, block.output_count());

    let mut sets = TypicalSets {
        n,
        eps,
        base: base_value,
        entropies,
        channel: block,
        p_x: px_words,
        p_y: py_words,
        a1: Vec::new(),
        a1_slot: Vec::new(),
        a2: Vec::new(),
        in_a2: Vec::new(),
        typical_outputs: Vec::new(),
        typical_mass: Vec::new(),
        b: Vec::new(),
        prob_typical: F::zero(),
    };

    sets.a1 = (0..sets.p_x.len())
        .filter(|&x| sets.within_band(sets.p_x[x], entropies.h_x))
        .collect();
    sets.in_a2 = (0..sets.p_y.len())
        .map(|y| sets.within_band(sets.p_y[y], entropies.h_y))
        .collect();
    sets.a2 = (0..sets.in_a2.len()).filter(|&y| sets.in_a2[y]).collect();
    let pairs = sets.a1.len().saturating_mul(sets.a2.len());
    if pairs > PAIR_CAP {
        return Err(Error::Resource(format!(
            "#A1 * #A2 = {pairs} exceeds {PAIR_CAP}"
        )));
    }
    sets.a1_slot = vec![None; sets.p_x.len()];
    for (slot, &x) in sets.a1.iter().enumerate() {
        sets.a1_slot[x] = Some(slot);
    }

    let rows: Vec<(Vec<usize>, F)> = sets
        .a1
        .par_iter()
        .map(|&x| {
            let mut outs = Vec::new();
            let mut mass = F::zero();
            for &y in &sets.a2 {
                let cond = sets.channel.prob(x, y);
                if sets.within_band(sets.p_x[x] * cond, entropies.h_xy) {
                    outs.push(y);
                    mass = mass + cond;
                }
            }
            (outs, mass)
        })
        .collect();
    let (outputs, masses): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    sets.typical_outputs = outputs;
    sets.typical_mass = masses;

    let floor = F::one() - eps;
    sets.b = sets
        .a1
        .iter()
        .zip(&sets.typical_mass)
        .filter_map(|(&x, &m)| (m >= floor).then_some(x))
        .collect();
    sets.prob_typical = sets
        .a1
        .iter()
        .zip(&sets.typical_mass)
        .fold(F::zero(), |acc, (&x, &m)| acc + sets.p_x[x] * m);
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(p: f64) -> Dmc<f64> {
        Dmc::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).unwrap()
    }

    #[test]
    fn uniform_input_makes_every_word_typical() {
        for n in [3, 6, 9] {
            let t = build_typical_sets(&[0.5, 0.5], &bsc(0.2), n, 0.05, ThresholdBase::default())
                .unwrap();
            assert_eq!(t.a1().len(), 1 << n);
            assert_eq!(t.a2().len(), 1 << n);
        }
    }

    #[test]
    fn skewed_input_excludes_atypical_words() {
        let t =
            build_typical_sets(&[0.9, 0.1], &bsc(0.0), 10, 0.1, ThresholdBase::default()).unwrap();
        // All-zero has -log2 p / n = 0.152 vs H = 0.469.
        assert!(!t.in_a1(0));
        assert!(t.a1().len() < 1 << 10);
    }

    #[test]
    fn block_channel_product_law() {
        let block = BlockChannel::new(bsc(0.1), 3).unwrap();
        // x = 000, y = 011: two flips.
        assert!((block.prob(0b000, 0b011) - 0.9 * 0.1 * 0.1).abs() < 1e-15);
        for x in 0..8 {
            let total: f64 = (0..8).map(|y| block.prob(x, y)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert_eq!(BlockChannel::<f64>::digits(5, 2, 4), vec![0, 1, 0, 1]);
    }

    #[test]
    fn exact_typical_mass_against_binomial_enumeration() {
        // For BSC(0.11) with uniform input, (x, y) is jointly typical iff the
        // number of flips k satisfies the band; P(A_n) is a binomial sum.
        let q: f64 = 0.11;
        let h = 1.0 + (-(q * q.log2()) - (1.0 - q) * (1.0 - q).log2());
        for (base, ln_b) in [
            (ThresholdBase::AlphabetSize, 2f64.ln()),
            (ThresholdBase::Natural, 1.0),
        ] {
            for n in [4usize, 6, 8, 10] {
                let eps = 0.3;
                let h_base = h * 2f64.ln() / ln_b;
                let mut expected = 0.0;
                for k in 0..=n {
                    let lp = -((0.5f64).ln() * n as f64
                        + q.ln() * k as f64
                        + (1.0 - q).ln() * (n - k) as f64)
                        / ln_b
                        / n as f64;
                    if lp >= h_base - eps && lp <= h_base + eps {
                        let c = (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64);
                        expected += c * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
                    }
                }
                let t = build_typical_sets(&[0.5, 0.5], &bsc(q), n, eps, base).unwrap();
                assert!(
                    (t.prob_typical() - expected).abs() < 1e-12,
                    "n={n} base={base:?}: {} vs {expected}",
                    t.prob_typical()
                );
            }
        }
    }

    #[test]
    fn base_two_typical_sets_are_too_thin_at_small_n() {
        // The jointly typical band excludes the error-free output, so no
        // input reaches 1 - eps = 0.7 of typical mass at these lengths.
        for n in [6, 8, 10] {
            let t =
                build_typical_sets(&[0.5, 0.5], &bsc(0.11), n, 0.3, ThresholdBase::AlphabetSize)
                    .unwrap();
            assert!(t.b().is_empty());
            assert!(t.prob_typical() < 0.7);
        }
        let t =
            build_typical_sets(&[0.5, 0.5], &bsc(0.11), 10, 0.3, ThresholdBase::Natural).unwrap();
        assert_eq!(t.b().len(), 1 << 10);
        // 1 + 10 + 45 outputs within two flips.
        assert_eq!(t.max_typical_outputs(), 56);
    }

    #[test]
    fn definitions_hold_pointwise() {
        let ch = Dmc::new(vec![vec![0.8, 0.15, 0.05], vec![0.1, 0.6, 0.3]]).unwrap();
        let t = build_typical_sets(&[0.3, 0.7], &ch, 5, 0.25, ThresholdBase::Natural).unwrap();
        for &x in t.a1() {
            let outs = t.typical_outputs(x).unwrap();
            for y in 0..t.output_words() {
                assert_eq!(outs.contains(&y), t.in_typical(x, y));
            }
        }
        for &x in t.b() {
            let mass: f64 = t
                .typical_outputs(x)
                .unwrap()
                .iter()
                .map(|&y| t.channel().prob(x, y))
                .sum();
            assert!(mass >= 1.0 - t.eps());
        }
    }

    #[test]
    fn caps_and_domains() {
        assert!(matches!(
            build_typical_sets(&[0.5, 0.5], &bsc(0.1), 24, 0.1, ThresholdBase::default()),
            Err(Error::Resource(_))
        ));
        assert!(
            build_typical_sets(&[0.5, 0.5], &bsc(0.1), 4, 0.0, ThresholdBase::default()).is_err()
        );
        assert!(
            build_typical_sets(&[0.5, 0.4], &bsc(0.1), 4, 0.1, ThresholdBase::default()).is_err()
        );
    }
}
