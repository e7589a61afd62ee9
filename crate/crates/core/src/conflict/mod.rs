//! Conflict-set decoding over an arbitrary discrete memoryless channel.
//!
//! Every input `x` gets an eps-probable output set `D(x)` carrying at least
//! `1 - eps` of its conditional mass; `C(y)` collects the inputs whose
//! probable set contains `y`. Inputs with pairwise disjoint probable sets
//! form a code that the conflict-set decoder recovers with error at most
//! `eps`, and greedy packing finds `M` of them whenever
//! `M * d_L * d_R < #X0`.

mod pipeline;
mod typical;

pub use pipeline::{theorem3_pipeline, DictSelector, Theorem3Report};
pub use typical::{build_typical_sets, BlockChannel, ThresholdBase, TypicalSets};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Probability;

/// Largest `#X0 * #Y0` for which errors are summed exactly.
pub const EXACT_ERROR_CAP: usize = 10_000_000;

/// Conditional output probabilities `p(y | x)` over index sets.
pub trait TransitionLaw<T>: Sync {
    fn input_count(&self) -> usize;
    fn output_count(&self) -> usize;
    fn prob(&self, x: usize, y: usize) -> T;
}

/// A row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc<T> {
    rows: Vec<Vec<T>>,
    outputs: usize,
}

impl<T: Probability> Dmc<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let outputs = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || outputs == 0 {
            return Err(Error::domain(
                "channel needs at least one input and one output",
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            Error::check_len(outputs, row.len())?;
            let mut sum = T::zero();
            for p in row {
                if p.is_negative_value() {
                    return Err(Error::domain(format!(
                        "row {} has a negative entry {}",
                        i + 1,
                        p.lossy_f64()
                    )));
                }
                sum = sum + p.clone();
            }
            let gap = if sum > T::one() {
                sum.clone() - T::one()
            } else {
                T::one() - sum.clone()
            };
            if gap > T::sum_tolerance() {
                return Err(Error::domain(format!(
                    "row {} sums to {} instead of 1",
                    i + 1,
                    sum.lossy_f64()
                )));
            }
        }
        Ok(Self { rows, outputs })
    }

    /// The noiseless channel on `size` symbols.
    pub fn identity(size: usize) -> Result<Self> {
        Self::new(
            (0..size)
                .map(|i| {
                    (0..size)
                        .map(|j| if i == j { T::one() } else { T::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }
}

impl<T: Probability> TransitionLaw<T> for Dmc<T> {
    fn input_count(&self) -> usize {
        self.rows.len()
    }

    fn output_count(&self) -> usize {
        self.outputs
    }

    fn prob(&self, x: usize, y: usize) -> T {
        self.rows[x][y].clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbableSetStrategy {
    /// Most likely outputs first (lower index on ties) until the mass
    /// reaches `1 - eps`.
    GreedyMass,
    /// Every output.
    FullRow,
}

/// Probable sets `D(x)`, their conflict sets `C(y)` and maximum degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbableSetFamily<T> {
    eps: T,
    sets: Vec<Vec<usize>>,
    conflicts: Vec<Vec<usize>>,
    d_l: usize,
    d_r: usize,
}

impl<T: Probability> ProbableSetFamily<T> {
    /// Builds the family from explicit probable sets over `outputs` outputs.
    /// Sets are sorted and deduplicated; the mass condition is not checked
    /// here (see [`ProbableSetFamily::verify_mass`]).
    pub fn from_sets(eps: T, outputs: usize, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        check_eps(&eps)?;
        let mut conflicts = vec![Vec::new(); outputs];
        for (x, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            for &y in set.iter() {
                let slot = conflicts
                    .get_mut(y)
                    .ok_or_else(|| Error::domain(format!("output {y} is outside 0..{outputs}")))?;
                slot.push(x);
            }
        }
        let d_l = sets.iter().map(Vec::len).max().unwrap_or(0);
        let d_r = conflicts.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            eps,
            sets,
            conflicts,
            d_l,
            d_r,
        })
    }

    pub fn eps(&self) -> &T {
        &self.eps
    }

    pub fn inputs(&self) -> usize {
        self.sets.len()
    }

    pub fn outputs(&self) -> usize {
        self.conflicts.len()
    }

    /// `D(x, eps)`, ascending.
    pub fn probable_set(&self, x: usize) -> &[usize] {
        &self.sets[x]
    }

    /// `C(y, eps)`, ascending.
    pub fn conflict_set(&self, y: usize) -> &[usize] {
        &self.conflicts[y]
    }

    pub fn d_l(&self) -> usize {
        self.d_l
    }

    pub fn d_r(&self) -> usize {
        self.d_r
    }

    /// Largest `M` with `M * d_L * d_R < #X0`.
    pub fn max_admissible_size(&self) -> usize {
        let degree = self.d_l * self.d_r;
        if degree == 0 {
            return self.inputs();
        }
        self.inputs().saturating_sub(1) / degree
    }

    /// Conditional mass `sum_{y in D(x)} p(y | x)`.
    pub fn mass<L: TransitionLaw<T>>(&self, law: &L, x: usize) -> T {
        self.sets[x]
            .iter()
            .fold(T::zero(), |acc, &y| acc + law.prob(x, y))
    }

    /// Checks that every probable set carries at least `1 - eps`.
    pub fn verify_mass<L: TransitionLaw<T>>(&self, law: &L) -> Result<()> {
        Error::check_len(self.inputs(), law.input_count())?;
        let floor = T::one() - self.eps.clone();
        for x in 0..self.inputs() {
            let m = self.mass(law, x);
            if m < floor {
                return Err(Error::domain(format!(
                    "probable set of input {x} has mass {} < 1 - eps",
                    m.lossy_f64()
                )));
            }
        }
        Ok(())
    }
}

fn check_eps<T: Probability>(eps: &T) -> Result<()> {
    if !(*eps > T::zero() && *eps < T::one()) {
        return Err(Error::domain(format!(
            "eps = {} must lie strictly between 0 and 1",
            eps.lossy_f64()
        )));
    }
    Ok(())
}

pub fn build_probable_sets<T: Probability>(
    channel: &Dmc<T>,
    eps: T,
    strategy: ProbableSetStrategy,
) -> Result<ProbableSetFamily<T>> {
    check_eps(&eps)?;
    let floor = T::one() - eps.clone();
    let sets = channel
        .rows()
        .iter()
        .map(|row| match strategy {
            ProbableSetStrategy::FullRow => (0..row.len()).collect(),
            ProbableSetStrategy::GreedyMass => {
                let mut order: Vec<usize> = (0..row.len()).collect();
                // Stable sort keeps the lower index first among equal masses.
                order.sort_by(|&a, &b| {
                    row[b]
                        .partial_cmp(&row[a])
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
                let mut mass = T::zero();
                let mut set = Vec::new();
                for y in order {
                    if mass >= floor {
                        break;
                    }
                    mass = mass + row[y].clone();
                    set.push(y);
                }
                set
            }
        })
        .collect();
    let family = ProbableSetFamily::from_sets(eps, channel.outputs(), sets)?;
    // Float rows may fall a hair short of 1 and never reach the floor.
    family.verify_mass(channel)?;
    Ok(family)
}

/// Indices into the family's input set; `members[0]` is the decoder fallback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictCode {
    members: Vec<usize>,
}

impl ConflictCode {
    pub fn new(members: Vec<usize>) -> Result<Self> {
        let mut sorted = members.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("code members must be distinct"));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Scans inputs in index order, keeping each one whose probable set misses
/// every kept set, until `limit` words are kept or the inputs run out.
pub fn greedy_disjoint_packing<T: Probability>(
    family: &ProbableSetFamily<T>,
    limit: Option<usize>,
) -> ConflictCode {
    let limit = limit.unwrap_or(usize::MAX);
    let mut blocked = vec![false; family.inputs()];
    let mut members = Vec::new();
    for x in 0..family.inputs() {
        if members.len() >= limit {
            break;
        }
        if blocked[x] {
            continue;
        }
        members.push(x);
        for &y in family.probable_set(x) {
            for &other in family.conflict_set(y) {
                blocked[other] = true;
            }
        }
    }
    ConflictCode { members }
}

/// `M` inputs with pairwise disjoint probable sets, provided
/// `M < #X0 / (d_L d_R)`.
pub fn greedy_disjoint_code<T: Probability>(
    family: &ProbableSetFamily<T>,
    m: usize,
) -> Result<ConflictCode> {
    let degree = family.d_l() * family.d_r();
    if m.saturating_mul(degree) >= family.inputs() {
        return Err(Error::Capacity {
            requested: m,
            conflict_degree: degree,
            inputs: family.inputs(),
        });
    }
    let code = greedy_disjoint_packing(family, Some(m));
    debug_assert_eq!(code.len(), m);
    Ok(code)
}

/// Precomputed conflict-set decoder for one code.
#[derive(Debug, Clone)]
pub struct ConflictDecoder {
    owner: Vec<Option<usize>>,
    fallback: usize,
}

impl ConflictDecoder {
    pub fn new<T: Probability>(family: &ProbableSetFamily<T>, code: &ConflictCode) -> Result<Self> {
        let fallback = *code
            .members()
            .first()
            .ok_or_else(|| Error::domain("cannot decode with an empty code"))?;
        let mut in_code = vec![false; family.inputs()];
        for &x in code.members() {
            *in_code
                .get_mut(x)
                .ok_or_else(|| Error::domain(format!("code member {x} is not an input")))? = true;
        }
        let owner = (0..family.outputs())
            .map(|y| {
                let mut hits = family.conflict_set(y).iter().filter(|&&x| in_code[x]);
                match (hits.next(), hits.next()) {
                    (Some(&x), None) => Some(x),
                    _ => None,
                }
            })
            .collect();
        Ok(Self { owner, fallback })
    }

    pub fn decode(&self, y: usize) -> usize {
        self.owner
            .get(y)
            .copied()
            .flatten()
            .unwrap_or(self.fallback)
    }
}

/// Returns the code word `x_j` with `y in D(x_j)` when no other code word's
/// probable set contains `y`, and the first code word otherwise.
pub fn conflict_decode<T: Probability>(
    family: &ProbableSetFamily<T>,
    code: &ConflictCode,
    y: usize,
) -> Result<usize> {
    if y >= family.outputs() {
        return Err(Error::domain(format!("output {y} is out of range")));
    }
    let fallback = *code
        .members()
        .first()
        .ok_or_else(|| Error::domain("cannot decode with an empty code"))?;
    let mut hits = family
        .conflict_set(y)
        .iter()
        .filter(|x| code.members().contains(x));
    Ok(match (hits.next(), hits.next()) {
        (Some(&x), None) => x,
        _ => fallback,
    })
}

/// Exact per-word decoding error of a code.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile<T> {
    pub per_word: Vec<T>,
    pub max: T,
}

/// Sums `p(y | x)` over outputs that are charged or decode to something
/// other than `x`, for every code word `x`.
pub fn error_profile_with<T, L, F>(
    law: &L,
    family: &ProbableSetFamily<T>,
    code: &ConflictCode,
    charged: F,
) -> Result<ErrorProfile<T>>
where
    T: Probability,
    L: TransitionLaw<T>,
    F: Fn(usize) -> bool + Sync,
{
    Error::check_len(family.inputs(), law.input_count())?;
    Error::check_len(family.outputs(), law.output_count())?;
    let decoder = ConflictDecoder::new(family, code)?;
    let per_word: Vec<T> = code
        .members()
        .par_iter()
        .map(|&x| {
            (0..law.output_count())
                .filter(|&y| charged(y) || decoder.decode(y) != x)
                .fold(T::zero(), |acc, y| acc + law.prob(x, y))
        })
        .collect();
    let max = per_word
        .iter()
        .cloned()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    Ok(ErrorProfile { per_word, max })
}

/// Exact conflict-set decoding error for a materialized channel.
pub fn exact_error_probability<T: Probability>(
    channel: &Dmc<T>,
    family: &ProbableSetFamily<T>,
    code: &ConflictCode,
) -> Result<ErrorProfile<T>> {
    let cells = channel.inputs().saturating_mul(channel.outputs());
    if cells > EXACT_ERROR_CAP {
        return Err(Error::Resource(format!(
            "#X0 * #Y0 = {cells} exceeds {EXACT_ERROR_CAP}"
        )));
    }
    error_profile_with(channel, family, code, |_| false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    #[test]
    fn dmc_validation_cites_row_sum() {
        let err = Dmc::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).unwrap_err();
        assert!(err.to_string().contains("row 1 sums to 0.9"), "{err}");
        assert!(Dmc::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(Dmc::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn identity_channel_has_singleton_sets() {
        let ch = Dmc::<f64>::identity(5).unwrap();
        for eps in [0.01, 0.5, 0.99] {
            let fam = build_probable_sets(&ch, eps, ProbableSetStrategy::GreedyMass).unwrap();
            assert_eq!((fam.d_l(), fam.d_r()), (1, 1));
            for x in 0..5 {
                assert_eq!(fam.probable_set(x), &[x]);
            }
        }
    }

    #[test]
    fn full_row_is_complete_bipartite() {
        let ch = Dmc::new(vec![vec![q(1, 2), q(1, 2), q(0, 1)]; 4]).unwrap();
        let fam = build_probable_sets(&ch, q(1, 10), ProbableSetStrategy::FullRow).unwrap();
        assert_eq!((fam.d_l(), fam.d_r()), (3, 4));
    }

    #[test]
    fn greedy_mass_hand_trace() {
        let ch = Dmc::new(vec![vec![q(9, 10), q(1, 10)], vec![q(1, 10), q(9, 10)]]).unwrap();
        let wide = build_probable_sets(&ch, q(5, 100), ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(wide.probable_set(0), &[0, 1]);
        assert_eq!(wide.probable_set(1), &[0, 1]);
        let narrow = build_probable_sets(&ch, q(15, 100), ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(narrow.probable_set(0), &[0]);
        assert_eq!(narrow.probable_set(1), &[1]);
        // Exactly 1 - eps is enough.
        let edge = build_probable_sets(&ch, q(1, 10), ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(edge.probable_set(0), &[0]);
    }

    #[test]
    fn greedy_mass_ties_prefer_lower_index() {
        let ch = Dmc::new(vec![vec![q(1, 4), q(1, 2), q(1, 4)]]).unwrap();
        let fam = build_probable_sets(&ch, q(2, 5), ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(fam.probable_set(0), &[0, 1]);
    }

    #[test]
    fn eps_domain() {
        let ch = Dmc::<f64>::identity(2).unwrap();
        assert!(build_probable_sets(&ch, 0.0, ProbableSetStrategy::GreedyMass).is_err());
        assert!(build_probable_sets(&ch, 1.0, ProbableSetStrategy::GreedyMass).is_err());
    }

    #[test]
    fn conflict_map_duality() {
        let fam =
            ProbableSetFamily::from_sets(0.1, 4, vec![vec![0, 1], vec![1, 2], vec![3]]).unwrap();
        for x in 0..fam.inputs() {
            for y in 0..fam.outputs() {
                assert_eq!(
                    fam.probable_set(x).contains(&y),
                    fam.conflict_set(y).contains(&x)
                );
            }
        }
        assert_eq!((fam.d_l(), fam.d_r()), (2, 2));
        assert!(ProbableSetFamily::from_sets(0.1, 2, vec![vec![2]]).is_err());
    }

    #[test]
    fn identity_packing_takes_first_inputs() {
        let ch = Dmc::<f64>::identity(4).unwrap();
        let fam = build_probable_sets(&ch, 0.1, ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(fam.max_admissible_size(), 3);
        assert_eq!(greedy_disjoint_code(&fam, 3).unwrap().members(), &[0, 1, 2]);
        assert_eq!(greedy_disjoint_code(&fam, 1).unwrap().members(), &[0]);
        assert!(matches!(
            greedy_disjoint_code(&fam, 4),
            Err(Error::Capacity {
                requested: 4,
                conflict_degree: 1,
                inputs: 4
            })
        ));
    }

    #[test]
    fn complete_conflict_rejects_any_code() {
        let ch = Dmc::new(vec![vec![0.5, 0.5]; 3]).unwrap();
        let fam = build_probable_sets(&ch, 0.1, ProbableSetStrategy::GreedyMass).unwrap();
        assert_eq!(fam.max_admissible_size(), 0);
        let err = greedy_disjoint_code(&fam, 1).unwrap_err();
        assert!(err.to_string().contains("d_L * d_R = 6"), "{err}");
    }

    #[test]
    fn decoder_rules() {
        let fam =
            ProbableSetFamily::from_sets(0.1, 6, vec![vec![0], vec![1, 2], vec![3], vec![2, 4]])
                .unwrap();
        let code = ConflictCode::new(vec![0, 1, 2]).unwrap();
        // y = 1 lies only in D(x_1).
        assert_eq!(conflict_decode(&fam, &code, 1).unwrap(), 1);
        // y = 2 is shared with input 3, which is not in the code.
        assert_eq!(conflict_decode(&fam, &code, 2).unwrap(), 1);
        // y = 5 is in no probable set: fallback to the first word.
        assert_eq!(conflict_decode(&fam, &code, 5).unwrap(), 0);
        let dec = ConflictDecoder::new(&fam, &code).unwrap();
        for y in 0..6 {
            assert_eq!(dec.decode(y), conflict_decode(&fam, &code, y).unwrap());
        }
        // Two code words both claiming y = 2 send it to the fallback.
        let clash = ConflictCode::new(vec![3, 1]).unwrap();
        assert_eq!(conflict_decode(&fam, &clash, 2).unwrap(), 3);
    }

    #[test]
    fn identity_decoding_and_zero_error() {
        let ch = Dmc::<Q>::identity(3).unwrap();
        let fam = build_probable_sets(&ch, q(1, 3), ProbableSetStrategy::GreedyMass).unwrap();
        let code = ConflictCode::new(vec![0, 1, 2]).unwrap();
        assert_eq!(conflict_decode(&fam, &code, 1).unwrap(), 1);
        let err = exact_error_probability(&ch, &fam, &code).unwrap();
        assert!(err.per_word.iter().all(|e| *e == q(0, 1)));
        assert_eq!(err.max, q(0, 1));
    }

    #[test]
    fn single_word_error_is_mass_outside_its_set() {
        let ch = Dmc::new(vec![
            vec![q(7, 10), q(2, 10), q(1, 10)],
            vec![q(1, 10), q(1, 10), q(8, 10)],
        ])
        .unwrap();
        let fam = build_probable_sets(&ch, q(2, 10), ProbableSetStrategy::GreedyMass).unwrap();
        let code = ConflictCode::new(vec![0]).unwrap();
        let err = exact_error_probability(&ch, &fam, &code).unwrap();
        // Fallback is x_1, so a single-word code never errs.
        assert_eq!(err.max, q(0, 1));
        let charged =
            error_profile_with(&ch, &fam, &code, |y| !fam.probable_set(0).contains(&y)).unwrap();
        assert_eq!(charged.max, q(1, 1) - fam.mass(&ch, 0));
        assert!(charged.max <= q(2, 10));
    }

    #[test]
    fn exact_error_rejects_huge_channels() {
        let rows = vec![vec![1.0]; 1];
        let ch = Dmc::new(rows).unwrap();
        let fam = build_probable_sets(&ch, 0.5, ProbableSetStrategy::GreedyMass).unwrap();
        let code = ConflictCode::new(vec![0]).unwrap();
        assert!(exact_error_probability(&ch, &fam, &code).is_ok());
        let mut big = vec![0.0; 4000];
        big[0] = 1.0;
        let ch = Dmc::new(vec![big; 3000]).unwrap();
        let fam = build_probable_sets(&ch, 0.5, ProbableSetStrategy::GreedyMass).unwrap();
        assert!(matches!(
            exact_error_probability(&ch, &fam, &code),
            Err(Error::Resource(_))
        ));
    }
}
