//! Entropies, the Stirling binomial bound and the binary asymmetric channel
//! rate curve.
//!
//! Everything is accumulated in nats and converted to the requested base on
//! the way out, with `0 log 0 = 0`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::{constant, Real};

fn plogp<F: Real>(p: F) -> F {
    if p > F::zero() {
        p * p.ln()
    } else {
        F::zero()
    }
}

fn check_unit<F: Real>(name: &str, x: F) -> Result<()> {
    if x.is_nan() || x < F::zero() || x > F::one() {
        return Err(Error::domain(format!(
            "{name} = {} is outside [0, 1]",
            x.lossy_f64()
        )));
    }
    Ok(())
}

fn check_base<F: Real>(base: F) -> Result<()> {
    if !(base >= constant::<F>(2.0)) || !base.is_finite() {
        return Err(Error::domain(format!(
            "logarithm base {} must be at least 2",
            base.lossy_f64()
        )));
    }
    Ok(())
}

fn check_mass<F: Real>(what: &str, probs: &[F]) -> Result<()> {
    let mut total = F::zero();
    for &p in probs {
        if !(p >= F::zero()) {
            return Err(Error::domain(format!(
                "{what} has a negative or NaN entry {}",
                p.lossy_f64()
            )));
        }
        total = total + p;
    }
    if (total - F::one()).abs() > F::sum_tolerance() {
        return Err(Error::domain(format!(
            "{what} sums to {} instead of 1",
            total.lossy_f64()
        )));
    }
    Ok(())
}

/// `-x log2 x - (1 - x) log2(1 - x)`.
pub fn binary_entropy<F: Real>(x: F) -> Result<F> {
    check_unit("x", x)?;
    let nats = -(plogp(x) + plogp(F::one() - x));
    Ok(nats / constant::<F>(2.0).ln())
}

/// A probability vector together with the logarithm base its entropy is
/// reported in.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<F> {
    probs: Vec<F>,
    base: F,
}

impl<F: Real> Distribution<F> {
    pub fn new(probs: Vec<F>, base: F) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("distribution has empty support"));
        }
        check_base(base)?;
        check_mass("distribution", &probs)?;
        Ok(Self { probs, base })
    }

    pub fn uniform(size: usize, base: F) -> Result<Self> {
        let p = F::one() / constant::<F>(size as f64);
        Self::new(vec![p; size], base)
    }

    pub fn probs(&self) -> &[F] {
        &self.probs
    }

    pub fn base(&self) -> F {
        self.base
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> F {
        entropy(self)
    }
}

/// Shannon entropy in the distribution's own base.
pub fn entropy<F: Real>(p: &Distribution<F>) -> F {
    let nats = -p.probs.iter().fold(F::zero(), |acc, &q| acc + plogp(q));
    nats / p.base.ln()
}

/// The five entropies of a joint law, in the joint's base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEntropies<F> {
    pub h_x: F,
    pub h_y: F,
    pub h_xy: F,
    pub h_y_given_x: F,
    pub h_x_given_y: F,
}

/// A joint law `p(x, y)` with its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<F> {
    matrix: Vec<Vec<F>>,
    p_x: Vec<F>,
    p_y: Vec<F>,
    base: F,
}

impl<F: Real> JointDistribution<F> {
    pub fn new(matrix: Vec<Vec<F>>, base: F) -> Result<Self> {
        check_base(base)?;
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.is_empty() || cols == 0 {
            return Err(Error::domain("joint distribution has empty support"));
        }
        for row in &matrix {
            Error::check_len(cols, row.len())?;
        }
        let flat: Vec<F> = matrix.iter().flatten().copied().collect();
        check_mass("joint distribution", &flat)?;
        let p_x = matrix
            .iter()
            .map(|row| row.iter().fold(F::zero(), |a, &b| a + b))
            .collect();
        let p_y = (0..cols)
            .map(|j| matrix.iter().fold(F::zero(), |a, row| a + row[j]))
            .collect();
        Ok(Self {
            matrix,
            p_x,
            p_y,
            base,
        })
    }

    /// `p(x, y) = p(y | x) p(x)`; the input distribution's base is kept.
    pub fn from_channel(p_x: &Distribution<F>, rows: &[Vec<F>]) -> Result<Self> {
        Error::check_len(p_x.len(), rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            check_mass(&format!("channel row {}", i + 1), row)?;
        }
        let matrix = rows
            .iter()
            .zip(p_x.probs())
            .map(|(row, &px)| row.iter().map(|&p| p * px).collect())
            .collect();
        Self::new(matrix, p_x.base())
    }

    pub fn matrix(&self) -> &[Vec<F>] {
        &self.matrix
    }

    pub fn p_x(&self) -> &[F] {
        &self.p_x
    }

    pub fn p_y(&self) -> &[F] {
        &self.p_y
    }

    pub fn base(&self) -> F {
        self.base
    }

    pub fn entropies(&self) -> JointEntropies<F> {
        joint_conditional_entropies(self)
    }
}

/// H(X), H(Y), H(X,Y), H(Y|X) and H(X|Y). The conditional entropies are
/// summed directly from `p(y|x)` and `p(x|y)`, not obtained by subtraction.
pub fn joint_conditional_entropies<F: Real>(j: &JointDistribution<F>) -> JointEntropies<F> {
    let ln_base = j.base.ln();
    let h = |probs: &[F]| -probs.iter().fold(F::zero(), |a, &p| a + plogp(p)) / ln_base;
    let mut h_xy = F::zero();
    let mut h_y_given_x = F::zero();
    let mut h_x_given_y = F::zero();
    for (x, row) in j.matrix.iter().enumerate() {
        for (y, &pxy) in row.iter().enumerate() {
            if pxy > F::zero() {
                h_xy = h_xy - pxy * pxy.ln();
                h_y_given_x = h_y_given_x - pxy * (pxy / j.p_x[x]).ln();
                h_x_given_y = h_x_given_y - pxy * (pxy / j.p_y[y]).ln();
            }
        }
    }
    JointEntropies {
        h_x: h(&j.p_x),
        h_y: h(&j.p_y),
        h_xy: h_xy / ln_base,
        h_y_given_x: h_y_given_x / ln_base,
        h_x_given_y: h_x_given_y / ln_base,
    }
}

/// Upper bound `4 e n 2^{n H(k/n)}` on `C(n, k)` for `1 <= k <= n - 1`.
pub fn stirling_binomial_bound<F: Real>(n: u64, k: u64) -> Result<F> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!(
            "Stirling bound needs 1 <= k <= n - 1, got n = {n}, k = {k}"
        )));
    }
    let n_f = constant::<F>(n as f64);
    let h = binary_entropy(constant::<F>(k as f64) / n_f)?;
    let four_e = constant::<F>(4.0) * F::one().exp();
    Ok(four_e * n_f * constant::<F>(2.0).powf(n_f * h))
}

/// `H(p) + H(p + delta) + 1 - H((1 - delta) / 2)` for the binary channel with
/// crossovers `p(1|0) = p` and `p(0|1) = p + delta` under uniform input.
pub fn asymmetric_alpha0<F: Real>(p: F, delta: F) -> Result<F> {
    check_unit("p", p)?;
    check_unit("delta", delta)?;
    let p1 = p + delta;
    if p1 > F::one() {
        return Err(Error::domain(format!(
            "p + delta = {} exceeds 1",
            p1.lossy_f64()
        )));
    }
    let two = constant::<F>(2.0);
    Ok(binary_entropy(p)? + binary_entropy(p1)? + F::one()
        - binary_entropy((F::one() - delta) / two)?)
}

/// One point of the rate curve `1 - alpha0(p, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint<F> {
    pub p: F,
    pub delta: F,
    pub rate: F,
}

pub fn rate_curve<F: Real>(delta: F, p_grid: &[F]) -> Result<Vec<RatePoint<F>>> {
    p_grid
        .iter()
        .map(|&p| {
            Ok(RatePoint {
                p,
                delta,
                rate: F::one() - asymmetric_alpha0(p, delta)?,
            })
        })
        .collect()
}

/// `count` evenly spaced points `start + i * step`.
pub fn uniform_grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// Writes `p,delta,rate` rows with six decimals.
pub fn write_rate_csv<F: Real, W: Write>(
    points: &[RatePoint<F>],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "p,delta,rate")?;
    for pt in points {
        writeln!(
            out,
            "{:.6},{:.6},{:.6}",
            pt.p.lossy_f64(),
            pt.delta.lossy_f64(),
            pt.rate.lossy_f64()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::binomial;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5f64).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        // 40-digit reference: 0.49991595816452799564...
        assert!(close(binary_entropy(0.11f64).unwrap(), 0.49993, 1e-4));
        assert!(close(
            binary_entropy(0.11f64).unwrap(),
            0.499_915_958_164_528,
            1e-12
        ));
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(-0.1f64).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn binary_entropy_in_f32() {
        assert!((binary_entropy(0.11f32).unwrap() - 0.499_916).abs() < 1e-5);
    }

    #[test]
    fn binary_entropy_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x: f64 = rng.gen();
            let d = binary_entropy(x).unwrap() - binary_entropy(1.0 - x).unwrap();
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(Distribution::uniform(2, 2.0f64).unwrap().entropy(), 1.0);
        assert_eq!(
            Distribution::new(vec![1.0, 0.0], 2.0f64).unwrap().entropy(),
            0.0
        );
        let p = Distribution::new(vec![0.25, 0.75], 2.0f64).unwrap();
        assert!(close(p.entropy(), binary_entropy(0.25).unwrap(), 1e-15));
    }

    #[test]
    fn uniform_entropy_in_own_base_is_one() {
        for n in 2..=40 {
            let d = Distribution::uniform(n, n as f64).unwrap();
            assert!((d.entropy() - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn distribution_invariants() {
        assert!(Distribution::new(vec![0.5, 0.6], 2.0f64).is_err());
        assert!(Distribution::new(vec![1.5, -0.5], 2.0f64).is_err());
        assert!(Distribution::new(vec![1.0], 1.5f64).is_err());
        assert!(Distribution::<f64>::new(vec![], 2.0).is_err());
    }

    #[test]
    fn joint_noiseless_and_independent() {
        let ux = Distribution::uniform(2, 2.0f64).unwrap();
        let noiseless = JointDistribution::from_channel(&ux, &[vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap()
            .entropies();
        assert_eq!(noiseless.h_y_given_x, 0.0);
        assert_eq!(noiseless.h_x_given_y, 0.0);
        assert!(close(noiseless.h_xy, 1.0, 1e-15));

        let indep = JointDistribution::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]], 2.0f64)
            .unwrap()
            .entropies();
        assert!(close(indep.h_y_given_x, 1.0, 1e-15));
        assert!(close(indep.h_x_given_y, 1.0, 1e-15));
        assert!(close(indep.h_xy, 2.0, 1e-15));
    }

    #[test]
    fn binary_asymmetric_conditionals() {
        let ux = Distribution::uniform(2, 2.0f64).unwrap();
        for &(p, delta) in &[(0.05, 0.05), (0.1, 0.0), (0.02, 0.1), (0.2, 0.15)] {
            let (p0, p1) = (p, p + delta);
            let j = JointDistribution::from_channel(&ux, &[vec![1.0 - p0, p0], vec![p1, 1.0 - p1]])
                .unwrap()
                .entropies();
            let avg = 0.5 * (binary_entropy(p0).unwrap() + binary_entropy(p1).unwrap());
            let q = (1.0 - p0 + p1) / 2.0;
            assert!(close(j.h_y_given_x, avg, 1e-12));
            assert!(close(j.h_y, binary_entropy(q).unwrap(), 1e-12));
            assert!(close(
                j.h_x_given_y,
                avg + 1.0 - binary_entropy(q).unwrap(),
                1e-12
            ));
            assert!(close(
                j.h_y_given_x + j.h_x_given_y,
                asymmetric_alpha0(p, delta).unwrap(),
                1e-12
            ));
        }
    }

    #[test]
    fn chain_rules_on_random_joints() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let mut m: Vec<Vec<f64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen() })
                        .collect()
                })
                .collect();
            m[0][0] += 0.1;
            let total: f64 = m.iter().flatten().sum();
            m.iter_mut().flatten().for_each(|v| *v /= total);
            let base = rng.gen_range(2..=5) as f64;
            let e = JointDistribution::new(m, base).unwrap().entropies();
            assert!((e.h_xy - (e.h_x + e.h_y_given_x)).abs() < 1e-9);
            assert!((e.h_xy - (e.h_y + e.h_x_given_y)).abs() < 1e-9);
        }
    }

    #[test]
    fn stirling_examples() {
        assert!(stirling_binomial_bound::<f64>(10, 5).unwrap() >= 252.0);
        assert!(stirling_binomial_bound::<f64>(7, 1).unwrap() >= 7.0);
        assert!(stirling_binomial_bound::<f64>(20, 10).unwrap() >= 184_756.0);
        assert!(stirling_binomial_bound::<f64>(10, 0).is_err());
        assert!(stirling_binomial_bound::<f64>(10, 10).is_err());
    }

    #[test]
    fn stirling_dominates_exact_binomials() {
        for n in 2..=30u64 {
            for k in 1..n {
                let exact = binomial(n, k).to_f64().unwrap();
                assert!(stirling_binomial_bound::<f64>(n, k).unwrap() >= exact);
            }
        }
    }

    #[test]
    fn alpha0_examples() {
        assert_eq!(asymmetric_alpha0(0.0f64, 0.0).unwrap(), 0.0);
        // H(0.05) + H(0.10) + 1 - H(0.475), evaluated at 40 digits.
        assert!(close(
            asymmetric_alpha0(0.05f64, 0.05).unwrap(),
            0.757_196_671_662_427_3,
            1e-12
        ));
        assert!(asymmetric_alpha0(0.95f64, 0.1).is_err());
    }

    #[test]
    fn rate_curve_crossing_for_delta_005() {
        let grid = uniform_grid(0.0, 0.001, 251);
        let curve = rate_curve(0.05f64, &grid).unwrap();
        let cross = curve
            .windows(2)
            .find(|w| w[0].rate > 0.0 && w[1].rate <= 0.0)
            .map(|w| w[1].p)
            .unwrap();
        assert!((0.07..=0.09).contains(&cross), "crossing at {cross}");
    }

    #[test]
    fn rate_curve_strictly_decreasing() {
        let grid = uniform_grid(0.0, 0.0005, 401);
        for &delta in &[0.0, 0.05, 0.1] {
            let curve = rate_curve(delta, &grid).unwrap();
            assert_eq!(curve[0].p, 0.0);
            assert!(
                curve.windows(2).all(|w| w[1].rate < w[0].rate),
                "delta={delta}"
            );
        }
        assert_eq!(rate_curve(0.0f64, &[0.0]).unwrap()[0].rate, 1.0);
    }

    #[test]
    fn rate_csv_format() {
        let pts = rate_curve(0.05f64, &[0.0, 0.1]).unwrap();
        let mut buf = Vec::new();
        write_rate_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "p,delta,rate");
        assert!(lines[1].starts_with("0.000000,0.050000,"));
        assert_eq!(lines.len(), 3);
    }
}
