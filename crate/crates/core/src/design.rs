//! The two-phase SRSWOR design.
//!
//! Phase one draws `n'` of the `N` units and observes `x` and `z`; phase two
//! draws `n` of those `n'` and observes `y` (and `x`).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::FinitePopulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub n_population: usize,
    pub n_first: usize,
    pub n_second: usize,
}

impl DesignSpec {
    /// Validates `2 <= n <= n' <= N`.
    pub fn new(n_population: usize, n_first: usize, n_second: usize) -> Result<Self> {
        let spec = Self {
            n_population,
            n_first,
            n_second,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            n_population: big_n,
            n_first: n1,
            n_second: n,
        } = *self;
        if n < 2 {
            return Err(Error::InvalidDesign(format!("n = {n} must be at least 2")));
        }
        if n > n1 {
            return Err(Error::InvalidDesign(format!(
                "second-phase size n = {n} exceeds first-phase size n' = {n1}"
            )));
        }
        if n1 > big_n {
            return Err(Error::InvalidDesign(format!(
                "first-phase size n' = {n1} exceeds population size N = {big_n}"
            )));
        }
        Ok(())
    }

    pub fn is_census(&self) -> bool {
        self.n_second == self.n_population
    }

    pub fn factors(&self) -> SampleFactors {
        factors(self)
    }
}

/// Finite-population variance factors of the design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleFactors {
    /// `1/n - 1/N`
    pub f1: f64,
    /// `1/n' - 1/N`
    pub f2: f64,
    /// `1/n - 1/n'`
    pub f3: f64,
}

pub fn factors(spec: &DesignSpec) -> SampleFactors {
    let inv = |k: usize| 1.0 / k as f64;
    let (big_n, n1, n) = (
        inv(spec.n_population),
        inv(spec.n_first),
        inv(spec.n_second),
    );
    SampleFactors {
        f1: n - big_n,
        f2: n1 - big_n,
        f3: n - n1,
    }
}

/// The four sample means every estimator is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMeans {
    /// ȳ over the second phase
    pub mean_y_second: f64,
    /// x̄ over the second phase
    pub mean_x_second: f64,
    /// x̄′ over the first phase
    pub mean_x_first: f64,
    /// z̄′ over the first phase
    pub mean_z_first: f64,
}

impl SampleMeans {
    pub(crate) fn from_indices(pop: &FinitePopulation, first: &[usize], second: &[usize]) -> Self {
        let units = pop.units();
        let (mut sy, mut sx) = (0.0, 0.0);
        for &i in second {
            sy += units[i].y;
            sx += units[i].x;
        }
        let (mut sx1, mut sz1) = (0.0, 0.0);
        for &i in first {
            sx1 += units[i].x;
            sz1 += units[i].z;
        }
        let (n, n1) = (second.len() as f64, first.len() as f64);
        Self {
            mean_y_second: sy / n,
            mean_x_second: sx / n,
            mean_x_first: sx1 / n1,
            mean_z_first: sz1 / n1,
        }
    }

    /// Means of a census: every sample mean equals its population mean.
    pub fn census(pop: &FinitePopulation) -> Self {
        let all: Vec<usize> = (0..pop.len()).collect();
        Self::from_indices(pop, &all, &all)
    }
}

/// One realised two-phase sample. Indices are 0-based unit positions;
/// `second_indices` is a subset of `first_indices`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseSample {
    pub first_indices: Vec<usize>,
    pub second_indices: Vec<usize>,
    pub means: SampleMeans,
}

/// The random stream for replication `replication` under `seed`.
///
/// ChaCha12 keyed by the seed, with the replication number selecting the
/// 64-bit stream id, so every replication has an independent substream and
/// results do not depend on the order replications are executed in.
pub fn substream(seed: u64, replication: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Reusable index buffer for repeated draws from one population.
///
/// The buffer holds a permutation of `0..N`. A draw runs a partial
/// Fisher-Yates shuffle over the first `n'` slots (phase one), then another
/// over the first `n` of those (phase two), reads the means, and undoes its
/// swaps so the next draw starts from the identity again. The stream is
/// consumed in that order: `n'` uniform positions for phase one, then `n`
/// for phase two.
#[derive(Debug, Clone)]
pub(crate) struct Sampler {
    perm: Vec<usize>,
    swaps: Vec<usize>,
}

impl Sampler {
    pub(crate) fn new(n_population: usize) -> Self {
        Self {
            perm: (0..n_population).collect(),
            swaps: Vec::new(),
        }
    }

    fn shuffle_prefix<R: Rng + ?Sized>(&mut self, rng: &mut R, k: usize, len: usize) {
        for i in 0..k {
            let j = rng.gen_range(i..len);
            self.perm.swap(i, j);
            self.swaps.push(j);
        }
    }

    /// Draws a sample and calls `f` with (first-phase indices, second-phase indices).
    pub(crate) fn draw_with<R, F, T>(&mut self, rng: &mut R, spec: &DesignSpec, f: F) -> T
    where
        R: Rng + ?Sized,
        F: FnOnce(&[usize], &[usize]) -> T,
    {
        let (big_n, n1, n) = (spec.n_population, spec.n_first, spec.n_second);
        self.shuffle_prefix(rng, n1, big_n);
        self.shuffle_prefix(rng, n, n1);
        let out = f(&self.perm[..n1], &self.perm[..n]);
        self.restore_phases(n1);
        out
    }

    fn restore_phases(&mut self, n1: usize) {
        // swaps = [phase one (n' entries), phase two (n entries)]
        let phase_one = n1;
        for (k, &j) in self.swaps.iter().enumerate().rev() {
            let i = if k < phase_one { k } else { k - phase_one };
            self.perm.swap(i, j);
        }
        self.swaps.clear();
    }
}

/// Draws one two-phase SRSWOR sample using `rng`.
///
/// The same stream state always yields the same sample.
pub fn draw_two_phase<R: Rng + ?Sized>(
    pop: &FinitePopulation,
    spec: &DesignSpec,
    rng: &mut R,
) -> Result<TwoPhaseSample> {
    spec.validate()?;
    if spec.n_population != pop.len() {
        return Err(Error::SizeMismatch {
            design: spec.n_population,
            population: pop.len(),
        });
    }
    let mut sampler = Sampler::new(pop.len());
    Ok(
        sampler.draw_with(rng, spec, |first, second| TwoPhaseSample {
            first_indices: first.to_vec(),
            second_indices: second.to_vec(),
            means: SampleMeans::from_indices(pop, first, second),
        }),
    )
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::population::Unit;

    fn pop(n: usize) -> FinitePopulation {
        let units = (0..n)
            .map(|i| Unit {
                y: 10.0 + i as f64,
                x: 20.0 + (i * i) as f64,
                z: 5.0 + (i % 3) as f64,
            })
            .collect();
        FinitePopulation::new("p", units).unwrap()
    }

    #[test]
    fn factors_for_reference_design() {
        let f = factors(&DesignSpec::new(25, 10, 7).unwrap());
        assert!((f.f1 - 18.0 / 175.0).abs() < 1e-15);
        assert!((f.f2 - 0.06).abs() < 1e-15);
        assert!((f.f3 - 3.0 / 70.0).abs() < 1e-15);
        assert!((f.f1 - (f.f2 + f.f3)).abs() <= 1e-15);
    }

    #[test]
    fn factors_census_and_round_numbers() {
        let f = factors(&DesignSpec::new(10, 10, 10).unwrap());
        assert_eq!((f.f1, f.f2, f.f3), (0.0, 0.0, 0.0));
        let f = factors(&DesignSpec::new(100, 50, 25).unwrap());
        assert!((f.f1 - 0.03).abs() < 1e-15);
        assert!((f.f2 - 0.01).abs() < 1e-15);
        assert!((f.f3 - 0.02).abs() < 1e-15);
    }

    #[test]
    fn design_validation() {
        assert!(DesignSpec::new(25, 7, 10).is_err());
        assert!(DesignSpec::new(25, 30, 10).is_err());
        assert!(DesignSpec::new(25, 10, 1).is_err());
        assert!(DesignSpec::new(2, 2, 2).is_ok());
    }

    #[test]
    fn census_draw_hits_population_means() {
        let p = pop(9);
        let spec = DesignSpec::new(9, 9, 9).unwrap();
        let s = draw_two_phase(&p, &spec, &mut substream(1, 0)).unwrap();
        let c = SampleMeans::census(&p);
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(s.means.mean_x_second, c.mean_x_first) < 1e-12);
        assert!(rel(s.means.mean_x_first, c.mean_x_first) < 1e-12);
        assert!(rel(s.means.mean_z_first, c.mean_z_first) < 1e-12);
        let mut first = s.first_indices.clone();
        first.sort_unstable();
        assert_eq!(first, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn size_mismatch() {
        let spec = DesignSpec::new(10, 5, 3).unwrap();
        let err = draw_two_phase(&pop(9), &spec, &mut substream(1, 0)).unwrap_err();
        assert!(matches!(
            err,
            Error::SizeMismatch {
                design: 10,
                population: 9
            }
        ));
    }

    #[test]
    fn same_stream_same_sample() {
        let p = pop(30);
        let spec = DesignSpec::new(30, 12, 5).unwrap();
        let a = draw_two_phase(&p, &spec, &mut substream(42, 7)).unwrap();
        let b = draw_two_phase(&p, &spec, &mut substream(42, 7)).unwrap();
        assert_eq!(a, b);
        let c = draw_two_phase(&p, &spec, &mut substream(42, 8)).unwrap();
        assert_ne!(a.first_indices, c.first_indices);
    }

    #[test]
    fn nesting_distinctness_and_means() {
        let p = pop(20);
        let spec = DesignSpec::new(20, 8, 3).unwrap();
        for r in 0..500 {
            let s = draw_two_phase(&p, &spec, &mut substream(3, r)).unwrap();
            let mut first = s.first_indices.clone();
            first.sort_unstable();
            first.dedup();
            assert_eq!(first.len(), 8);
            assert_eq!(s.second_indices.len(), 3);
            assert!(s.second_indices.iter().all(|i| s.first_indices.contains(i)));
            let ybar: f64 = s
                .second_indices
                .iter()
                .map(|&i| p.units()[i].y)
                .sum::<f64>()
                / 3.0;
            assert!(((s.means.mean_y_second - ybar) / ybar).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_restores_identity() {
        let spec = DesignSpec::new(15, 9, 4).unwrap();
        let mut sampler = Sampler::new(15);
        let mut rng = substream(5, 0);
        for _ in 0..50 {
            sampler.draw_with(&mut rng, &spec, |_, _| ());
            assert_eq!(sampler.perm, (0..15).collect::<Vec<_>>());
        }
    }

    #[test]
    fn first_phase_subsets_are_uniform() {
        // 15 four-subsets of six units, each with probability 1/15.
        let spec = DesignSpec::new(6, 4, 2).unwrap();
        let draws = 90_000u64;
        let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
        let mut sampler = Sampler::new(6);
        for r in 0..draws {
            let mut rng = substream(2024, r);
            let mut key = sampler.draw_with(&mut rng, &spec, |first, _| first.to_vec());
            key.sort_unstable();
            *counts.entry(key).or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        let prob = 1.0 / 15.0;
        let se = (prob * (1.0 - prob) / draws as f64).sqrt();
        for (subset, c) in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - prob).abs() < 3.0 * se, "{subset:?}: {freq}");
        }
    }

    #[test]
    fn inclusion_frequencies() {
        let spec = DesignSpec::new(10, 6, 3).unwrap();
        let reps = 100_000u64;
        let mut first = [0u64; 10];
        let mut second = [0u64; 10];
        let mut sampler = Sampler::new(10);
        for r in 0..reps {
            sampler.draw_with(&mut substream(99, r), &spec, |f, s| {
                f.iter().for_each(|&i| first[i] += 1);
                s.iter().for_each(|&i| second[i] += 1);
            });
        }
        for (counts, p) in [(first, 0.6), (second, 0.3)] {
            let se = (p * (1.0 - p) / reps as f64).sqrt();
            for c in counts {
                assert!((c as f64 / reps as f64 - p).abs() < 4.0 * se);
            }
        }
    }
}
