//! Exact oracles by exhaustive enumeration of every map at tiny dimensions.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use super::bins::LoadCounter;
use super::sets::BallSet;
use crate::error::{check_dim, guard, Error, Result};
use crate::gf2::{sample_uniform_affine, PackedMap};
use crate::stats;

/// Distribution of the largest bin over all `2^(u·b)` linear maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    pub maps: u64,
    /// lbin value → number of maps attaining it.
    pub histogram: BTreeMap<usize, u64>,
}

impl ExactDistribution {
    pub fn expected(&self) -> Ratio<u64> {
        let total: u64 = self.histogram.iter().map(|(&l, &c)| l as u64 * c).sum();
        Ratio::new(total, self.maps)
    }

    /// `P[lbin ≥ ell]`.
    pub fn tail(&self, ell: usize) -> Ratio<u64> {
        let hits: u64 = self.histogram.range(ell..).map(|(_, &c)| c).sum();
        Ratio::new(hits, self.maps)
    }
}

fn packed_map_from_index(u: usize, b: usize, index: u64) -> PackedMap {
    let mask = (1u64 << u) - 1;
    PackedMap { in_dim: u, out_dim: b, rows: (0..b).map(|i| (index >> (i * u)) & mask).collect(), translation: 0 }
}

/// Enumerates every linear map `GF(2)^u → GF(2)^b` (requires `u·b ≤ 22`).
pub fn exact_lbin_distribution(u: usize, b: usize, s: &BallSet) -> Result<ExactDistribution> {
    if u == 0 || b == 0 {
        return Err(Error::InvalidArgument("dimensions must be >= 1".into()));
    }
    check_dim(u, s.universe_dim())?;
    guard("exact lbin enumeration", u * b)?;
    let balls = s.packed().expect("guarded universe fits in a word");
    let maps = 1u64 << (u * b);
    let mut counter = LoadCounter::new(b);
    let mut histogram = BTreeMap::new();
    for m in 0..maps {
        let lbin = counter.largest(&packed_map_from_index(u, b, m), balls);
        *histogram.entry(lbin).or_default() += 1;
    }
    Ok(ExactDistribution { maps, histogram })
}

/// `E[lbin]` over uniform linear maps, as an exact reduced fraction.
pub fn exact_expected_lbin(u: usize, b: usize, s: &BallSet) -> Result<Ratio<u64>> {
    Ok(exact_lbin_distribution(u, b, s)?.expected())
}

/// Number of affine maps `h(x) = Ax + a` with `h(x1) = y1` and `h(x2) = y2`,
/// for every `(y1, y2)`; cell `y1 + (y2 << b)`.
pub fn joint_counts(u: usize, b: usize, x1: u64, x2: u64) -> Result<Vec<u64>> {
    if u == 0 || b == 0 {
        return Err(Error::InvalidArgument("dimensions must be >= 1".into()));
    }
    guard("affine map enumeration", u * b + b)?;
    if x1 >> u != 0 || x2 >> u != 0 {
        return Err(Error::InvalidArgument("points must lie in GF(2)^u".into()));
    }
    let mut cells = vec![0u64; 1 << (2 * b)];
    for m in 0..1u64 << (u * b) {
        let mut h = packed_map_from_index(u, b, m);
        for a in 0..1u64 << b {
            h.translation = a;
            let (y1, y2) = (h.apply(x1), h.apply(x2));
            cells[(y1 | (y2 << b)) as usize] += 1;
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairwiseMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairwiseReport {
    pub mode: PairwiseMode,
    pub u: usize,
    pub b: usize,
    /// Affine maps enumerated or sampled.
    pub maps: u64,
    pub pairs: u64,
    /// (pair, y1, y2) cells examined.
    pub cells: u64,
    /// Exact mode: cells whose probability differs from `2^-2b`.
    /// Sampled mode: pairs failing a chi-square test at level 0.001.
    pub failures: u64,
}

impl PairwiseReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Largest `u·b + b` checked by full enumeration.
pub const PAIRWISE_EXACT_LIMIT: usize = 16;

/// Two-wise independence of the affine family: for distinct `x1, x2`, the
/// pair `(h(x1), h(x2))` is uniform on `GF(2)^b × GF(2)^b`.
///
/// Enumerates all affine maps when `u·b + b ≤ 16`; otherwise draws
/// `samples` maps and runs a chi-square test on `sample_pairs` random pairs.
pub fn pairwise_independence_check<R: Rng + ?Sized>(
    u: usize,
    b: usize,
    samples: u64,
    sample_pairs: usize,
    rng: &mut R,
) -> Result<PairwiseReport> {
    if u == 0 || b == 0 {
        return Err(Error::InvalidArgument("dimensions must be >= 1".into()));
    }
    if u * b + b <= PAIRWISE_EXACT_LIMIT {
        return pairwise_exact(u, b);
    }
    if u > 64 || 2 * b > 20 {
        return Err(Error::InvalidArgument("sampled pairwise check needs u <= 64 and b <= 10".into()));
    }
    let universe_mask = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
    let pairs: Vec<(u64, u64)> = (0..sample_pairs)
        .map(|_| loop {
            let x1 = rng.gen::<u64>() & universe_mask;
            let x2 = rng.gen::<u64>() & universe_mask;
            if x1 != x2 {
                break (x1, x2);
            }
        })
        .collect();
    let ncells = 1usize << (2 * b);
    let mut tables = vec![vec![0u64; ncells]; pairs.len()];
    for _ in 0..samples {
        let h = sample_uniform_affine(u, b, rng)?.packed().expect("u <= 64");
        for (&(x1, x2), table) in pairs.iter().zip(&mut tables) {
            table[(h.apply(x1) | (h.apply(x2) << b)) as usize] += 1;
        }
    }
    let uniform = vec![1.0 / ncells as f64; ncells];
    let failures = tables.iter().filter(|t| stats::chi_square(t, &uniform).1 < 0.001).count() as u64;
    Ok(PairwiseReport {
        mode: PairwiseMode::Sampled,
        u,
        b,
        maps: samples,
        pairs: pairs.len() as u64,
        cells: (pairs.len() * ncells) as u64,
        failures,
    })
}

fn pairwise_exact(u: usize, b: usize) -> Result<PairwiseReport> {
    let maps = 1u64 << (u * b + b);
    let expected = maps >> (2 * b);
    let (mut pairs, mut cells, mut failures) = (0, 0, 0);
    for x1 in 0..1u64 << u {
        for x2 in x1 + 1..1u64 << u {
            let counts = joint_counts(u, b, x1, x2)?;
            pairs += 1;
            cells += counts.len() as u64;
            failures += counts.iter().filter(|&&c| c != expected).count() as u64;
        }
    }
    Ok(PairwiseReport { mode: PairwiseMode::Exact, u, b, maps, pairs, cells, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballsbins::{generate_set, largest_bin, SetKind};
    use crate::gf2::{Gf2Vector, LinearMap};
    use crate::rng;

    #[test]
    fn expected_lbin_examples() {
        let s = BallSet::universe(2).unwrap();
        assert_eq!(exact_expected_lbin(2, 1, &s).unwrap(), Ratio::new(5, 2));
        assert_eq!(exact_expected_lbin(2, 2, &s).unwrap(), Ratio::new(7, 4));
        let one = BallSet::new(5, vec![Gf2Vector::zeros(5)]).unwrap();
        assert_eq!(exact_expected_lbin(5, 3, &one).unwrap(), Ratio::from_integer(1));
        let s1 = BallSet::universe(1).unwrap();
        assert_eq!(exact_expected_lbin(1, 1, &s1).unwrap(), Ratio::new(3, 2));
    }

    #[test]
    fn distribution_matches_largest_bin_per_map() {
        let s = generate_set(SetKind::Random, 4, 7, &mut rng::master(3)).unwrap();
        let dist = exact_lbin_distribution(4, 2, &s).unwrap();
        let mut hist = BTreeMap::new();
        for m in 0..256u64 {
            let t = LinearMap::from_packed_rows(4, &[m & 15, m >> 4]).unwrap();
            *hist.entry(largest_bin(&t, &s).unwrap()).or_insert(0u64) += 1;
        }
        assert_eq!(dist.histogram, hist);
        assert_eq!(dist.tail(1), Ratio::from_integer(1));
        assert_eq!(dist.tail(8), Ratio::from_integer(0));
    }

    #[test]
    fn tail_of_four_ball_example() {
        let s = BallSet::universe(2).unwrap();
        let dist = exact_lbin_distribution(2, 1, &s).unwrap();
        assert_eq!(dist.tail(4), Ratio::new(1, 4));
        assert_eq!(dist.tail(2), Ratio::from_integer(1));
    }

    #[test]
    fn size_guard() {
        let s = BallSet::new(12, vec![Gf2Vector::zeros(12)]).unwrap();
        assert!(matches!(exact_expected_lbin(12, 2, &s), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn joint_count_example() {
        // u=2, b=1, x1=00, x2=01, y1=y2=0: 2 of the 8 affine maps.
        let c = joint_counts(2, 1, 0b00, 0b01).unwrap();
        assert_eq!(c[0], 2);
        assert_eq!(c.iter().sum::<u64>(), 8);
    }

    #[test]
    fn marginals_are_uniform() {
        let (u, b) = (3, 2);
        let c = joint_counts(u, b, 0b011, 0b110).unwrap();
        let maps = 1u64 << (u * b + b);
        for y1 in 0..1usize << b {
            let marginal: u64 = (0..1usize << b).map(|y2| c[y1 | (y2 << b)]).sum();
            assert_eq!(marginal, maps >> b);
        }
    }

    #[test]
    fn exact_pairwise_passes() {
        let mut r = rng::master(0);
        for (u, b) in [(2, 1), (3, 2), (4, 2)] {
            let rep = pairwise_independence_check(u, b, 0, 0, &mut r).unwrap();
            assert_eq!(rep.mode, PairwiseMode::Exact);
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn sampled_pairwise_passes() {
        let rep = pairwise_independence_check(16, 3, 20_000, 8, &mut rng::master(1)).unwrap();
        assert_eq!(rep.mode, PairwiseMode::Sampled);
        assert!(rep.passed(), "{rep:?}");
    }
}
