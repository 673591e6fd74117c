use std::collections::{BTreeMap, HashMap};

use super::sets::BallSet;
use crate::error::{check_dim, Result};
use crate::gf2::{Gf2Vector, LinearMap, PackedMap};

/// Largest bin dimension counted with a dense array.
const DENSE_BIN_BITS: usize = 20;

/// Occupied bins of `T` applied to `S`: label → number of balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinHistogram {
    pub bin_dim: usize,
    pub counts: BTreeMap<Gf2Vector, usize>,
}

impl BinHistogram {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn get(&self, label: &Gf2Vector) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn occupied(&self) -> usize {
        self.counts.len()
    }
}

pub fn bin_counts(t: &LinearMap, s: &BallSet) -> Result<BinHistogram> {
    check_dim(t.in_dim(), s.universe_dim())?;
    let mut counts: BTreeMap<Gf2Vector, usize> = BTreeMap::new();
    match (t.packed(), s.packed()) {
        (Some(p), Some(balls)) => {
            let mut words: HashMap<u64, usize> = HashMap::new();
            for &x in balls {
                *words.entry(p.apply(x)).or_default() += 1;
            }
            for (y, c) in words {
                counts.insert(Gf2Vector::from_u64(t.out_dim(), y), c);
            }
        }
        _ => {
            for x in s.members() {
                *counts.entry(t.apply_unchecked(x)).or_default() += 1;
            }
        }
    }
    Ok(BinHistogram { bin_dim: t.out_dim(), counts })
}

/// Size of the fullest bin, `max_y |T⁻¹(y) ∩ S|`.
pub fn largest_bin(t: &LinearMap, s: &BallSet) -> Result<usize> {
    check_dim(t.in_dim(), s.universe_dim())?;
    Ok(match (t.packed(), s.packed()) {
        (Some(p), Some(balls)) => LoadCounter::new(p.out_dim).largest(&p, balls),
        _ => {
            let mut counts: HashMap<Gf2Vector, usize> = HashMap::new();
            s.members()
                .iter()
                .map(|x| {
                    let c = counts.entry(t.apply_unchecked(x)).or_default();
                    *c += 1;
                    *c
                })
                .max()
                .unwrap_or(0)
        }
    })
}

/// `E₁(S, T, ℓ)`: some bin holds at least `ell` balls.
pub fn event_e1(s: &BallSet, t: &LinearMap, ell: usize) -> Result<bool> {
    Ok(largest_bin(t, s)? >= ell)
}

/// Reusable scratch space for computing maximum loads of packed maps.
pub(crate) enum LoadCounter {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl LoadCounter {
    pub fn new(bin_dim: usize) -> Self {
        if bin_dim <= DENSE_BIN_BITS {
            LoadCounter::Dense(vec![0; 1 << bin_dim])
        } else {
            LoadCounter::Sparse(HashMap::new())
        }
    }

    pub fn largest(&mut self, p: &PackedMap, balls: &[u64]) -> usize {
        let mut best = 0;
        match self {
            LoadCounter::Dense(counts) => {
                for &x in balls {
                    let c = &mut counts[p.apply(x) as usize];
                    *c += 1;
                    best = best.max(*c);
                }
                // Clear only the touched cells.
                for &x in balls {
                    counts[p.apply(x) as usize] = 0;
                }
            }
            LoadCounter::Sparse(counts) => {
                counts.clear();
                for &x in balls {
                    let c = counts.entry(p.apply(x)).or_default();
                    *c += 1;
                    best = best.max(*c);
                }
            }
        }
        best as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballsbins::{generate_set, SetKind};
    use crate::gf2::sample_uniform_affine;
    use crate::rng;

    fn v(x: u64, dim: usize) -> Gf2Vector {
        Gf2Vector::from_u64(dim, x)
    }

    #[test]
    fn zero_map_single_bin() {
        let s = generate_set(SetKind::Random, 6, 20, &mut rng::master(1)).unwrap();
        let h = bin_counts(&LinearMap::zero(6, 3), &s).unwrap();
        assert_eq!(h.occupied(), 1);
        assert_eq!(h.get(&v(0, 3)), 20);
        assert_eq!(largest_bin(&LinearMap::zero(6, 3), &s).unwrap(), 20);
    }

    #[test]
    fn injective_map_unit_bins() {
        let s = BallSet::universe(4).unwrap();
        let h = bin_counts(&LinearMap::identity(4), &s).unwrap();
        assert!(h.counts.values().all(|&c| c == 1));
        assert_eq!(largest_bin(&LinearMap::identity(4), &s).unwrap(), 1);
    }

    #[test]
    fn two_bit_example() {
        // u=2, b=1, S = all 4 vectors.
        let s = BallSet::universe(2).unwrap();
        let t = LinearMap::from_packed_rows(2, &[0b10]).unwrap();
        let h = bin_counts(&t, &s).unwrap();
        assert_eq!(h.get(&v(0, 1)), 2);
        assert_eq!(h.get(&v(1, 1)), 2);

        let t = LinearMap::from_packed_rows(2, &[0b11]).unwrap();
        assert_eq!(largest_bin(&t, &s).unwrap(), 2);
        assert!(event_e1(&s, &t, 2).unwrap());
        assert!(!event_e1(&s, &t, 3).unwrap());
        assert!(event_e1(&s, &t, 1).unwrap());
        assert!(!event_e1(&s, &t, s.len() + 1).unwrap());
    }

    #[test]
    fn conservation_and_pigeonhole() {
        let mut r = rng::master(2);
        for (u, b, n) in [(8, 3, 50), (12, 8, 300), (70, 5, 40), (30, 22, 500)] {
            let s = generate_set(SetKind::Random, u, n, &mut r).unwrap();
            for _ in 0..10 {
                let t = sample_uniform_affine(u, b, &mut r).unwrap();
                let h = bin_counts(&t, &s).unwrap();
                assert_eq!(h.total(), n);
                let lb = largest_bin(&t, &s).unwrap();
                assert_eq!(lb, h.max());
                assert!(lb >= n.div_ceil(1 << b.min(20)).max(1));
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let s = BallSet::universe(3).unwrap();
        assert!(largest_bin(&LinearMap::zero(4, 2), &s).is_err());
        assert!(bin_counts(&LinearMap::zero(4, 2), &s).is_err());
    }
}
