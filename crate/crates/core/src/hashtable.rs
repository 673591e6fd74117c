//! A chained hash table whose hash function is a random affine map
//! `GF(2)^u → GF(2)^b`.
//!
//! Chains keep insertion order. Whenever an insertion of a new key would push
//! the load factor above 1, `b` grows by one and a fresh map is drawn from the
//! table's own generator, so every stored key set satisfies `n ≤ 2^b` under a
//! uniformly random map.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::SeedableRng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::gf2::{sample_uniform_affine, Gf2Vector, LinearMap, PackedMap};
use crate::rng::ExperimentRng;

/// Largest bucket dimension the table will grow to.
pub const MAX_BUCKET_BITS: usize = 30;

#[derive(Debug, Default)]
struct ProbeCounters {
    hits: AtomicU64,
    hit_probes: AtomicU64,
    misses: AtomicU64,
    miss_probes: AtomicU64,
}

impl ProbeCounters {
    fn record(&self, found: bool, probes: usize) {
        let (n, p) = if found { (&self.hits, &self.hit_probes) } else { (&self.misses, &self.miss_probes) };
        n.fetch_add(1, Ordering::Relaxed);
        p.fetch_add(probes as u64, Ordering::Relaxed);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableStats {
    pub size: usize,
    pub bucket_bits: usize,
    pub max_chain: usize,
    pub hits: u64,
    pub misses: u64,
    /// Entries examined per successful lookup; 0 before any hit.
    pub mean_probes_hit: f64,
    /// Entries examined per unsuccessful lookup; 0 before any miss.
    pub mean_probes_miss: f64,
    pub resizes: usize,
}

#[derive(Debug)]
pub struct LinearHashTable<V> {
    key_dim: usize,
    hash: LinearMap,
    packed: Option<PackedMap>,
    buckets: Vec<Vec<(Gf2Vector, V)>>,
    size: usize,
    resizes: usize,
    probes: ProbeCounters,
    rng: ExperimentRng,
}

fn check_bucket_bits(b: usize) -> Result<()> {
    if b == 0 {
        return Err(Error::InvalidArgument("bucket bits must be >= 1".into()));
    }
    if b > MAX_BUCKET_BITS {
        return Err(Error::TooLarge { what: "hash table buckets", log2_size: b, limit: MAX_BUCKET_BITS });
    }
    Ok(())
}

impl<V> LinearHashTable<V> {
    /// Empty table over `u`-bit keys with `2^b` buckets and a uniform affine map.
    pub fn new(u: usize, b: usize, mut rng: ExperimentRng) -> Result<Self> {
        check_bucket_bits(b)?;
        let hash = sample_uniform_affine(u, b, &mut rng)?;
        Self::with_map(hash, rng)
    }

    pub fn with_seed(u: usize, b: usize, seed: u64) -> Result<Self> {
        Self::new(u, b, ExperimentRng::seed_from_u64(seed))
    }

    /// Empty table using `hash` as its initial map; `rng` drives later resizes.
    pub fn with_map(hash: LinearMap, rng: ExperimentRng) -> Result<Self> {
        check_bucket_bits(hash.out_dim())?;
        Ok(Self {
            key_dim: hash.in_dim(),
            packed: hash.packed(),
            buckets: (0..1usize << hash.out_dim()).map(|_| Vec::new()).collect(),
            hash,
            size: 0,
            resizes: 0,
            probes: ProbeCounters::default(),
            rng,
        })
    }

    pub fn key_dim(&self) -> usize {
        self.key_dim
    }

    pub fn bucket_bits(&self) -> usize {
        self.hash.out_dim()
    }

    pub fn hash(&self) -> &LinearMap {
        &self.hash
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn resizes(&self) -> usize {
        self.resizes
    }

    pub fn keys(&self) -> impl Iterator<Item = &Gf2Vector> {
        self.buckets.iter().flatten().map(|(k, _)| k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gf2Vector, &V)> {
        self.buckets.iter().flatten().map(|(k, v)| (k, v))
    }

    pub fn chain_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.buckets.iter().map(Vec::len)
    }

    fn bucket_of(&self, key: &Gf2Vector) -> usize {
        match (&self.packed, key.to_u64()) {
            (Some(p), Some(x)) => p.apply(x) as usize,
            _ => self.hash.apply_unchecked(key).to_u64().expect("b <= 30") as usize,
        }
    }

    /// Bucket index and chain position of `key`, recording the probe count.
    fn locate(&self, key: &Gf2Vector) -> Result<(usize, Option<usize>)> {
        check_dim(self.key_dim, key.dim())?;
        let bucket = self.bucket_of(key);
        let chain = &self.buckets[bucket];
        let pos = chain.iter().position(|(k, _)| k == key);
        self.probes.record(pos.is_some(), pos.map_or(chain.len(), |p| p + 1));
        Ok((bucket, pos))
    }

    pub fn get(&self, key: &Gf2Vector) -> Result<Option<&V>> {
        let (bucket, pos) = self.locate(key)?;
        Ok(pos.map(|p| &self.buckets[bucket][p].1))
    }

    pub fn contains_key(&self, key: &Gf2Vector) -> Result<bool> {
        Ok(self.get(key)?.is_some())
    }

    /// Inserts or replaces; returns the previous value for `key`.
    pub fn insert(&mut self, key: Gf2Vector, value: V) -> Result<Option<V>> {
        let (bucket, pos) = self.locate(&key)?;
        if let Some(p) = pos {
            return Ok(Some(std::mem::replace(&mut self.buckets[bucket][p].1, value)));
        }
        if self.size + 1 > self.buckets.len() {
            self.grow()?;
        }
        let bucket = self.bucket_of(&key);
        self.buckets[bucket].push((key, value));
        self.size += 1;
        Ok(None)
    }

    pub fn remove(&mut self, key: &Gf2Vector) -> Result<Option<V>> {
        let (bucket, pos) = self.locate(key)?;
        Ok(pos.map(|p| {
            self.size -= 1;
            self.buckets[bucket].remove(p).1
        }))
    }

    /// Doubles the bucket count under a freshly sampled map.
    fn grow(&mut self) -> Result<()> {
        let b = self.bucket_bits() + 1;
        check_bucket_bits(b)?;
        self.hash = sample_uniform_affine(self.key_dim, b, &mut self.rng)?;
        self.packed = self.hash.packed();
        let old = std::mem::replace(&mut self.buckets, (0..1usize << b).map(|_| Vec::new()).collect());
        for (k, v) in old.into_iter().flatten() {
            let bucket = self.bucket_of(&k);
            self.buckets[bucket].push((k, v));
        }
        self.resizes += 1;
        Ok(())
    }

    pub fn stats(&self) -> TableStats {
        let load = |n: &AtomicU64| n.load(Ordering::Relaxed);
        let ratio = |p: u64, n: u64| if n == 0 { 0.0 } else { p as f64 / n as f64 };
        let (hits, misses) = (load(&self.probes.hits), load(&self.probes.misses));
        TableStats {
            size: self.size,
            bucket_bits: self.bucket_bits(),
            max_chain: self.chain_lengths().max().unwrap_or(0),
            hits,
            misses,
            mean_probes_hit: ratio(load(&self.probes.hit_probes), hits),
            mean_probes_miss: ratio(load(&self.probes.miss_probes), misses),
            resizes: self.resizes,
        }
    }

    /// Full scan of the structural invariants: placement, size, load factor
    /// and key uniqueness.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut total = 0;
        for (i, chain) in self.buckets.iter().enumerate() {
            for (j, (k, _)) in chain.iter().enumerate() {
                if self.bucket_of(k) != i {
                    return Err(format!("key {k} stored in bucket {i}"));
                }
                if chain[..j].iter().any(|(other, _)| other == k) {
                    return Err(format!("key {k} appears twice"));
                }
            }
            total += chain.len();
        }
        if total != self.size {
            return Err(format!("size {} but chains hold {total}", self.size));
        }
        if self.size > self.buckets.len() {
            return Err(format!("load factor {} > 1", self.size as f64 / self.buckets.len() as f64));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballsbins::{generate_set, largest_bin, subspace_structure, BallSet, SetKind};
    use crate::gf2::sample_uniform_linear;
    use crate::rng;
    use crate::stats;

    fn key(x: u64) -> Gf2Vector {
        Gf2Vector::from_u64(16, x)
    }

    #[test]
    fn empty_table() {
        let t: LinearHashTable<u32> = LinearHashTable::with_seed(16, 4, 1).unwrap();
        let s = t.stats();
        assert_eq!((s.size, s.bucket_bits, s.max_chain, s.resizes), (0, 4, 0, 0));
        assert_eq!(t.chain_lengths().count(), 16);
        assert_eq!(t.get(&key(3)).unwrap(), None);
        assert!(t.audit().is_ok());
    }

    #[test]
    fn seed_fixes_map() {
        let a: LinearHashTable<()> = LinearHashTable::with_seed(20, 6, 9).unwrap();
        let b: LinearHashTable<()> = LinearHashTable::with_seed(20, 6, 9).unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn translation_is_uniform() {
        let mut counts = [0u64; 8];
        for seed in 0..40_000 {
            let t: LinearHashTable<()> = LinearHashTable::with_seed(5, 3, seed).unwrap();
            counts[t.hash().translation().unwrap().to_u64().unwrap() as usize] += 1;
        }
        let (_, p) = stats::chi_square(&counts, &[0.125; 8]);
        assert!(p > 0.001, "{counts:?}");
    }

    #[test]
    fn insert_get_replace_remove() {
        let mut t = LinearHashTable::with_seed(16, 3, 2).unwrap();
        assert_eq!(t.insert(key(5), "a").unwrap(), None);
        assert_eq!(t.get(&key(5)).unwrap(), Some(&"a"));
        assert_eq!(t.insert(key(5), "b").unwrap(), Some("a"));
        assert_eq!(t.len(), 1);
        assert_eq!(t.remove(&key(5)).unwrap(), Some("b"));
        assert_eq!(t.get(&key(5)).unwrap(), None);
        assert_eq!(t.remove(&key(5)).unwrap(), None);
        assert!(t.is_empty());
    }

    #[test]
    fn single_resize_past_capacity() {
        let mut t = LinearHashTable::with_seed(16, 4, 3).unwrap();
        for x in 0..16 {
            t.insert(key(x), x).unwrap();
        }
        assert_eq!(t.resizes(), 0);
        t.insert(key(16), 16).unwrap();
        assert_eq!((t.resizes(), t.bucket_bits()), (1, 5));
        // Replacing an existing key never resizes.
        t.insert(key(0), 99).unwrap();
        assert_eq!(t.resizes(), 1);
        assert!(t.audit().is_ok());
        for x in 1..=16 {
            assert_eq!(t.get(&key(x)).unwrap(), Some(&x));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let mut t = LinearHashTable::with_seed(16, 3, 4).unwrap();
        assert!(t.insert(Gf2Vector::zeros(8), 1).is_err());
        assert!(t.get(&Gf2Vector::zeros(17)).is_err());
    }

    #[test]
    fn probe_accounting() {
        let mut t = LinearHashTable::with_map(LinearMap::zero(16, 2), rng::master(0)).unwrap();
        for x in 0..4 {
            t.insert(key(x), ()).unwrap();
        }
        // One chain of length 4; the inserts were four misses of length 0..3.
        let before = t.stats();
        assert_eq!((before.misses, before.hits), (4, 0));
        for x in 0..4 {
            t.get(&key(x)).unwrap();
        }
        t.get(&key(100)).unwrap();
        let s = t.stats();
        assert_eq!(s.max_chain, 4);
        assert_eq!(s.mean_probes_hit, 2.5);
        assert_eq!(s.misses, 5);
    }

    #[test]
    fn max_chain_equals_largest_bin() {
        let mut r = rng::master(5);
        let keys = generate_set(SetKind::Random, 24, 1000, &mut r).unwrap();
        let mut t = LinearHashTable::with_seed(24, 10, 6).unwrap();
        for k in keys.members() {
            t.insert(k.clone(), ()).unwrap();
        }
        let stored = BallSet::new(24, t.keys().cloned().collect()).unwrap();
        assert_eq!(t.stats().max_chain, largest_bin(t.hash(), &stored).unwrap());
    }

    #[test]
    fn subspace_keys_chain_length() {
        let mut r = rng::master(7);
        for _ in 0..50 {
            let s = generate_set(SetKind::Subspace, 12, 5, &mut r).unwrap();
            let a = sample_uniform_linear(12, 5, &mut r).unwrap();
            let mut t = LinearHashTable::with_map(a.clone(), rng::master(8)).unwrap();
            for k in s.members() {
                t.insert(k.clone(), ()).unwrap();
            }
            assert_eq!(t.resizes(), 0);
            let k = subspace_structure(&a, &s).unwrap().k;
            assert_eq!(t.stats().max_chain, 1 << k);
        }
    }
}
