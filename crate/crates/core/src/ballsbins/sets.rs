use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::error::{check_dim, guard, Error, Result};
use crate::gf2::{sample_vector, AffineSubspace, Gf2Vector, SubspaceBasis};

/// Families of ball sets the harness can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    /// The first `size` vectors in counting order.
    Interval,
    /// `size` distinct uniform vectors.
    Random,
    /// Span of `dim` random independent vectors.
    Subspace,
    /// A random coset of a random `dim`-dimensional subspace.
    AffineSubspace,
    /// A subspace of dimension `⌊log₂ size⌋ − 1` plus random vectors outside it, `size` in total.
    Cluster,
    /// Caller-supplied members.
    Explicit,
}

impl SetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SetKind::Interval => "interval",
            SetKind::Random => "random",
            SetKind::Subspace => "subspace",
            SetKind::AffineSubspace => "affine",
            SetKind::Cluster => "cluster",
            SetKind::Explicit => "explicit",
        }
    }

    /// Whether the generator parameter is a dimension rather than a cardinality.
    pub fn takes_dim(self) -> bool {
        matches!(self, SetKind::Subspace | SetKind::AffineSubspace)
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "interval" => SetKind::Interval,
            "random" => SetKind::Random,
            "subspace" => SetKind::Subspace,
            "affine" | "affine_subspace" => SetKind::AffineSubspace,
            "cluster" => SetKind::Cluster,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown set kind {other:?} (expected interval|random|subspace|affine|cluster)"
                )))
            }
        })
    }
}

/// How a ball set was produced, for provenance in outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDescriptor {
    pub kind: SetKind,
    /// `size` for cardinality kinds, `dim` for subspace kinds.
    pub param: usize,
}

/// A nonempty set `S` of distinct balls in GF(2)^universe_dim.
#[derive(Debug, Clone)]
pub struct BallSet {
    universe_dim: usize,
    members: Vec<Gf2Vector>,
    descriptor: SetDescriptor,
    structure: Option<AffineSubspace>,
    packed: Option<Vec<u64>>,
}

impl BallSet {
    /// Deduplicates `members`, keeping first occurrences in order.
    pub fn new(universe_dim: usize, members: Vec<Gf2Vector>) -> Result<Self> {
        let n = members.len();
        Self::build(universe_dim, members, SetDescriptor { kind: SetKind::Explicit, param: n }, None)
    }

    /// The whole universe GF(2)^u in counting order.
    pub fn universe(universe_dim: usize) -> Result<Self> {
        guard("universe enumeration", universe_dim)?;
        Self::build(
            universe_dim,
            Gf2Vector::all(universe_dim).collect(),
            SetDescriptor { kind: SetKind::Interval, param: 1 << universe_dim },
            Some(AffineSubspace {
                offset: Gf2Vector::zeros(universe_dim),
                directions: SubspaceBasis::full(universe_dim),
            }),
        )
    }

    fn build(
        universe_dim: usize,
        members: Vec<Gf2Vector>,
        descriptor: SetDescriptor,
        structure: Option<AffineSubspace>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("ball sets must be nonempty".into()));
        }
        let mut seen = HashSet::with_capacity(members.len());
        let mut unique = Vec::with_capacity(members.len());
        for m in members {
            check_dim(universe_dim, m.dim())?;
            if seen.insert(m.clone()) {
                unique.push(m);
            }
        }
        let packed = (universe_dim <= 64).then(|| unique.iter().map(|m| m.words()[0]).collect());
        Ok(Self { universe_dim, members: unique, descriptor, structure, packed })
    }

    pub fn universe_dim(&self) -> usize {
        self.universe_dim
    }

    pub fn members(&self) -> &[Gf2Vector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn descriptor(&self) -> &SetDescriptor {
        &self.descriptor
    }

    /// The coset this set equals, for subspace-generated sets.
    pub fn structure(&self) -> Option<&AffineSubspace> {
        self.structure.as_ref()
    }

    pub(crate) fn packed(&self) -> Option<&[u64]> {
        self.packed.as_deref()
    }
}

fn fits(u: usize, size: usize) -> bool {
    u >= 64 || (size as u128) <= 1u128 << u
}

fn random_independent<R: Rng + ?Sized>(u: usize, dim: usize, rng: &mut R) -> SubspaceBasis {
    let mut vectors: Vec<Gf2Vector> = Vec::with_capacity(dim);
    while vectors.len() < dim {
        let v = sample_vector(u, rng);
        let span = SubspaceBasis::span_of(u, vectors.clone()).expect("dims match");
        if !span.contains(&v) {
            vectors.push(v);
        }
    }
    SubspaceBasis::new(u, vectors).expect("built independent")
}

fn distinct_random<R: Rng + ?Sized>(
    u: usize,
    size: usize,
    exclude: &HashSet<Gf2Vector>,
    rng: &mut R,
) -> Vec<Gf2Vector> {
    let mut seen = exclude.clone();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let v = sample_vector(u, rng);
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// Generates a ball set of the given family. `size_or_dim` is the
/// cardinality, or the subspace dimension for the two subspace kinds.
pub fn generate_set<R: Rng + ?Sized>(kind: SetKind, u: usize, size_or_dim: usize, rng: &mut R) -> Result<BallSet> {
    if u == 0 {
        return Err(Error::InvalidArgument("universe dimension must be >= 1".into()));
    }
    let descriptor = SetDescriptor { kind, param: size_or_dim };
    if kind.takes_dim() {
        if size_or_dim > u {
            return Err(Error::InvalidArgument(format!(
                "subspace dimension {size_or_dim} exceeds universe dimension {u}"
            )));
        }
        guard("subspace ball set", size_or_dim)?;
    } else {
        if size_or_dim == 0 {
            return Err(Error::InvalidArgument("set size must be >= 1".into()));
        }
        if !fits(u, size_or_dim) {
            return Err(Error::InvalidArgument(format!("set size {size_or_dim} exceeds 2^{u}")));
        }
    }

    match kind {
        SetKind::Interval => {
            let members = (0..size_or_dim as u64).map(|i| Gf2Vector::from_words(u, &[i])).collect();
            BallSet::build(u, members, descriptor, None)
        }
        SetKind::Random => {
            let members = if u < 64 && (size_or_dim as u64) > (1u64 << u) / 4 {
                index::sample(rng, 1usize << u, size_or_dim)
                    .into_iter()
                    .map(|i| Gf2Vector::from_u64(u, i as u64))
                    .collect()
            } else {
                distinct_random(u, size_or_dim, &HashSet::new(), rng)
            };
            BallSet::build(u, members, descriptor, None)
        }
        SetKind::Subspace | SetKind::AffineSubspace => {
            let directions = random_independent(u, size_or_dim, rng);
            let offset = if kind == SetKind::AffineSubspace { sample_vector(u, rng) } else { Gf2Vector::zeros(u) };
            let coset = AffineSubspace { offset, directions };
            BallSet::build(u, coset.members()?, descriptor, Some(coset))
        }
        SetKind::Cluster => {
            let core_dim = (usize::BITS - 1 - size_or_dim.leading_zeros()).saturating_sub(1) as usize;
            let core_dim = core_dim.min(u);
            let core = random_independent(u, core_dim, rng).span()?;
            let exclude: HashSet<_> = core.iter().cloned().collect();
            let noise = distinct_random(u, size_or_dim - core.len(), &exclude, rng);
            BallSet::build(u, core.into_iter().chain(noise).collect(), descriptor, None)
        }
        SetKind::Explicit => Err(Error::InvalidArgument("explicit sets are built with BallSet::new".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn interval_is_counting_order() {
        let s = generate_set(SetKind::Interval, 4, 4, &mut rng::master(0)).unwrap();
        let labels: Vec<_> = s.members().iter().map(|m| m.to_string()).collect();
        assert_eq!(labels, ["0000", "0001", "0010", "0011"]);
    }

    #[test]
    fn zero_dim_subspace_is_origin() {
        let s = generate_set(SetKind::Subspace, 5, 0, &mut rng::master(0)).unwrap();
        assert_eq!(s.members(), &[Gf2Vector::zeros(5)]);
    }

    #[test]
    fn random_sets_are_distinct_and_replay() {
        let a = generate_set(SetKind::Random, 16, 256, &mut rng::master(3)).unwrap();
        let b = generate_set(SetKind::Random, 16, 256, &mut rng::master(3)).unwrap();
        assert_eq!(a.len(), 256);
        assert_eq!(a.members(), b.members());
        // Dense regime goes through index sampling.
        let c = generate_set(SetKind::Random, 6, 60, &mut rng::master(3)).unwrap();
        assert_eq!(c.len(), 60);
        // Wide universes fall back to rejection.
        let d = generate_set(SetKind::Random, 100, 50, &mut rng::master(3)).unwrap();
        assert_eq!(d.len(), 50);
    }

    #[test]
    fn exact_cardinalities() {
        let mut r = rng::master(4);
        for (kind, param, expected) in [
            (SetKind::Subspace, 4, 16),
            (SetKind::AffineSubspace, 3, 8),
            (SetKind::Cluster, 100, 100),
            (SetKind::Cluster, 1, 1),
            (SetKind::Interval, 256, 256),
        ] {
            let s = generate_set(kind, 10, param, &mut r).unwrap();
            assert_eq!(s.len(), expected, "{kind}");
            assert_eq!(s.descriptor().kind, kind);
        }
    }

    #[test]
    fn affine_coset_structure() {
        let s = generate_set(SetKind::AffineSubspace, 8, 3, &mut rng::master(5)).unwrap();
        let coset = s.structure().unwrap();
        assert!(s.members().iter().all(|m| coset.contains(m)));
    }

    #[test]
    fn size_errors() {
        let mut r = rng::master(6);
        assert!(generate_set(SetKind::Interval, 3, 9, &mut r).is_err());
        assert!(generate_set(SetKind::Random, 3, 9, &mut r).is_err());
        assert!(generate_set(SetKind::Subspace, 3, 4, &mut r).is_err());
        assert!(generate_set(SetKind::Interval, 3, 8, &mut r).is_ok());
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let v = |x| Gf2Vector::from_u64(3, x);
        let s = BallSet::new(3, vec![v(5), v(1), v(5), v(2)]).unwrap();
        assert_eq!(s.members(), &[v(5), v(1), v(2)]);
        assert!(BallSet::new(3, vec![]).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in ["interval", "random", "subspace", "affine", "cluster"] {
            assert_eq!(k.parse::<SetKind>().unwrap().as_str(), k);
        }
        assert!("banana".parse::<SetKind>().is_err());
    }
}
