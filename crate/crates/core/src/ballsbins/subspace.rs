use super::bins::bin_counts;
use super::sets::{BallSet, SetKind};
use crate::error::{check_dim, Error, Result};
use crate::gf2::{Gf2Vector, LinearMap, SubspaceBasis};

/// Bin structure of a map applied to a linear subspace `S`.
///
/// Each occupied bin is a coset `v + K` with `K = S ∩ Ker(T)`, so every
/// occupied bin has `2^k` balls, `k = dim K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceReport {
    pub set_dim: usize,
    /// `dim(S ∩ Ker T)`.
    pub k: usize,
    pub occupied_bins: usize,
    pub lbin: usize,
    /// Balls in the bin of `T(0)`.
    pub zero_bin: usize,
    /// Occupied bins whose size differs from `2^k`.
    pub unequal_bins: usize,
}

impl SubspaceReport {
    pub fn passed(&self) -> bool {
        self.unequal_bins == 0
            && self.lbin == self.zero_bin
            && self.lbin == 1 << self.k
            && self.occupied_bins << self.k == 1 << self.set_dim
    }
}

pub fn subspace_structure(t: &LinearMap, s: &BallSet) -> Result<SubspaceReport> {
    check_dim(t.in_dim(), s.universe_dim())?;
    let basis = match (s.descriptor().kind, s.structure()) {
        (SetKind::Subspace, Some(coset)) => &coset.directions,
        _ => return Err(Error::Precondition("subspace_structure needs a set generated as a linear subspace".into())),
    };
    let images: Vec<Gf2Vector> = basis.vectors().iter().map(|v| t.linear_part().apply_unchecked(v)).collect();
    let image_dim = SubspaceBasis::span_of(t.out_dim(), images)?.dim();
    let k = basis.dim() - image_dim;

    let hist = bin_counts(t, s)?;
    let zero_label = t.apply_unchecked(&Gf2Vector::zeros(t.in_dim()));
    Ok(SubspaceReport {
        set_dim: basis.dim(),
        k,
        occupied_bins: hist.occupied(),
        lbin: hist.max(),
        zero_bin: hist.get(&zero_label),
        unequal_bins: hist.counts.values().filter(|&&c| c != 1 << k).count(),
    })
}
