use super::map::Echelon;
use super::vector::Gf2Vector;
use crate::error::{check_dim, guard, Error, Result};

/// A linearly independent list of vectors spanning a subspace of GF(2)^ambient_dim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: Vec<Gf2Vector>,
}

impl SubspaceBasis {
    /// Validates dimensions and independence.
    pub fn new(ambient_dim: usize, basis: Vec<Gf2Vector>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be >= 1".into()));
        }
        for v in &basis {
            check_dim(ambient_dim, v.dim())?;
        }
        if Echelon::reduce(basis.clone(), ambient_dim).pivots.len() != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Self { ambient_dim, basis })
    }

    pub(crate) fn from_independent(ambient_dim: usize, basis: Vec<Gf2Vector>) -> Self {
        debug_assert!(Self::new(ambient_dim, basis.clone()).is_ok());
        Self { ambient_dim, basis }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::from_independent(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_independent(ambient_dim, (0..ambient_dim).map(|i| Gf2Vector::unit(ambient_dim, i)).collect())
    }

    /// Reduces an arbitrary spanning list to a basis of its span.
    pub fn span_of(ambient_dim: usize, vectors: Vec<Gf2Vector>) -> Result<Self> {
        for v in &vectors {
            check_dim(ambient_dim, v.dim())?;
        }
        Ok(Self::from_independent(ambient_dim, Echelon::reduce(vectors, ambient_dim).rows))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[Gf2Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        if v.dim() != self.ambient_dim {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.clone());
        Echelon::reduce(rows, self.ambient_dim).pivots.len() == self.basis.len()
    }

    /// `Σ coeffs_i · basis_i`, with coefficient `i` taken from bit `i` of `coeffs`.
    pub fn combination(&self, coeffs: u64) -> Gf2Vector {
        let mut acc = Gf2Vector::zeros(self.ambient_dim);
        for (i, b) in self.basis.iter().enumerate() {
            if (coeffs >> i) & 1 == 1 {
                acc ^= b;
            }
        }
        acc
    }

    /// Every member of the span, `2^dim` vectors.
    pub fn span(&self) -> Result<Vec<Gf2Vector>> {
        guard("subspace enumeration", self.dim())?;
        Ok((0..1u64 << self.dim()).map(|c| self.combination(c)).collect())
    }

    /// A basis `C` with `span(self) ⊕ span(C)` equal to the ambient space.
    ///
    /// Takes the standard unit vectors at the non-pivot columns of the reduced
    /// echelon form. Over GF(2) a true orthogonal complement need not be a
    /// complement at all (self-orthogonal vectors exist), so only the direct-sum
    /// property is guaranteed.
    pub fn complement_basis(&self) -> SubspaceBasis {
        let ech = Echelon::reduce(self.basis.clone(), self.ambient_dim);
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let basis =
            (0..self.ambient_dim).filter(|&j| !is_pivot[j]).map(|j| Gf2Vector::unit(self.ambient_dim, j)).collect();
        Self::from_independent(self.ambient_dim, basis)
    }
}

/// The coset `offset + span(directions)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    pub offset: Gf2Vector,
    pub directions: SubspaceBasis,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        v.dim() == self.offset.dim() && self.directions.contains(&(v ^ &self.offset))
    }

    pub fn members(&self) -> Result<Vec<Gf2Vector>> {
        Ok(self.directions.span()?.into_iter().map(|d| &d ^ &self.offset).collect())
    }
}
