use std::fmt;

use rand::Rng;

use super::subspace::SubspaceBasis;
use super::vector::{words_for, Gf2Vector, WORD_BITS};
use crate::error::{check_dim, Error, Result};

/// The map `x ↦ Ax + a` from GF(2)^in_dim to GF(2)^out_dim.
///
/// `A` is stored row-major: `rows[i]` is the `i`-th row, so output bit `i`
/// is the parity of `rows[i] & x`. A missing translation means the map is
/// linear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    in_dim: usize,
    out_dim: usize,
    rows: Vec<Gf2Vector>,
    translation: Option<Gf2Vector>,
}

impl LinearMap {
    pub fn from_rows(in_dim: usize, rows: Vec<Gf2Vector>) -> Result<Self> {
        if in_dim == 0 || rows.is_empty() {
            return Err(Error::InvalidArgument("linear maps need in_dim >= 1 and at least one row".into()));
        }
        for r in &rows {
            check_dim(in_dim, r.dim())?;
        }
        Ok(Self { in_dim, out_dim: rows.len(), rows, translation: None })
    }

    /// Rows given as integers, bit `j` of `rows[i]` being entry `(i, j)`.
    pub fn from_packed_rows(in_dim: usize, rows: &[u64]) -> Result<Self> {
        if in_dim > WORD_BITS {
            return Err(Error::InvalidArgument(format!("packed rows hold at most 64 columns, got {in_dim}")));
        }
        if rows.iter().any(|&r| in_dim < WORD_BITS && r >> in_dim != 0) {
            return Err(Error::InvalidArgument("packed row has bits past in_dim".into()));
        }
        Self::from_rows(in_dim, rows.iter().map(|&r| Gf2Vector::from_u64(in_dim, r)).collect())
    }

    /// The map whose `j`-th column is `columns[j]`.
    pub fn from_columns(out_dim: usize, columns: &[Gf2Vector]) -> Result<Self> {
        if columns.is_empty() || out_dim == 0 {
            return Err(Error::InvalidArgument("need at least one column and out_dim >= 1".into()));
        }
        let in_dim = columns.len();
        let mut rows = vec![Gf2Vector::zeros(in_dim); out_dim];
        for (j, col) in columns.iter().enumerate() {
            check_dim(out_dim, col.dim())?;
            for i in col.iter_ones() {
                rows[i].set(j, true);
            }
        }
        Self::from_rows(in_dim, rows)
    }

    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        Self::from_rows(in_dim, vec![Gf2Vector::zeros(in_dim); out_dim]).expect("zero map with positive dimensions")
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_rows(dim, (0..dim).map(|i| Gf2Vector::unit(dim, i)).collect())
            .expect("identity with positive dimension")
    }

    pub fn with_translation(mut self, translation: Gf2Vector) -> Result<Self> {
        check_dim(self.out_dim, translation.dim())?;
        self.translation = Some(translation);
        Ok(self)
    }

    #[inline]
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    #[inline]
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn translation(&self) -> Option<&Gf2Vector> {
        self.translation.as_ref()
    }

    pub fn is_linear(&self) -> bool {
        self.translation.is_none()
    }

    /// The matrix part `x ↦ Ax`, dropping any translation.
    pub fn linear_part(&self) -> LinearMap {
        LinearMap { translation: None, ..self.clone() }
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    /// Copy of this map with matrix entry `(row, col)` flipped.
    pub fn with_flipped_entry(&self, row: usize, col: usize) -> LinearMap {
        let mut out = self.clone();
        out.rows[row].toggle(col);
        out
    }

    pub fn column(&self, col: usize) -> Gf2Vector {
        let mut c = Gf2Vector::zeros(self.out_dim);
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(col) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> LinearMap {
        let cols: Vec<_> = (0..self.in_dim).map(|j| self.column(j)).collect();
        LinearMap::from_rows(self.out_dim, cols).expect("transpose of a valid map")
    }

    pub fn apply(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        check_dim(self.in_dim, x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Gf2Vector) -> Gf2Vector {
        let mut y = match &self.translation {
            Some(a) => a.clone(),
            None => Gf2Vector::zeros(self.out_dim),
        };
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                y.toggle(i);
            }
        }
        y
    }

    /// Single-word representation, available when both dimensions are at most 64.
    pub fn packed(&self) -> Option<PackedMap> {
        if self.in_dim > WORD_BITS || self.out_dim > WORD_BITS {
            return None;
        }
        Some(PackedMap {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            rows: self.rows.iter().map(|r| r.words()[0]).collect(),
            translation: self.translation.as_ref().map_or(0, |a| a.words()[0]),
        })
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.rows.clone(), self.in_dim).pivots.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.out_dim
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column of the reduced echelon form.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let ech = Echelon::reduce(self.rows.clone(), self.in_dim);
        let mut is_pivot = vec![false; self.in_dim];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.in_dim)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = Gf2Vector::unit(self.in_dim, free);
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        SubspaceBasis::from_independent(self.in_dim, basis)
    }

    /// Basis of the column space (the image of the linear part).
    pub fn image_basis(&self) -> SubspaceBasis {
        let cols = (0..self.in_dim).map(|j| self.column(j)).collect();
        let ech = Echelon::reduce(cols, self.out_dim);
        SubspaceBasis::from_independent(self.out_dim, ech.rows)
    }

    /// Some `x` with `Ax = y` (translation ignored), or `None` if `y` is not
    /// in the column space.
    pub fn solve(&self, y: &Gf2Vector) -> Option<Gf2Vector> {
        if y.dim() != self.out_dim {
            return None;
        }
        // Row-reduce [A | y]; the augmented column is tracked separately.
        let mut rows: Vec<(Gf2Vector, bool)> =
            self.rows.iter().enumerate().map(|(i, r)| (r.clone(), y.get(i))).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.in_dim {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].0.get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let (pr, pb) = rows[next].clone();
            for (r, (row, bit)) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    *row ^= &pr;
                    *bit ^= pb;
                }
            }
            pivots.push(col);
            next += 1;
        }
        if rows[next..].iter().any(|(_, bit)| *bit) {
            return None;
        }
        let mut x = Gf2Vector::zeros(self.in_dim);
        for (k, &p) in pivots.iter().enumerate() {
            x.set(p, rows[k].1);
        }
        Some(x)
    }

    /// Inverse of a square invertible matrix, by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Option<LinearMap> {
        if self.in_dim != self.out_dim {
            return None;
        }
        let n = self.in_dim;
        let mut left = self.rows.clone();
        let mut right: Vec<_> = (0..n).map(|i| Gf2Vector::unit(n, i)).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| left[r].get(col))?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            for r in 0..n {
                if r != col && left[r].get(col) {
                    let (lp, rp) = (left[col].clone(), right[col].clone());
                    left[r] ^= &lp;
                    right[r] ^= &rp;
                }
            }
        }
        let mut inv = LinearMap::from_rows(n, right).ok()?;
        if let Some(a) = &self.translation {
            // (Ax + a)^-1 = A^-1 y + A^-1 a
            let shift = inv.apply_unchecked(a);
            inv.translation = Some(shift);
        }
        Some(inv)
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        f.debug_struct("LinearMap")
            .field("in_dim", &self.in_dim)
            .field("out_dim", &self.out_dim)
            .field("rows", &rows)
            .field("translation", &self.translation.as_ref().map(|a| a.to_string()))
            .finish()
    }
}

/// `outer ∘ inner` for linear maps: row `i` of the product is the XOR of the
/// rows of `inner` selected by row `i` of `outer`.
pub fn compose(outer: &LinearMap, inner: &LinearMap) -> Result<LinearMap> {
    check_dim(outer.in_dim, inner.out_dim)?;
    if !outer.is_linear() || !inner.is_linear() {
        return Err(Error::Precondition("compose expects linear maps".into()));
    }
    let rows = outer
        .rows
        .iter()
        .map(|sel| {
            let mut acc = Gf2Vector::zeros(inner.in_dim);
            for j in sel.iter_ones() {
                acc ^= &inner.rows[j];
            }
            acc
        })
        .collect();
    LinearMap::from_rows(inner.in_dim, rows)
}

/// Word-sized copy of a [`LinearMap`] for hot loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedMap {
    pub in_dim: usize,
    pub out_dim: usize,
    pub rows: Vec<u64>,
    pub translation: u64,
}

impl PackedMap {
    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        let mut y = 0u64;
        for (i, r) in self.rows.iter().enumerate() {
            y |= u64::from((r & x).count_ones() & 1) << i;
        }
        y ^ self.translation
    }
}

/// Reduced row echelon form. `rows[k]` has its leading one at `pivots[k]`
/// and every other row is zero in that column.
pub(crate) struct Echelon {
    pub rows: Vec<Gf2Vector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn reduce(mut rows: Vec<Gf2Vector>, ncols: usize) -> Echelon {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..ncols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Echelon { rows, pivots }
    }
}

/// A uniformly random vector of GF(2)^dim.
pub fn sample_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Gf2Vector {
    let words: Vec<u64> = (0..words_for(dim)).map(|_| rng.gen()).collect();
    Gf2Vector::from_words(dim, &words)
}

/// Uniform over all `2^(in_dim·out_dim)` matrices: every entry is an independent fair bit.
pub fn sample_uniform_linear<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Result<LinearMap> {
    if in_dim == 0 || out_dim == 0 {
        return Err(Error::InvalidArgument("dimensions must be >= 1".into()));
    }
    let rows = (0..out_dim).map(|_| sample_vector(in_dim, rng)).collect();
    LinearMap::from_rows(in_dim, rows)
}

/// Uniform matrix plus an independent uniform translation vector.
pub fn sample_uniform_affine<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Result<LinearMap> {
    let linear = sample_uniform_linear(in_dim, out_dim, rng)?;
    linear.with_translation(sample_vector(out_dim, rng))
}

/// Uniform over surjective linear maps, by rejection from the uniform family.
///
/// A uniform `out_dim × in_dim` matrix has full row rank with probability
/// `∏_{i=in_dim-out_dim+1}^{in_dim} (1 - 2^-i) > 0.288`, so fewer than four
/// draws are needed on average.
pub fn sample_surjective<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Result<LinearMap> {
    if out_dim > in_dim {
        return Err(Error::EmptyFamily { in_dim, out_dim });
    }
    loop {
        let candidate = sample_uniform_linear(in_dim, out_dim, rng)?;
        if candidate.is_surjective() {
            return Ok(candidate);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use std::collections::HashMap;

    fn v(bits: &[u8]) -> Gf2Vector {
        Gf2Vector::from_bits(bits)
    }

    fn map(rows: &[&[u8]]) -> LinearMap {
        LinearMap::from_rows(rows[0].len(), rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    // Reference implementation: coordinate-by-coordinate dot products.
    fn naive_apply(t: &LinearMap, x: &Gf2Vector) -> Gf2Vector {
        let mut y = Gf2Vector::zeros(t.out_dim());
        for i in 0..t.out_dim() {
            let mut bit = t.translation().is_some_and(|a| a.get(i));
            for j in 0..t.in_dim() {
                bit ^= t.entry(i, j) && x.get(j);
            }
            y.set(i, bit);
        }
        y
    }

    #[test]
    fn apply_examples() {
        assert_eq!(LinearMap::identity(3).apply(&v(&[1, 0, 1])).unwrap(), v(&[1, 0, 1]));
        assert_eq!(LinearMap::zero(2, 2).apply(&v(&[1, 1])).unwrap(), v(&[0, 0]));
        let t = map(&[&[1, 0], &[1, 1]]);
        assert_eq!(t.apply(&v(&[1, 1])).unwrap(), v(&[1, 0]));
        assert_eq!(naive_apply(&t, &v(&[1, 1])), v(&[1, 0]));
    }

    #[test]
    fn apply_rejects_wrong_dim() {
        let err = LinearMap::identity(3).apply(&v(&[1, 0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, actual: 2 });
    }

    #[test]
    fn apply_matches_naive_exhaustively() {
        let mut r = rng::master(1);
        for in_dim in 1..=8 {
            for out_dim in 1..=5 {
                let t = sample_uniform_affine(in_dim, out_dim, &mut r).unwrap();
                let p = t.packed().unwrap();
                for x in Gf2Vector::all(in_dim) {
                    let y = naive_apply(&t, &x);
                    assert_eq!(t.apply(&x).unwrap(), y);
                    assert_eq!(p.apply(x.to_u64().unwrap()), y.to_u64().unwrap());
                }
            }
        }
    }

    #[test]
    fn apply_matches_naive_multiword() {
        let mut r = rng::master(2);
        let t = sample_uniform_affine(150, 70, &mut r).unwrap();
        for _ in 0..50 {
            let x = sample_vector(150, &mut r);
            assert_eq!(t.apply(&x).unwrap(), naive_apply(&t, &x));
        }
    }

    #[test]
    fn compose_examples() {
        let mut r = rng::master(3);
        let t0 = sample_uniform_linear(4, 3, &mut r).unwrap();
        assert_eq!(compose(&LinearMap::identity(3), &t0).unwrap(), t0);
        let t1 = sample_uniform_linear(3, 2, &mut r).unwrap();
        assert_eq!(compose(&t1, &LinearMap::zero(4, 3)).unwrap(), LinearMap::zero(4, 2));
        let c = compose(&t1, &t0).unwrap();
        for x in Gf2Vector::all(4) {
            let via = t1.apply(&t0.apply(&x).unwrap()).unwrap();
            assert_eq!(c.apply(&x).unwrap(), via);
        }
        assert!(compose(&t0, &t1).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(LinearMap::identity(3).rank(), 3);
        assert_eq!(LinearMap::zero(2, 4).rank(), 0);
        assert_eq!(map(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(LinearMap::identity(3).kernel_basis().dim(), 0);
        let k = map(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.vectors(), &[v(&[1, 1])]);
        let z = LinearMap::zero(2, 2).kernel_basis();
        assert_eq!(z.dim(), 2);
        assert_eq!(z.span().unwrap().len(), 4);
    }

    #[test]
    fn kernel_spans_full_kernel() {
        let mut r = rng::master(4);
        for _ in 0..40 {
            let t = sample_uniform_linear(6, 4, &mut r).unwrap();
            let k = t.kernel_basis();
            assert_eq!(k.dim() + t.rank(), 6);
            let zeros = Gf2Vector::all(6).filter(|x| t.apply(x).unwrap().is_zero()).count();
            assert_eq!(zeros, 1 << k.dim());
            for b in k.vectors() {
                assert!(t.apply(b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn image_examples() {
        assert_eq!(LinearMap::identity(4).image_basis().dim(), 4);
        assert_eq!(LinearMap::zero(3, 2).image_basis().dim(), 0);
        let img = map(&[&[1, 1], &[1, 1]]).image_basis();
        assert_eq!(img.vectors(), &[v(&[1, 1])]);
    }

    #[test]
    fn surjectivity_examples() {
        assert!(LinearMap::identity(3).is_surjective());
        assert!(!LinearMap::zero(3, 1).is_surjective());
        for row in [[1u8, 0], [0, 1], [1, 1]] {
            assert!(map(&[&row]).is_surjective());
        }
    }

    #[test]
    fn solve_finds_preimages() {
        let mut r = rng::master(8);
        for _ in 0..30 {
            let t = sample_uniform_linear(5, 3, &mut r).unwrap();
            let image: Vec<_> = Gf2Vector::all(5).map(|x| t.apply(&x).unwrap()).collect();
            for y in Gf2Vector::all(3) {
                match t.solve(&y) {
                    Some(x) => assert_eq!(t.apply(&x).unwrap(), y),
                    None => assert!(!image.contains(&y)),
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut r = rng::master(5);
        let t = sample_surjective(5, 5, &mut r).unwrap();
        let inv = t.inverse().unwrap();
        assert_eq!(compose(&inv, &t).unwrap(), LinearMap::identity(5));
        assert!(map(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn uniform_sampling_replays() {
        let a = sample_uniform_linear(9, 4, &mut rng::substream(11, 0)).unwrap();
        let b = sample_uniform_linear(9, 4, &mut rng::substream(11, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let mut r = rng::master(6);
        let n = 40_000;
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for _ in 0..n {
            let t = sample_uniform_linear(2, 1, &mut r).unwrap();
            *counts.entry(t.packed().unwrap().rows[0]).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        for c in counts.values() {
            assert!((*c as f64 / n as f64 - 0.25).abs() < 0.02);
        }

        let mut ones = [0usize; 6];
        for _ in 0..n {
            let t = sample_uniform_linear(3, 2, &mut r).unwrap();
            for i in 0..2 {
                for j in 0..3 {
                    ones[i * 3 + j] += usize::from(t.entry(i, j));
                }
            }
        }
        for c in ones {
            assert!((c as f64 / n as f64 - 0.5).abs() < 0.02);
        }
    }

    #[test]
    fn surjective_sampling_frequencies() {
        let mut r = rng::master(7);
        let n = 60_000;
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for _ in 0..n {
            let t = sample_surjective(2, 2, &mut r).unwrap();
            *counts.entry(t.packed().unwrap().rows).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        for c in counts.values() {
            assert!((*c as f64 / n as f64 - 1.0 / 6.0).abs() < 0.02);
        }

        let mut counts: HashMap<u64, usize> = HashMap::new();
        for _ in 0..n {
            let t = sample_surjective(2, 1, &mut r).unwrap();
            *counts.entry(t.packed().unwrap().rows[0]).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(!counts.contains_key(&0));
        for c in counts.values() {
            assert!((*c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.02);
        }

        assert_eq!(sample_surjective(1, 2, &mut r).unwrap_err(), Error::EmptyFamily { in_dim: 1, out_dim: 2 });
    }
}
