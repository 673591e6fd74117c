//! Factorizations `T = T1 ∘ T0` of a linear map through an intermediate space.
//!
//! Fix `T: GF(2)^u → GF(2)^b` and a surjective `T1: GF(2)^f → GF(2)^b`. Split
//! the domain as `Ker(T) ⊕ C` and `GF(2)^f` as `Ker(T1) ⊕ C1`. For `x = x_K + x_C`
//! let `q(x)` be the unique vector of `C1` with `T1(q(x)) = T(x)`. Then
//!
//! ```text
//! T0(x) = q(x) + T_K(x_K) + D(x_C)
//! ```
//!
//! factors `T` for every linear `T_K: Ker(T) → Ker(T1)` and `D: C → Ker(T1)`,
//! and every factor arises exactly once this way. The factor set therefore
//! has `2^((f − b)·u)` members. Fixing `D = 0` leaves the
//! `2^((f − b)·dim Ker T)` factors determined by their restriction to `Ker(T)`.

use rand::Rng;

use super::map::{compose, LinearMap};
use super::subspace::SubspaceBasis;
use super::vector::Gf2Vector;
use crate::error::{check_dim, guard, Error, Result};

fn check_factor_inputs(target: &LinearMap, outer: &LinearMap) -> Result<()> {
    check_dim(target.out_dim(), outer.out_dim())?;
    if !target.is_linear() || !outer.is_linear() {
        return Err(Error::Precondition("factorization expects linear maps".into()));
    }
    Ok(())
}

/// The decompositions shared by every factor of `target` through `outer`.
struct Frame {
    u: usize,
    f: usize,
    ker: SubspaceBasis,
    comp: SubspaceBasis,
    ker1: SubspaceBasis,
    /// `q(c)` for each complement basis vector `c`.
    lifts: Vec<Gf2Vector>,
}

impl Frame {
    fn new(target: &LinearMap, outer: &LinearMap) -> Result<Self> {
        check_factor_inputs(target, outer)?;
        if !outer.is_surjective() {
            return Err(Error::Precondition("outer map T1 must be surjective".into()));
        }
        let ker = target.kernel_basis();
        let comp = ker.complement_basis();
        let ker1 = outer.kernel_basis();
        let comp1 = ker1.complement_basis();

        // outer restricted to comp1 is a bijection onto GF(2)^b.
        let restricted = LinearMap::from_columns(
            outer.out_dim(),
            &comp1.vectors().iter().map(|c| outer.apply_unchecked(c)).collect::<Vec<_>>(),
        )?;
        let to_comp1 = restricted.inverse().expect("surjective map is invertible on a kernel complement");
        let lifts = comp
            .vectors()
            .iter()
            .map(|c| {
                let coords = to_comp1.apply_unchecked(&target.apply_unchecked(c));
                let mut q = Gf2Vector::zeros(outer.in_dim());
                for j in coords.iter_ones() {
                    q ^= &comp1.vectors()[j];
                }
                q
            })
            .collect();
        Ok(Self { u: target.in_dim(), f: outer.in_dim(), ker, comp, ker1, lifts })
    }

    /// Assembles `T0` from its values on the basis `ker ∪ comp`.
    fn assemble(&self, kernel_images: Vec<Gf2Vector>, complement_images: Vec<Gf2Vector>) -> Result<LinearMap> {
        let domain: Vec<Gf2Vector> = self.ker.vectors().iter().chain(self.comp.vectors()).cloned().collect();
        let images: Vec<Gf2Vector> = kernel_images.into_iter().chain(complement_images).collect();
        let to_coords = LinearMap::from_columns(self.u, &domain)?.inverse().expect("kernel plus complement is a basis");
        compose(&LinearMap::from_columns(self.f, &images)?, &to_coords)
    }

    fn random_in_ker1<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.f);
        for k in self.ker1.vectors() {
            if rng.gen::<bool>() {
                v ^= k;
            }
        }
        v
    }
}

/// Draws `T0` uniformly from `{T0 : outer ∘ T0 = target}`.
///
/// `outer` must be surjective, otherwise the factor set can be empty.
pub fn sample_factor_t0<R: Rng + ?Sized>(target: &LinearMap, outer: &LinearMap, rng: &mut R) -> Result<LinearMap> {
    let frame = Frame::new(target, outer)?;
    let kernel_images = (0..frame.ker.dim()).map(|_| frame.random_in_ker1(rng)).collect();
    let complement_images = frame.lifts.iter().map(|q| q ^ &frame.random_in_ker1(rng)).collect();
    frame.assemble(kernel_images, complement_images)
}

/// The factor whose restriction to `Ker(target)` is the given map and whose
/// values on the fixed complement are the canonical lifts `q(x)`.
///
/// `kernel_images[i]` is the image of the `i`-th vector of
/// `target.kernel_basis()` and must lie in `Ker(outer)`.
pub fn extend_kernel_map(target: &LinearMap, outer: &LinearMap, kernel_images: &[Gf2Vector]) -> Result<LinearMap> {
    let frame = Frame::new(target, outer)?;
    check_dim(frame.ker.dim(), kernel_images.len())?;
    for img in kernel_images {
        check_dim(frame.f, img.dim())?;
        if !frame.ker1.contains(img) {
            return Err(Error::Precondition("kernel image must lie in Ker(T1)".into()));
        }
    }
    frame.assemble(kernel_images.to_vec(), frame.lifts.clone())
}

/// Size of the factor set, `2^((f − b)·u)`, for surjective `outer`.
pub fn factor_set_size(target: &LinearMap, outer: &LinearMap) -> u128 {
    let ker_t1 = outer.in_dim() - outer.rank();
    1u128 << (ker_t1 * target.in_dim())
}

/// Number of linear maps `Ker(T) → Ker(T1)`, `2^((f − b)·dim Ker T)`: the
/// factors reachable by [`extend_kernel_map`].
pub fn kernel_map_count(target: &LinearMap, outer: &LinearMap) -> u128 {
    let ker_t = target.in_dim() - target.rank();
    let ker_t1 = outer.in_dim() - outer.rank();
    1u128 << (ker_t * ker_t1)
}

/// Counts `T0` with `outer ∘ T0 = target` by trying all `2^(u·f)` matrices.
pub fn count_factorizations(target: &LinearMap, outer: &LinearMap) -> Result<u64> {
    check_factor_inputs(target, outer)?;
    let u = target.in_dim();
    let f = outer.in_dim();
    guard("factorization count", u * f)?;
    let outer_rows = outer.packed().expect("guarded dims fit in a word").rows;
    let target_rows = target.packed().expect("guarded dims fit in a word").rows;
    let mask = (1u64 << u) - 1;

    let mut count = 0;
    let mut inner = vec![0u64; f];
    for m in 0..1u64 << (u * f) {
        for (j, row) in inner.iter_mut().enumerate() {
            *row = (m >> (j * u)) & mask;
        }
        let hit = outer_rows.iter().zip(&target_rows).all(|(sel, want)| {
            let mut acc = 0u64;
            for (j, row) in inner.iter().enumerate() {
                if (sel >> j) & 1 == 1 {
                    acc ^= row;
                }
            }
            acc == *want
        });
        count += u64::from(hit);
    }
    Ok(count)
}
