//! Bit-packed linear algebra over GF(2).

mod factor;
mod map;
mod subspace;
mod vector;

pub use factor::{count_factorizations, extend_kernel_map, factor_set_size, kernel_map_count, sample_factor_t0};
pub use map::{
    compose, sample_surjective, sample_uniform_affine, sample_uniform_linear, sample_vector, LinearMap, PackedMap,
};
pub use subspace::{AffineSubspace, SubspaceBasis};
pub use vector::Gf2Vector;
