//! C ABI over `gf2hash`.
//!
//! Objects are opaque heap handles created by `*_new`/`*_sample`/`*_generate`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`Gf2Status`] and writes results through out-pointers, which are
//! left untouched on failure. Vectors cross the boundary as `uint64_t` words,
//! bit `i` holding coordinate `i`, so dimensions are limited to 64.
//!
//! Handles are not thread-safe for concurrent mutation; a map or set may be
//! read from several threads at once.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use gf2hash::ballsbins::{exact_expected_lbin, generate_set, largest_bin, BallSet, SetKind};
use gf2hash::bounds;
use gf2hash::gf2::{compose, sample_surjective, sample_uniform_affine, sample_uniform_linear, Gf2Vector, LinearMap};
use gf2hash::hashtable::LinearHashTable;
use gf2hash::{rng, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gf2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    SizeGuard = 4,
    Precondition = 5,
    EmptyFamily = 6,
    NotFound = 7,
    Panic = 8,
}

impl From<&Error> for Gf2Status {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => Gf2Status::DimensionMismatch,
            Error::InvalidArgument(_) | Error::LinearlyDependent => Gf2Status::InvalidArgument,
            Error::EmptyFamily { .. } => Gf2Status::EmptyFamily,
            Error::Precondition(_) => Gf2Status::Precondition,
            Error::TooLarge { .. } => Gf2Status::SizeGuard,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gf2SetKind {
    Interval = 0,
    Random = 1,
    Subspace = 2,
    Affine = 3,
    Cluster = 4,
}

impl From<Gf2SetKind> for SetKind {
    fn from(k: Gf2SetKind) -> Self {
        match k {
            Gf2SetKind::Interval => SetKind::Interval,
            Gf2SetKind::Random => SetKind::Random,
            Gf2SetKind::Subspace => SetKind::Subspace,
            Gf2SetKind::Affine => SetKind::AffineSubspace,
            Gf2SetKind::Cluster => SetKind::Cluster,
        }
    }
}

/// Linear or affine map `GF(2)^in → GF(2)^out`.
pub struct Gf2Map(LinearMap);

/// Nonempty set of distinct balls.
pub struct Gf2BallSet(BallSet);

/// Chained hash table with `uint64_t` keys and values.
pub struct Gf2Table(LinearHashTable<u64>);

/// Runs `body`, mapping library errors and panics to status codes.
fn guarded(body: impl FnOnce() -> Result<(), Gf2Status>) -> Gf2Status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => Gf2Status::Ok,
        Ok(Err(status)) => status,
        Err(_) => Gf2Status::Panic,
    }
}

fn lib<T>(r: gf2hash::Result<T>) -> Result<T, Gf2Status> {
    r.map_err(|e| Gf2Status::from(&e))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Gf2Status> {
    p.as_ref().ok_or(Gf2Status::NullPointer)
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Gf2Status> {
    p.as_mut().ok_or(Gf2Status::NullPointer)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Gf2Status> {
    if out.is_null() {
        return Err(Gf2Status::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn word_vector(dim: usize, x: u64) -> Result<Gf2Vector, Gf2Status> {
    if dim == 0 || dim > 64 || (dim < 64 && x >> dim != 0) {
        return Err(Gf2Status::InvalidArgument);
    }
    Ok(Gf2Vector::from_u64(dim, x))
}

fn small_dims(in_dim: usize, out_dim: usize) -> Result<(), Gf2Status> {
    if (1..=64).contains(&in_dim) && (1..=64).contains(&out_dim) {
        Ok(())
    } else {
        Err(Gf2Status::InvalidArgument)
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn gf2_status_message(status: Gf2Status) -> *const c_char {
    let msg: &'static std::ffi::CStr = match status {
        Gf2Status::Ok => c"ok",
        Gf2Status::NullPointer => c"null pointer argument",
        Gf2Status::InvalidArgument => c"invalid argument",
        Gf2Status::DimensionMismatch => c"dimension mismatch",
        Gf2Status::SizeGuard => c"size guard refused an exhaustive operation",
        Gf2Status::Precondition => c"precondition violated",
        Gf2Status::EmptyFamily => c"no surjective map between these dimensions",
        Gf2Status::NotFound => c"key not found",
        Gf2Status::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Uniform linear map, or affine map when `affine` is true, drawn from `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_sample_uniform(
    in_dim: usize,
    out_dim: usize,
    seed: u64,
    affine: bool,
    out: *mut *mut Gf2Map,
) -> Gf2Status {
    guarded(|| {
        small_dims(in_dim, out_dim)?;
        let mut r = rng::master(seed);
        let map = if affine {
            lib(sample_uniform_affine(in_dim, out_dim, &mut r))?
        } else {
            lib(sample_uniform_linear(in_dim, out_dim, &mut r))?
        };
        write(out, Box::into_raw(Box::new(Gf2Map(map))))
    })
}

/// Uniform surjective linear map drawn from `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_sample_surjective(
    in_dim: usize,
    out_dim: usize,
    seed: u64,
    out: *mut *mut Gf2Map,
) -> Gf2Status {
    guarded(|| {
        small_dims(in_dim, out_dim)?;
        let map = lib(sample_surjective(in_dim, out_dim, &mut rng::master(seed)))?;
        write(out, Box::into_raw(Box::new(Gf2Map(map))))
    })
}

/// Linear map from `out_dim` packed rows.
///
/// # Safety
/// `rows` must point to `out_dim` readable words; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_from_rows(
    in_dim: usize,
    out_dim: usize,
    rows: *const u64,
    out: *mut *mut Gf2Map,
) -> Gf2Status {
    guarded(|| {
        small_dims(in_dim, out_dim)?;
        if rows.is_null() {
            return Err(Gf2Status::NullPointer);
        }
        let rows = std::slice::from_raw_parts(rows, out_dim);
        let map = lib(LinearMap::from_packed_rows(in_dim, rows))?;
        write(out, Box::into_raw(Box::new(Gf2Map(map))))
    })
}

/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_free(map: *mut Gf2Map) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_apply(map: *const Gf2Map, x: u64, out: *mut u64) -> Gf2Status {
    guarded(|| {
        let m = &deref(map)?.0;
        let y = lib(m.apply(&word_vector(m.in_dim(), x)?))?;
        write(out, y.to_u64().expect("out_dim <= 64"))
    })
}

/// # Safety
/// `map` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_rank(map: *const Gf2Map, out: *mut usize) -> Gf2Status {
    guarded(|| write(out, deref(map)?.0.rank()))
}

/// `outer ∘ inner`; both maps must be linear.
///
/// # Safety
/// `outer` and `inner` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_map_compose(
    outer: *const Gf2Map,
    inner: *const Gf2Map,
    out: *mut *mut Gf2Map,
) -> Gf2Status {
    guarded(|| {
        let c = lib(compose(&deref(outer)?.0, &deref(inner)?.0))?;
        write(out, Box::into_raw(Box::new(Gf2Map(c))))
    })
}

/// Ball set of a generated family; `size_or_dim` is the subspace dimension
/// for the subspace kinds and the cardinality otherwise.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_set_generate(
    kind: Gf2SetKind,
    u: usize,
    size_or_dim: usize,
    seed: u64,
    out: *mut *mut Gf2BallSet,
) -> Gf2Status {
    guarded(|| {
        if u == 0 || u > 64 {
            return Err(Gf2Status::InvalidArgument);
        }
        let s = lib(generate_set(kind.into(), u, size_or_dim, &mut rng::master(seed)))?;
        write(out, Box::into_raw(Box::new(Gf2BallSet(s))))
    })
}

/// Ball set from explicit members; duplicates are dropped.
///
/// # Safety
/// `members` must point to `len` readable words; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_set_from_members(
    u: usize,
    members: *const u64,
    len: usize,
    out: *mut *mut Gf2BallSet,
) -> Gf2Status {
    guarded(|| {
        if members.is_null() {
            return Err(Gf2Status::NullPointer);
        }
        let vs = std::slice::from_raw_parts(members, len)
            .iter()
            .map(|&x| word_vector(u, x))
            .collect::<Result<Vec<_>, _>>()?;
        let s = lib(BallSet::new(u, vs))?;
        write(out, Box::into_raw(Box::new(Gf2BallSet(s))))
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_set_len(set: *const Gf2BallSet, out: *mut usize) -> Gf2Status {
    guarded(|| write(out, deref(set)?.0.len()))
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf2_set_free(set: *mut Gf2BallSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Size of the fullest bin of `map` applied to `set`.
///
/// # Safety
/// `map` and `set` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_largest_bin(map: *const Gf2Map, set: *const Gf2BallSet, out: *mut usize) -> Gf2Status {
    guarded(|| write(out, lib(largest_bin(&deref(map)?.0, &deref(set)?.0))?))
}

/// Exact `E[lbin]` over all linear maps `GF(2)^u → GF(2)^b` as a reduced
/// fraction `numer / denom`; refused when `u·b > 22`.
///
/// # Safety
/// `set` must be a live handle; `numer` and `denom` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_exact_expected_lbin(
    u: usize,
    b: usize,
    set: *const Gf2BallSet,
    numer: *mut u64,
    denom: *mut u64,
) -> Gf2Status {
    guarded(|| {
        let s = deref(set)?;
        if numer.is_null() || denom.is_null() {
            return Err(Gf2Status::NullPointer);
        }
        let e = lib(exact_expected_lbin(u, b, &s.0))?;
        write(numer, *e.numer())?;
        write(denom, *e.denom())
    })
}

/// `c_ε = 4·(2/ε)^(8/ε)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_c_epsilon(eps: f64, out: *mut f64) -> Gf2Status {
    guarded(|| write(out, lib(bounds::c_epsilon(eps))?))
}

/// Raw (unclamped) covering-event bound at `μ = 2^(b−f)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_bound_e2(b: u32, f: u32, out: *mut f64) -> Gf2Status {
    guarded(|| write(out, lib(bounds::bound_e2(b, f))?.raw))
}

/// Raw (unclamped) bound on `P[lbin ≥ 2·c_ε·r]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_bound_tail(b: u32, r: f64, eps: f64, out: *mut f64) -> Gf2Status {
    guarded(|| write(out, lib(bounds::bound_tail(b, r, eps))?.raw))
}

/// Empty table over `u`-bit keys with `2^b` buckets.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_new(u: usize, b: usize, seed: u64, out: *mut *mut Gf2Table) -> Gf2Status {
    guarded(|| {
        if u == 0 || u > 64 {
            return Err(Gf2Status::InvalidArgument);
        }
        let t = lib(LinearHashTable::with_seed(u, b, seed))?;
        write(out, Box::into_raw(Box::new(Gf2Table(t))))
    })
}

/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_free(table: *mut Gf2Table) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Inserts or replaces. `replaced` receives whether the key was present and,
/// if so, `old` receives its previous value. Either may be null.
///
/// # Safety
/// `table` must be a live handle; non-null out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_insert(
    table: *mut Gf2Table,
    key: u64,
    value: u64,
    replaced: *mut bool,
    old: *mut u64,
) -> Gf2Status {
    guarded(|| {
        let t = &mut deref_mut(table)?.0;
        let prev = lib(t.insert(word_vector(t.key_dim(), key)?, value))?;
        if !replaced.is_null() {
            replaced.write(prev.is_some());
        }
        if let (Some(v), false) = (prev, old.is_null()) {
            old.write(v);
        }
        Ok(())
    })
}

/// Returns `NOT_FOUND` when the key is absent.
///
/// # Safety
/// `table` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_get(table: *const Gf2Table, key: u64, out: *mut u64) -> Gf2Status {
    guarded(|| {
        let t = &deref(table)?.0;
        match lib(t.get(&word_vector(t.key_dim(), key)?))? {
            Some(&v) => write(out, v),
            None => Err(Gf2Status::NotFound),
        }
    })
}

/// Removes `key`, writing its value to `out` when `out` is non-null.
/// Returns `NOT_FOUND` when the key is absent.
///
/// # Safety
/// `table` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_remove(table: *mut Gf2Table, key: u64, out: *mut u64) -> Gf2Status {
    guarded(|| {
        let t = &mut deref_mut(table)?.0;
        match lib(t.remove(&word_vector(t.key_dim(), key)?))? {
            Some(v) if !out.is_null() => {
                out.write(v);
                Ok(())
            }
            Some(_) => Ok(()),
            None => Err(Gf2Status::NotFound),
        }
    })
}

/// Summary of a table's shape, mirroring the library's statistics.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct Gf2TableStats {
    pub size: usize,
    pub bucket_bits: usize,
    pub max_chain: usize,
    pub resizes: usize,
    pub mean_probes_hit: f64,
    pub mean_probes_miss: f64,
}

/// # Safety
/// `table` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gf2_table_stats(table: *const Gf2Table, out: *mut Gf2TableStats) -> Gf2Status {
    guarded(|| {
        let s = deref(table)?.0.stats();
        write(
            out,
            Gf2TableStats {
                size: s.size,
                bucket_bits: s.bucket_bits,
                max_chain: s.max_chain,
                resizes: s.resizes,
                mean_probes_hit: s.mean_probes_hit,
                mean_probes_miss: s.mean_probes_miss,
            },
        )
    })
}
