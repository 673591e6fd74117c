#ifndef GF2HASH_H
#define GF2HASH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Gf2Status {
  GF2_STATUS_OK = 0,
  GF2_STATUS_NULL_POINTER = 1,
  GF2_STATUS_INVALID_ARGUMENT = 2,
  GF2_STATUS_DIMENSION_MISMATCH = 3,
  GF2_STATUS_SIZE_GUARD = 4,
  GF2_STATUS_PRECONDITION = 5,
  GF2_STATUS_EMPTY_FAMILY = 6,
  GF2_STATUS_NOT_FOUND = 7,
  GF2_STATUS_PANIC = 8,
} Gf2Status;

typedef enum Gf2SetKind {
  GF2_SET_KIND_INTERVAL = 0,
  GF2_SET_KIND_RANDOM = 1,
  GF2_SET_KIND_SUBSPACE = 2,
  GF2_SET_KIND_AFFINE = 3,
  GF2_SET_KIND_CLUSTER = 4,
} Gf2SetKind;

/**
 * Nonempty set of distinct balls.
 */
typedef struct Gf2BallSet Gf2BallSet;

/**
 * Linear or affine map `GF(2)^in → GF(2)^out`.
 */
typedef struct Gf2Map Gf2Map;

/**
 * Chained hash table with `uint64_t` keys and values.
 */
typedef struct Gf2Table Gf2Table;

/**
 * Summary of a table's shape, mirroring the library's statistics.
 */
typedef struct Gf2TableStats {
  size_t size;
  size_t bucket_bits;
  size_t max_chain;
  size_t resizes;
  double mean_probes_hit;
  double mean_probes_miss;
} Gf2TableStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *gf2_status_message(enum Gf2Status status);

/**
 * Uniform linear map, or affine map when `affine` is true, drawn from `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_map_sample_uniform(size_t in_dim,
                                      size_t out_dim,
                                      uint64_t seed,
                                      bool affine,
                                      struct Gf2Map **out);

/**
 * Uniform surjective linear map drawn from `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_map_sample_surjective(size_t in_dim,
                                         size_t out_dim,
                                         uint64_t seed,
                                         struct Gf2Map **out);

/**
 * Linear map from `out_dim` packed rows.
 *
 * # Safety
 * `rows` must point to `out_dim` readable words; `out` must be valid for writes.
 */
enum Gf2Status gf2_map_from_rows(size_t in_dim,
                                 size_t out_dim,
                                 const uint64_t *rows,
                                 struct Gf2Map **out);

/**
 * # Safety
 * `map` must be null or a handle not yet freed.
 */
void gf2_map_free(struct Gf2Map *map);

/**
 * # Safety
 * `map` must be a live handle; `out` must be valid for writes.
 */
enum Gf2Status gf2_map_apply(const struct Gf2Map *map, uint64_t x, uint64_t *out);

/**
 * # Safety
 * `map` must be a live handle; `out` must be valid for writes.
 */
enum Gf2Status gf2_map_rank(const struct Gf2Map *map, size_t *out);

/**
 * `outer ∘ inner`; both maps must be linear.
 *
 * # Safety
 * `outer` and `inner` must be live handles; `out` must be valid for writes.
 */
enum Gf2Status gf2_map_compose(const struct Gf2Map *outer,
                               const struct Gf2Map *inner,
                               struct Gf2Map **out);

/**
 * Ball set of a generated family; `size_or_dim` is the subspace dimension
 * for the subspace kinds and the cardinality otherwise.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_set_generate(enum Gf2SetKind kind,
                                size_t u,
                                size_t size_or_dim,
                                uint64_t seed,
                                struct Gf2BallSet **out);

/**
 * Ball set from explicit members; duplicates are dropped.
 *
 * # Safety
 * `members` must point to `len` readable words; `out` must be valid for writes.
 */
enum Gf2Status gf2_set_from_members(size_t u,
                                    const uint64_t *members,
                                    size_t len,
                                    struct Gf2BallSet **out);

/**
 * # Safety
 * `set` must be a live handle; `out` must be valid for writes.
 */
enum Gf2Status gf2_set_len(const struct Gf2BallSet *set, size_t *out);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void gf2_set_free(struct Gf2BallSet *set);

/**
 * Size of the fullest bin of `map` applied to `set`.
 *
 * # Safety
 * `map` and `set` must be live handles; `out` must be valid for writes.
 */
enum Gf2Status gf2_largest_bin(const struct Gf2Map *map, const struct Gf2BallSet *set, size_t *out);

/**
 * Exact `E[lbin]` over all linear maps `GF(2)^u → GF(2)^b` as a reduced
 * fraction `numer / denom`; refused when `u·b > 22`.
 *
 * # Safety
 * `set` must be a live handle; `numer` and `denom` must be valid for writes.
 */
enum Gf2Status gf2_exact_expected_lbin(size_t u,
                                       size_t b,
                                       const struct Gf2BallSet *set,
                                       uint64_t *numer,
                                       uint64_t *denom);

/**
 * `c_ε = 4·(2/ε)^(8/ε)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_c_epsilon(double eps, double *out);

/**
 * Raw (unclamped) covering-event bound at `μ = 2^(b−f)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_bound_e2(uint32_t b, uint32_t f, double *out);

/**
 * Raw (unclamped) bound on `P[lbin ≥ 2·c_ε·r]`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_bound_tail(uint32_t b, double r, double eps, double *out);

/**
 * Empty table over `u`-bit keys with `2^b` buckets.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Gf2Status gf2_table_new(size_t u, size_t b, uint64_t seed, struct Gf2Table **out);

/**
 * # Safety
 * `table` must be null or a handle not yet freed.
 */
void gf2_table_free(struct Gf2Table *table);

/**
 * Inserts or replaces. `replaced` receives whether the key was present and,
 * if so, `old` receives its previous value. Either may be null.
 *
 * # Safety
 * `table` must be a live handle; non-null out-pointers must be valid for writes.
 */
enum Gf2Status gf2_table_insert(struct Gf2Table *table,
                                uint64_t key,
                                uint64_t value,
                                bool *replaced,
                                uint64_t *old);

/**
 * Returns `NOT_FOUND` when the key is absent.
 *
 * # Safety
 * `table` must be a live handle; `out` must be valid for writes.
 */
enum Gf2Status gf2_table_get(const struct Gf2Table *table, uint64_t key, uint64_t *out);

/**
 * Removes `key`, writing its value to `out` when `out` is non-null.
 * Returns `NOT_FOUND` when the key is absent.
 *
 * # Safety
 * `table` must be a live handle; `out` must be null or valid for writes.
 */
enum Gf2Status gf2_table_remove(struct Gf2Table *table, uint64_t key, uint64_t *out);

/**
 * # Safety
 * `table` must be a live handle; `out` must be valid for writes.
 */
enum Gf2Status gf2_table_stats(const struct Gf2Table *table, struct Gf2TableStats *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GF2HASH_H */
