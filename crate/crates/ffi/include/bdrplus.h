#ifndef BDRPLUS_H
#define BDRPLUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * What a [`BdrValue`] holds.
 */
typedef enum BdrKind {
  BDR_KIND_ELEMENT = 0,
  BDR_KIND_TORIC = 1,
  BDR_KIND_MATRIX = 2,
  BDR_KIND_TORIC_MATRIX = 3,
  BDR_KIND_COCYCLE = 4,
  BDR_KIND_CONNECTION = 5,
} BdrKind;

/**
 * Result code of every fallible call.
 */
typedef enum BdrStatus {
  BDR_STATUS_OK = 0,
  BDR_STATUS_NULL_ARGUMENT = 1,
  BDR_STATUS_INVALID_UTF8 = 2,
  BDR_STATUS_WRONG_KIND = 3,
  BDR_STATUS_PARSE = 4,
  BDR_STATUS_INVALID_PROFILE = 5,
  BDR_STATUS_RING_MISMATCH = 6,
  BDR_STATUS_NON_UNIT = 7,
  BDR_STATUS_PRECISION_EXHAUSTED = 8,
  BDR_STATUS_SINGULAR_AT_PRECISION = 9,
  BDR_STATUS_DOMAIN_VIOLATION = 10,
  BDR_STATUS_NOT_DIVISIBLE = 11,
  BDR_STATUS_LEVEL_EXCEEDS_K = 12,
  BDR_STATUS_NOT_A_COCYCLE = 13,
  BDR_STATUS_NOT_INTEGRABLE = 14,
  BDR_STATUS_TWIST_MISMATCH = 15,
  BDR_STATUS_RESIDUE_FIELD_TOO_SMALL = 16,
  BDR_STATUS_AMBIGUOUS_AT_PRECISION = 17,
  BDR_STATUS_SPECTRA_NOT_DISJOINT = 18,
  BDR_STATUS_NOT_COMMUTING = 19,
  BDR_STATUS_RESIDUE_ROOT_MISSING = 20,
  BDR_STATUS_EXTENSION_COMMUTATION_FAILURE = 21,
  BDR_STATUS_SHAPE = 22,
  /**
   * A check ran and returned a negative verdict.
   */
  BDR_STATUS_CHECK_FAILED = 23,
  BDR_STATUS_INTERNAL = 99,
} BdrStatus;

/**
 * A period ring at a fixed precision profile.
 */
typedef struct BdrRingHandle BdrRingHandle;

/**
 * Any value of the library together with its ring.
 */
typedef struct BdrValue BdrValue;

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *bdrplus_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, freed once.
 */
void bdrplus_string_free(char *s);

/**
 * Build the ring for profile `(p, k, N, alpha, s)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BdrStatus bdrplus_ring_new(uint64_t p,
                                uint32_t k,
                                uint32_t n,
                                uint32_t alpha,
                                uint32_t s,
                                struct BdrRingHandle **out);

/**
 * # Safety
 * `ring` must be null or a handle from [`bdrplus_ring_new`], freed once.
 */
void bdrplus_ring_free(struct BdrRingHandle *ring);

/**
 * A named constant: `t`, `xi`, `q`, `z`, `zeta_<p^n>` or `q^(1/<p^n>)`.
 *
 * # Safety
 * `ring` must be a live handle, `name` a NUL-terminated string, `out` valid.
 */
enum BdrStatus bdrplus_ring_constant(const struct BdrRingHandle *ring,
                                     const char *name,
                                     struct BdrValue **out);

/**
 * Parse a schema-v1 JSON document.
 *
 * # Safety
 * `doc` must be a NUL-terminated string and `out` valid.
 */
enum BdrStatus bdrplus_value_from_json(const char *doc, struct BdrValue **out);

/**
 * Serialize a value; release the string with [`bdrplus_string_free`].
 *
 * # Safety
 * `value` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_value_to_json(const struct BdrValue *value, char **out);

/**
 * # Safety
 * `value` must be null or a handle from this library, freed once.
 */
void bdrplus_value_free(struct BdrValue *value);

/**
 * # Safety
 * `value` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_value_kind(const struct BdrValue *value, enum BdrKind *out);

/**
 * Equality at the common precision; values of different kinds are unequal.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum BdrStatus bdrplus_value_equal(const struct BdrValue *a, const struct BdrValue *b, bool *out);

/**
 * Sum of two elements or two toric elements.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum BdrStatus bdrplus_value_add(const struct BdrValue *a,
                                 const struct BdrValue *b,
                                 struct BdrValue **out);

/**
 * Product of two elements or two toric elements.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum BdrStatus bdrplus_value_mul(const struct BdrValue *a,
                                 const struct BdrValue *b,
                                 struct BdrValue **out);

/**
 * Seeded cocycle of dimension `d` and rank `r` on `p^m Gamma`.
 *
 * # Safety
 * `ring` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_random_cocycle(const struct BdrRingHandle *ring,
                                      uint64_t seed,
                                      uint32_t d,
                                      uint32_t r,
                                      uint32_t m,
                                      struct BdrValue **out);

/**
 * Verify the cocycle relations; a negative verdict returns `CheckFailed`.
 *
 * # Safety
 * `phi` must be a live handle.
 */
enum BdrStatus bdrplus_cocycle_check(const struct BdrValue *phi);

/**
 * The t-connection of a cocycle.
 *
 * # Safety
 * `phi` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_log(const struct BdrValue *phi, struct BdrValue **out);

/**
 * The cocycle on `p^m Gamma` of an integrable t-connection.
 *
 * # Safety
 * `nabla` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_exp(const struct BdrValue *nabla, uint32_t m, struct BdrValue **out);

/**
 * The solution `Y` of `Phi_i Y - Y Phi_j = X`.
 *
 * # Safety
 * All handles must be live and `out` valid.
 */
enum BdrStatus bdrplus_sylvester(const struct BdrValue *phi_i,
                                 const struct BdrValue *phi_j,
                                 const struct BdrValue *x,
                                 struct BdrValue **out);

/**
 * Split `h`, block diagonal mod t with block sizes `types`, into the
 * conjugator `M` and the block-diagonal result.
 *
 * # Safety
 * `h` must be a live handle, `types` must point to `n_types` sizes, and
 * both out-pointers must be valid.
 */
enum BdrStatus bdrplus_block_diagonalize(const struct BdrValue *h,
                                         const uintptr_t *types,
                                         uintptr_t n_types,
                                         struct BdrValue **out_m,
                                         struct BdrValue **out_h);

/**
 * The `m`-th root of `phi` lifting the canonical residual seed.
 *
 * # Safety
 * `phi` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_mth_root(const struct BdrValue *phi, uint32_t m, struct BdrValue **out);

/**
 * Extend a constant cocycle from `m Gamma` to `Gamma`.
 *
 * # Safety
 * `psi` must be a live handle and `out` valid.
 */
enum BdrStatus bdrplus_extend(const struct BdrValue *psi, uint32_t m, struct BdrValue **out);

#endif  /* BDRPLUS_H */
