#ifndef ALMOST_INVARIANT_H
#define ALMOST_INVARIANT_H

#include <stddef.h>
#include <stdint.h>

/**
 * Result of every call.
 */
typedef enum AiStatus {
  AI_STATUS_OK = 0,
  /**
   * A certificate did not pass verification.
   */
  AI_STATUS_VERIFY_FAILED = 1,
  /**
   * The input lies outside the hypotheses of the construction.
   */
  AI_STATUS_HYPOTHESIS = 2,
  /**
   * Malformed or inconsistent input.
   */
  AI_STATUS_INVALID_INPUT = 3,
  /**
   * Internal consistency failure.
   */
  AI_STATUS_INTERNAL = 4,
  AI_STATUS_NULL_POINTER = 5,
  AI_STATUS_PANIC = 6,
} AiStatus;

/**
 * A finite field GF(p^n).
 */
typedef struct AiField AiField;

/**
 * A subspace of GF(q)^d.
 */
typedef struct AiSubspace AiSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *ai_last_error(void);

/**
 * Creates GF(p^n) with its canonical modulus.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AiStatus ai_field_new(uint32_t p, uint32_t n, struct AiField **out);

/**
 * Number of elements of the field, or 0 for NULL.
 *
 * # Safety
 * `field` must be NULL or a handle from [`ai_field_new`].
 */
uint64_t ai_field_order(const struct AiField *field);

/**
 * # Safety
 * `field` must be NULL or a handle from [`ai_field_new`] not yet freed.
 */
void ai_field_free(struct AiField *field);

/**
 * Span of `rows` vectors of length `cols`, stored row-major in `data`.
 *
 * # Safety
 * `field` must be a live handle, `data` must hold `rows * cols` values (it may be NULL when
 * that product is 0), and `out` must be a valid pointer.
 */
enum AiStatus ai_subspace_span(const struct AiField *field,
                               const uint32_t *data,
                               size_t rows,
                               size_t cols,
                               struct AiSubspace **out);

/**
 * Dimension of the subspace, or 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t ai_subspace_dim(const struct AiSubspace *s);

/**
 * Dimension of the ambient space, or 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t ai_subspace_ambient_dim(const struct AiSubspace *s);

/**
 * `a + b`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum AiStatus ai_subspace_sum(const struct AiSubspace *a,
                              const struct AiSubspace *b,
                              struct AiSubspace **out);

/**
 * `a ∩ b`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum AiStatus ai_subspace_intersect(const struct AiSubspace *a,
                                    const struct AiSubspace *b,
                                    struct AiSubspace **out);

/**
 * `dim a/(a ∩ b)`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum AiStatus ai_subspace_quotient_dim(const struct AiSubspace *a,
                                       const struct AiSubspace *b,
                                       size_t *out);

/**
 * Copies the reduced row echelon basis, row-major, into `buf`, which must have room for
 * `dim * ambient_dim` values.
 *
 * # Safety
 * `s` must be a live handle and `buf` must point to `len` writable values.
 */
enum AiStatus ai_subspace_basis(const struct AiSubspace *s, uint32_t *buf, size_t len);

/**
 * # Safety
 * `s` must be NULL or a live handle.
 */
void ai_subspace_free(struct AiSubspace *s);

/**
 * Runs an instance and writes its certificate JSON to `*out`. `kind` may be NULL when the
 * instance names its own kind.
 *
 * # Safety
 * `instance_json` must be a NUL-terminated string, `kind` NULL or one, and `out` valid.
 */
enum AiStatus ai_run(const char *kind, const char *instance_json, char **out);

/**
 * Checks a certificate against its instance. Returns `Ok` when every assertion holds and
 * `VerifyFailed` naming the first that does not.
 *
 * # Safety
 * Both arguments must be NUL-terminated strings.
 */
enum AiStatus ai_verify(const char *certificate_json, const char *instance_json);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void ai_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALMOST_INVARIANT_H */
