#ifndef ROBUSTPAC_H
#define ROBUSTPAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RpStatus {
  RP_STATUS_OK = 0,
  RP_STATUS_NULL_POINTER = 1,
  RP_STATUS_INVALID_ARGUMENT = 2,
  RP_STATUS_PARSE = 3,
  RP_STATUS_DIMENSION_MISMATCH = 4,
  RP_STATUS_CAP_EXCEEDED = 5,
  RP_STATUS_REALIZABILITY = 6,
  RP_STATUS_ZERO_MASS = 7,
  RP_STATUS_IO = 8,
  RP_STATUS_PANIC = 9,
} RpStatus;

typedef enum RpConstantsVariant {
  RP_CONSTANTS_VARIANT_EXACT_RECURRENCE = 0,
  RP_CONSTANTS_VARIANT_DOMINATING_CLOSED_FORM = 1,
} RpConstantsVariant;

/**
 * Opaque concept handle.
 */
typedef struct RpConcept RpConcept;

/**
 * Opaque distribution handle.
 */
typedef struct RpDistribution RpDistribution;

/**
 * Expansion-bound constants; `C₁` is carried as `log₂ C₁`.
 */
typedef struct RpConstants {
  size_t k;
  double alpha;
  double eta;
  double log2_c1;
  double c2;
  double c3;
  double c4;
} RpConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rp_version(void);

/**
 * Parses a concept in the text format (`p cnf`, `dl`, `conj`, `monconj`,
 * `const`).
 */
enum RpStatus rp_concept_parse(const char *text, struct RpConcept **out_concept);

void rp_concept_free(struct RpConcept *concept);

enum RpStatus rp_concept_dim(const struct RpConcept *concept, size_t *out_dim);

/**
 * Evaluates on `bits`, where bit `i` is variable `i`.
 */
enum RpStatus rp_concept_evaluate(const struct RpConcept *concept, uint64_t bits, bool *out_value);

enum RpStatus rp_distribution_uniform(size_t n, struct RpDistribution **out_dist);

/**
 * Product distribution with `Pr[x_i = 1] = means[i]`.
 */
enum RpStatus rp_distribution_product(const double *means,
                                      size_t n,
                                      struct RpDistribution **out_dist);

void rp_distribution_free(struct RpDistribution *dist);

enum RpStatus rp_distribution_log_lipschitz(const struct RpDistribution *dist, double *out_alpha);

enum RpStatus rp_standard_risk(const struct RpConcept *h,
                               const struct RpConcept *c,
                               const struct RpDistribution *dist,
                               double *out_risk);

/**
 * Exact `Pr_{x∼D}[∃ z ∈ B_ρ(x) : h(z) ≠ c(z)]`.
 */
enum RpStatus rp_robust_risk_exact(const struct RpConcept *h,
                                   const struct RpConcept *c,
                                   size_t radius,
                                   const struct RpDistribution *dist,
                                   double *out_risk);

/**
 * Monte-Carlo estimate of the exact-in-the-ball risk and its Hoeffding
 * radius at confidence `1 − delta`.
 */
enum RpStatus rp_robust_risk_mc(const struct RpConcept *h,
                                const struct RpConcept *c,
                                size_t radius,
                                const struct RpDistribution *dist,
                                uint64_t trials,
                                double delta,
                                uint64_t seed,
                                double *out_risk,
                                double *out_confidence_radius);

/**
 * Exact `S_0` and `S_ρ` of the concept's satisfying set.
 */
enum RpStatus rp_expansion_exact(const struct RpConcept *phi,
                                 size_t radius,
                                 const struct RpDistribution *dist,
                                 double *out_s0,
                                 double *out_s_rho);

/**
 * `variant` is an [`RpConstantsVariant`] value.
 */
enum RpStatus rp_theorem1_constants(size_t k,
                                    double alpha,
                                    uint32_t variant,
                                    struct RpConstants *out_constants);

/**
 * `(1 − 2^{−2ρ})^{2m}`.
 */
double rp_allzero_probability(size_t rho, uint64_t m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBUSTPAC_H */
