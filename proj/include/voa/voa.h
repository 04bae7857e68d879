/* C interface to the vertex algebra engine.
 *
 * Handles are opaque. Every call returns a voa_status; on failure the message
 * is available from voa_last_error() until the next call on the same thread.
 * Result text is deterministic for identical inputs.
 */
#ifndef VOA_VOA_H
#define VOA_VOA_H

#if defined(__GNUC__)
#define VOA_API __attribute__((visibility("default")))
#else
#define VOA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum voa_status {
  VOA_OK = 0,
  VOA_DIVISION_BY_ZERO,
  VOA_POLE_AT_POINT,
  VOA_MISSING_PARAMETER,
  VOA_PARSE,
  VOA_UNKNOWN_GENERATOR,
  VOA_SECTOR_MISMATCH,
  VOA_UNSUPPORTED_SECTOR,
  VOA_NOT_LOCAL,
  VOA_INVALID_LIE_DATA,
  VOA_INVALID_ALGEBRA,
  VOA_INFINITE_DIMENSIONAL,
  VOA_NON_INVERTIBLE_LINEAR_TERM,
  VOA_NOT_PRIMARY,
  VOA_TRUNCATION_MISMATCH,
  VOA_USAGE,
  VOA_INTERNAL
} voa_status;

typedef struct voa_algebra voa_algebra;
typedef struct voa_result voa_result;

VOA_API const char* voa_status_name(voa_status status);
VOA_API const char* voa_last_error(void);

/* Preset name (heisenberg, virasoro, affine:sl2, affine:sl3, fermion,
 * weyl:N, lattice:N, commutative, commutative:<file>, json:<file>, and the
 * negative control corrupted-heisenberg). */
VOA_API voa_status voa_algebra_load(const char* spec, voa_algebra** out);
VOA_API void voa_algebra_free(voa_algebra* alg);
VOA_API const char* voa_algebra_name(const voa_algebra* alg);

/* Rendered text (or JSON document) and the pass/fail verdict of a result. */
VOA_API const char* voa_result_text(const voa_result* res);
VOA_API int voa_result_passed(const voa_result* res);
VOA_API void voa_result_free(voa_result* res);

/* `params` is a list "name=value, ..." or NULL; `json` selects the
 * structured output. `states` lists are separated by ';'. */
VOA_API voa_status voa_verify(const voa_algebra* alg, int degree, int json, voa_result** out);
VOA_API voa_status voa_ope(const voa_algebra* alg, const char* a, const char* b, const char* params, int json,
                   voa_result** out);
/* [A_m, B_n] by the commutator formula; applied to `c` when c is non-NULL. */
VOA_API voa_status voa_bracket(const voa_algebra* alg, const char* a, const char* m, const char* b, const char* n,
                       const char* c, const char* params, int json, voa_result** out);
VOA_API voa_status voa_character(const voa_algebra* alg, long sector, int cutoff, const char* params, int json,
                         voa_result** out);
/* With `states`: the correlator of the listed insertions under the dual
 * functional of `phi` (default |0>), checked across all expansion regions on
 * `window` depths above each region's leading term (negative: 2n).
 * Without: the Heisenberg family omega_0..omega_n for `phi`. */
VOA_API voa_status voa_npoint(const voa_algebra* alg, const char* states, const char* phi, int n, long window,
                      int json, voa_result** out);
VOA_API voa_status voa_center(const voa_algebra* alg, const char* degree, const char* params, int json,
                      voa_result** out);
VOA_API voa_status voa_coset(const voa_algebra* alg, const char* states, const char* degree, const char* params, int json,
                     voa_result** out);
/* `rho` lists rho_1, rho_2, ... as Scalars. */
VOA_API voa_status voa_coord_check(const voa_algebra* alg, const char* a, const char* rho, int degree, const char* params,
                           int json, voa_result** out);
/* Boson-fermion comparison up to doubled degree `degree_twice`. */
VOA_API voa_status voa_bf_check(int degree_twice, int json, voa_result** out);

#ifdef __cplusplus
}
#endif

#endif
