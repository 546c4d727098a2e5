/* Copyright 2026 The chacon-lab Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libchacon. Every call returns a chacon_status; on failure
 * chacon_last_error() holds a message for the calling thread. Objects are
 * opaque and released with their *_free function. Strings returned through
 * `char**` are released with chacon_string_free. Rationals cross the
 * boundary as "p/q" text. */

#ifndef CHACON_CHACON_H_
#define CHACON_CHACON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CHACON_BUILDING_LIBRARY)
#define CHACON_API __attribute__((visibility("default")))
#else
#define CHACON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chacon_status {
  CHACON_OK = 0,
  CHACON_ERR_DOMAIN = 1,        /* value outside [0,1) or not triadic */
  CHACON_ERR_INPUT = 2,         /* malformed argument or text */
  CHACON_ERR_REFINEMENT = 3,
  CHACON_ERR_DEPTH = 4,         /* evaluation of T needed too many stages */
  CHACON_ERR_RESOURCE = 5,      /* a resource cap was hit */
  CHACON_ERR_PRECONDITION = 6,  /* see chacon_last_witness() */
  CHACON_ERR_INTERNAL = 7
} chacon_status;

CHACON_API const char* chacon_version(void);
CHACON_API const char* chacon_last_error(void);
CHACON_API long long chacon_last_witness(void);
CHACON_API void chacon_string_free(char* s);

typedef struct chacon_caps {
  uint64_t max_l;
  int64_t max_n;
  uint64_t max_support;
} chacon_caps;

CHACON_API void chacon_caps_default(chacon_caps* caps);

/* ------------------------------------------------------------ rationals */

typedef struct chacon_rational chacon_rational;

CHACON_API chacon_status chacon_rational_parse(const char* text, chacon_rational** out);
CHACON_API chacon_status chacon_rational_str(const chacon_rational* r, char** out);
CHACON_API chacon_status chacon_rational_parts(const chacon_rational* r, char** num, char** den);
/* Rounded to `digits` significant digits, e.g. 12. */
CHACON_API chacon_status chacon_rational_decimal(const chacon_rational* r, int digits, char** out);
CHACON_API int chacon_rational_sign(const chacon_rational* r);
CHACON_API void chacon_rational_free(chacon_rational* r);

/* ------------------------------------------------------------- the map */

/* x as "p/3^m", "p/q", or "0.ddd" (ternary). `power` may be negative. */
CHACON_API chacon_status chacon_apply_t(const char* x, long long power, char** out);
CHACON_API chacon_status chacon_locate(const char* x, unsigned k, char** out);
CHACON_API chacon_status chacon_tower_height(unsigned k, char** out);

/* ------------------------------------------------- return distributions */

typedef struct chacon_distribution chacon_distribution;

CHACON_API chacon_status chacon_dl(unsigned k, uint64_t l, const chacon_caps* caps, chacon_distribution** out);
/* Same quantity from the brute-force oracle (depth = initial prefix length). */
CHACON_API chacon_status chacon_dl_brute(unsigned k, uint64_t l, unsigned depth, chacon_distribution** out);
CHACON_API int64_t chacon_distribution_start(const chacon_distribution* d);
CHACON_API size_t chacon_distribution_size(const chacon_distribution* d);
CHACON_API chacon_status chacon_distribution_mass(const chacon_distribution* d, size_t i, chacon_rational** out);
CHACON_API void chacon_distribution_free(chacon_distribution* d);

CHACON_API chacon_status chacon_bl(uint64_t l, uint64_t* out);
CHACON_API chacon_status chacon_support(unsigned k, uint64_t l, int64_t* s, int64_t* t);
/* P_n as an index range; *lo > *hi when empty. */
CHACON_API chacon_status chacon_find_pn(unsigned k, int64_t n, const chacon_caps* caps, uint64_t* lo, uint64_t* hi);

/* ---------------------------------------------------------- correlation */

CHACON_API chacon_status chacon_mu(unsigned k, chacon_rational** out);
CHACON_API chacon_status chacon_autocorrelation(unsigned k, int64_t n, const chacon_caps* caps, chacon_rational** out);
/* A and B as unions of stage-k cells T^m A_k, given by their levels m. */
CHACON_API chacon_status chacon_cell_correlation(unsigned k, const int64_t* a, size_t na, const int64_t* b, size_t nb,
                                                 int64_t n, const chacon_caps* caps, chacon_rational** out);
CHACON_API chacon_status chacon_cesaro(unsigned k, int64_t N, const chacon_caps* caps, chacon_rational** out);
CHACON_API chacon_status chacon_cell_cesaro(unsigned k, const int64_t* a, size_t na, const int64_t* b, size_t nb,
                                            int64_t N, const chacon_caps* caps, chacon_rational** out);

/* ------------------------------------------------------ integer sets */

typedef struct chacon_intset chacon_intset;

/* h_spec: "linear", "log", "loglog", "power:<a>", "table:<path>" */
CHACON_API chacon_status chacon_build_jk(unsigned k, const char* h_spec, unsigned n_max, chacon_intset** out);
CHACON_API chacon_status chacon_build_j(unsigned k_max, const char* h_spec, unsigned n_max, chacon_intset** out);
CHACON_API chacon_status chacon_enumerate_ek(unsigned k, uint64_t l_max, chacon_intset** out);
CHACON_API size_t chacon_intset_interval_count(const chacon_intset* s);
CHACON_API chacon_status chacon_intset_interval(const chacon_intset* s, size_t i, int64_t* lo, int64_t* hi);
CHACON_API int chacon_intset_contains(const chacon_intset* s, int64_t n);
/* |S & [0, n]| */
CHACON_API uint64_t chacon_intset_count(const chacon_intset* s, int64_t n);
/* The set is exact on [0, window]. */
CHACON_API int64_t chacon_intset_window(const chacon_intset* s);
CHACON_API size_t chacon_intset_note_count(const chacon_intset* s);
CHACON_API const char* chacon_intset_note(const chacon_intset* s, size_t i);
CHACON_API void chacon_intset_free(chacon_intset* s);

/* Count report as JSON {spec, grid: [{n, count, bound, pass}], constants,
 * window}. form: "upper", "upper-h", "lower", "power-rate", "log-rate",
 * "binomial-log3". A negative C selects the frozen C*. *pass is 1 when every
 * grid point passes. */
CHACON_API chacon_status chacon_count_report(const chacon_intset* s, const char* form, double C, double param,
                                             const char* h_spec, const int64_t* grid, size_t grid_len, char** json,
                                             int* pass);

/* CSV: N,block_lo,block_hi,max_dev_num,max_dev_den,excluded_count */
CHACON_API chacon_status chacon_convergence_csv(unsigned k, const char* h_spec, unsigned n_lo, unsigned n_hi,
                                                const chacon_caps* caps, char** csv);

/* ---------------------------------------------------------- extractor */

typedef struct chacon_extraction chacon_extraction;

/* Sequences on [0, len) as rational text. b or c may be NULL: b defaults to
 * the running Cesaro average of a, c to 1/log(n+2). */
CHACON_API chacon_status chacon_extract(const char* const* a, const char* const* b, const char* const* c, size_t len,
                                        chacon_extraction** out);
CHACON_API chacon_status chacon_extraction_set(const chacon_extraction* e, chacon_intset** out);
CHACON_API size_t chacon_extraction_threshold_count(const chacon_extraction* e);
CHACON_API int64_t chacon_extraction_threshold(const chacon_extraction* e, size_t i);
CHACON_API int chacon_extraction_certified(const chacon_extraction* e);
CHACON_API const char* chacon_extraction_stop_reason(const chacon_extraction* e);
/* Re-checks the contract exactly; *violation = -1 when it holds. */
CHACON_API chacon_status chacon_extraction_check(const chacon_extraction* e, int64_t* violation);
CHACON_API void chacon_extraction_free(chacon_extraction* e);

/* -------------------------------------------------------- verification */

/* Suite names, comma separated. */
CHACON_API const char* chacon_verify_suites(void);
CHACON_API chacon_status chacon_verify(const char* suite, uint64_t seed, char** json, int* pass);

#ifdef __cplusplus
}
#endif

#endif /* CHACON_CHACON_H_ */
