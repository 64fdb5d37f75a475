#ifndef LEAKLAB_LEAKLAB_H
#define LEAKLAB_LEAKLAB_H

/* C interface to leaklab. Every function returns an ll_status; on failure
 * ll_last_error() holds a one-line message for the calling thread. Handles
 * are opaque and must be released with the matching destroy function. */

#include <stddef.h>
#include <stdint.h>

#if defined(LEAKLAB_BUILDING_LIBRARY)
#define LL_API __attribute__((visibility("default")))
#else
#define LL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LL_OK = 0,
  LL_INVALID_ARGUMENT = 1,
  LL_WIDTH_MISMATCH = 2,
  LL_OUT_OF_RANGE = 3,
  LL_UNKNOWN_KEY = 4,
  LL_BUDGET_EXCEEDED = 5,
  LL_PRECONDITION = 6,
  LL_UNSUPPORTED = 7,
  LL_PARSE = 8,
  LL_INTERNAL = 99
} ll_status;

typedef enum { LL_FLOORLOG = 0, LL_EXACT = 1, LL_ORDERONLY = 2 } ll_distance_kind;

/* Comparisons are -1, 0 or 1. */
typedef struct {
  int8_t c01;
  int8_t c12;
  int8_t c02;
  uint8_t closeness_bit;
} ll_leak_output;

typedef struct {
  uint64_t hi;
  uint64_t lo;
} ll_params;

typedef struct {
  uint64_t nonce_hi;
  uint64_t nonce_lo;
  ll_params params;
} ll_ciphertext;

typedef struct ll_oracle ll_oracle;
typedef struct ll_report ll_report;

LL_API const char* ll_version(void);
LL_API const char* ll_last_error(void);

/* Leakage. */
LL_API ll_status ll_distance(ll_distance_kind kind, uint64_t a, uint64_t b,
                             int64_t* out);
LL_API ll_status ll_leak(ll_distance_kind kind, uint64_t x0, uint64_t x1,
                         uint64_t x2, ll_leak_output* out);
/* exhaustive != 0 ignores samples and seed. counterexample is written only
 * when *holds == 0. */
LL_API ll_status ll_check_bisection(ll_distance_kind kind, int d,
                                    int exhaustive, uint64_t samples,
                                    uint64_t seed, int* holds,
                                    uint64_t counterexample[3],
                                    uint64_t* triples_checked);

/* Ideal FRE oracle. dec and eval report a malformed input through *ok = 0
 * with status LL_OK. */
LL_API ll_status ll_oracle_create(uint64_t salt, ll_oracle** out);
LL_API void ll_oracle_destroy(ll_oracle* oracle);
LL_API ll_status ll_oracle_gen(ll_oracle* oracle, int d, ll_distance_kind kind,
                               uint64_t seed, uint64_t* key_id,
                               ll_params* params);
LL_API ll_status ll_oracle_enc(ll_oracle* oracle, uint64_t key_id, uint64_t m,
                               ll_ciphertext* out);
LL_API ll_status ll_oracle_dec(const ll_oracle* oracle, uint64_t key_id,
                               const ll_ciphertext* c, uint64_t* m, int* ok);
LL_API ll_status ll_oracle_eval(const ll_oracle* oracle,
                                const ll_params* params,
                                const ll_ciphertext* c0,
                                const ll_ciphertext* c1,
                                const ll_ciphertext* c2, ll_leak_output* out,
                                int* ok);

/* Static-game validity of a challenge pair. d == 0 skips the range check.
 * On *valid == 0, triple holds the first violating 1-based (i, j, k), or
 * zeros for a length or range failure. */
LL_API ll_status ll_validate_submission(ll_distance_kind kind, int d,
                                        const uint64_t* left,
                                        const uint64_t* right, size_t length,
                                        int* valid, size_t triple[3]);

/* Differential privacy calculus. */
LL_API ll_status ll_dp_group(double epsilon, double delta, size_t k,
                             double* epsilon_out, double* delta_out);
LL_API ll_status ll_dp_compose(double epsilon1, double delta1, double epsilon2,
                               double delta2, double* epsilon_out,
                               double* delta_out);
LL_API ll_status ll_dp_subsample(double epsilon, double delta, size_t m,
                                 size_t n, double* epsilon_out,
                                 double* delta_out);

/* Experiments. config_json is a single JSON object. ll_config_check rejects
 * unknown keys and mistyped values without running anything. */
LL_API ll_status ll_config_check(const char* config_json);
LL_API ll_status ll_experiment_run(const char* config_json, ll_report** out);
LL_API void ll_report_destroy(ll_report* report);
/* Pretty-printed, newline-terminated. */
LL_API const char* ll_report_summary_json(const ll_report* report);
LL_API const char* ll_report_primary_csv(const ll_report* report);
LL_API int ll_report_violated(const ll_report* report);
LL_API size_t ll_report_artifact_count(const ll_report* report);
LL_API const char* ll_report_artifact_name(const ll_report* report,
                                           size_t index);
LL_API const char* ll_report_artifact_data(const ll_report* report,
                                           size_t index, size_t* length);

#ifdef __cplusplus
}
#endif

#endif /* LEAKLAB_LEAKLAB_H */
