/*
 * mixlearn — learning mixture models from multiple samples.
 *
 * C interface over the core library: opaque handles, status-code returns,
 * and a thread-local error message. All heap-allocated outputs are returned
 * through out-parameters and released with the matching *_free function;
 * strings returned through char** are released with mix_string_free.
 */
#ifndef MIXLEARN_H
#define MIXLEARN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MIXLEARN_API __declspec(dllexport)
#else
#define MIXLEARN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mix_status {
    MIX_OK = 0,
    MIX_ERR_INVALID_ARGUMENT = 1,
    MIX_ERR_DIMENSION_MISMATCH = 2,
    MIX_ERR_EMPTY_INPUT = 3,
    MIX_ERR_PARSE = 4,
    MIX_ERR_IO = 5,
    MIX_ERR_NUMERIC = 6,
    MIX_ERR_UNSUPPORTED = 7,
    MIX_ERR_INTERNAL = 8
} mix_status;

typedef struct mix_dataset mix_dataset;
typedef struct mix_basis mix_basis;
typedef struct mix_tree mix_tree;

MIXLEARN_API const char* mix_version(void);
MIXLEARN_API const char* mix_status_name(mix_status status);

/* Message for the most recent failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread. */
MIXLEARN_API const char* mix_last_error(void);

MIXLEARN_API void mix_string_free(char* s);

/* ---- datasets ------------------------------------------------------- */

/* points: num_points x dim, row major; unit weights. */
MIXLEARN_API mix_status mix_dataset_create(const double* points, size_t num_points, size_t dim,
                                           const char* sample_id, mix_dataset** out);

/* CSV with one row per point and an optional single header line; a sidecar
 * <path with .json extension> supplies sample_id and labels when present. */
MIXLEARN_API mix_status mix_dataset_load_csv(const char* path, const char* sample_id,
                                             mix_dataset** out);
MIXLEARN_API mix_status mix_dataset_save_csv(const mix_dataset* d, const char* path);

MIXLEARN_API size_t mix_dataset_size(const mix_dataset* d);
MIXLEARN_API size_t mix_dataset_dim(const mix_dataset* d);
MIXLEARN_API mix_status mix_dataset_point(const mix_dataset* d, size_t index, double* coords_out);
MIXLEARN_API mix_status mix_dataset_set_weights(mix_dataset* d, const double* weights, size_t n);
MIXLEARN_API mix_status mix_dataset_set_labels(mix_dataset* d, const int* labels, size_t n);
MIXLEARN_API int mix_dataset_has_labels(const mix_dataset* d);
MIXLEARN_API mix_status mix_dataset_labels(const mix_dataset* d, int* labels_out);
MIXLEARN_API mix_status mix_dataset_weighted_mean(const mix_dataset* d, double* mean_out);
MIXLEARN_API mix_status mix_dataset_concat(const mix_dataset* a, const mix_dataset* b,
                                           mix_dataset** out);
MIXLEARN_API void mix_dataset_free(mix_dataset* d);

/* ---- multi-sample projection ---------------------------------------- */

/* Basis of the affine span of the per-sample means. rank_tol in (0,1);
 * max_rank < 0 means unlimited. */
MIXLEARN_API mix_status mix_basis_build(const mix_dataset* const* samples, size_t num_samples,
                                        double rank_tol, int max_rank, mix_basis** out);
MIXLEARN_API int mix_basis_rank(const mix_basis* b);
MIXLEARN_API size_t mix_basis_ambient_dim(const mix_basis* b);
MIXLEARN_API mix_status mix_basis_project(const mix_basis* b, const mix_dataset* d,
                                          mix_dataset** out);
MIXLEARN_API mix_status mix_basis_to_json(const mix_basis* b, char** json_out);
MIXLEARN_API mix_status mix_basis_from_json(const char* json, mix_basis** out);
MIXLEARN_API void mix_basis_free(mix_basis* b);

/* Failure-probability bounds for the projection, clipped to [0,1]. */
MIXLEARN_API mix_status mix_msp_bound(double sigma_max_sq, double coeff_bound, size_t dims,
                                      const uint64_t* sample_sizes, size_t num_samples,
                                      double epsilon, double* mean_deviation_out,
                                      double* distance_distortion_out);

/* ---- double-sample clustering --------------------------------------- */

/* config_json accepts {"tau", "min_points_per_side", "max_splits",
 * "oracle": {"max_depth", "min_leaf_weight", "holdout_fraction"}}; missing
 * fields take the documented defaults. NULL or "" uses all defaults. */
MIXLEARN_API mix_status mix_tree_build(const mix_dataset* s1, const mix_dataset* s2,
                                       const char* config_json, uint64_t seed, uint64_t stream,
                                       mix_tree** out);
MIXLEARN_API mix_status mix_tree_assign(const mix_tree* t, const double* coords, size_t dim,
                                        int* leaf_out);
MIXLEARN_API mix_status mix_tree_assign_dataset(const mix_tree* t, const mix_dataset* d,
                                                int* leaves_out);
MIXLEARN_API int mix_tree_num_leaves(const mix_tree* t);
MIXLEARN_API mix_status mix_tree_to_json(const mix_tree* t, char** json_out);
MIXLEARN_API mix_status mix_tree_from_json(const char* json, mix_tree** out);
MIXLEARN_API void mix_tree_free(mix_tree* t);

/* ---- baselines ------------------------------------------------------- */

/* assignments_out (size n), centers_out (k*dim) and inertia_out may each be
 * NULL when the caller does not need them. */
MIXLEARN_API mix_status mix_kmeans(const mix_dataset* d, size_t k, size_t restarts,
                                   size_t max_iter, uint64_t seed, uint64_t stream,
                                   int* assignments_out, double* centers_out, double* inertia_out);
MIXLEARN_API mix_status mix_random_projection(const mix_dataset* d, size_t target_dim,
                                              uint64_t seed, uint64_t stream, mix_dataset** out);
/* rank_truncated_out may be NULL; set to 1 when target_dim exceeded the data
 * rank and fewer dimensions were returned. */
MIXLEARN_API mix_status mix_pca_projection(const mix_dataset* d, size_t target_dim,
                                           mix_dataset** out, int* rank_truncated_out);

/* ---- theory ----------------------------------------------------------- */

/* in_set_out (size k, 0/1 flags) may be NULL. */
MIXLEARN_API mix_status mix_l1_optimal_set(const double* phi1, const double* phi2, size_t k,
                                           int* in_set_out, double* value_out);
MIXLEARN_API mix_status mix_gap_report_json(const double* phi1, const double* phi2, size_t k,
                                            char** json_out);
MIXLEARN_API mix_status mix_theorem2_constants(double g, double b, unsigned k, double eps_star,
                                               double delta_star, uint64_t oracle_n1,
                                               double* epsilon_cap_out, double* gamma_k_out,
                                               double* delta_out, double* sample_size_out);

/* ---- benchmark harness ------------------------------------------------ */

/* config_json is the experiment configuration (see README); outputs are the
 * per-trial CSV and the summary JSON. threads == 0 picks the hardware
 * concurrency; results are identical for any thread count. */
MIXLEARN_API mix_status mix_experiment_run(const char* config_json, unsigned threads,
                                           char** csv_out, char** summary_json_out);

/* Generates the two labeled samples of one trial. */
MIXLEARN_API mix_status mix_trial_generate(const char* config_json, uint64_t trial,
                                           mix_dataset** s1_out, mix_dataset** s2_out);

MIXLEARN_API mix_status mix_accuracy_best_assignment(const int* predicted, const int* truth,
                                                     size_t n, unsigned k, double* accuracy_out);
MIXLEARN_API mix_status mix_sign_test_pvalue(uint64_t wins, uint64_t trials, double* p_out);

#ifdef __cplusplus
}
#endif

#endif /* MIXLEARN_H */
