#include "mixlearn/mixlearn.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "baselines/kmeans.hpp"
#include "baselines/projections.hpp"
#include "bench/experiment.hpp"
#include "bench/metrics.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "dsc/clustering_tree.hpp"
#include "msp/projection.hpp"
#include "theory/weights.hpp"
#include "json.hpp"

struct mix_dataset {
    mix::Dataset impl;
};

struct mix_basis {
    mix::msp::ProjectionBasis impl;
};

struct mix_tree {
    mix::dsc::ClusteringTree impl;
};

namespace {

thread_local std::string g_last_error;

mix_status status_of(mix::ErrorCode code) {
    using mix::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return MIX_ERR_INVALID_ARGUMENT;
        case ErrorCode::dimension_mismatch: return MIX_ERR_DIMENSION_MISMATCH;
        case ErrorCode::empty_input: return MIX_ERR_EMPTY_INPUT;
        case ErrorCode::parse: return MIX_ERR_PARSE;
        case ErrorCode::io: return MIX_ERR_IO;
        case ErrorCode::numeric: return MIX_ERR_NUMERIC;
        case ErrorCode::unsupported: return MIX_ERR_UNSUPPORTED;
    }
    return MIX_ERR_INTERNAL;
}

mix_status fail(mix_status status, const char* message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
mix_status guarded(Fn&& fn) {
    try {
        fn();
        return MIX_OK;
    } catch (const mix::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MIX_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MIX_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

mix::dsc::DSCConfig dsc_config_from_json(const char* config_json) {
    mix::dsc::DSCConfig cfg;
    if (!config_json || !*config_json) return cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
        throw mix::Error(mix::ErrorCode::parse, std::string("bad tree config: ") + e.what());
    }
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("min_points_per_side"))
        cfg.min_points_per_side = j.at("min_points_per_side").get<std::size_t>();
    if (j.contains("max_splits")) cfg.max_splits = j.at("max_splits").get<int>();
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        if (o.contains("max_depth")) cfg.oracle_config.max_depth = o.at("max_depth").get<int>();
        if (o.contains("min_leaf_weight"))
            cfg.oracle_config.min_leaf_weight = o.at("min_leaf_weight").get<double>();
        if (o.contains("holdout_fraction"))
            cfg.oracle_config.holdout_fraction = o.at("holdout_fraction").get<double>();
    }
    return cfg;
}

} // namespace

extern "C" {

const char* mix_version(void) { return "0.1.0"; }

const char* mix_status_name(mix_status status) {
    switch (status) {
        case MIX_OK: return "ok";
        case MIX_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case MIX_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case MIX_ERR_EMPTY_INPUT: return "empty_input";
        case MIX_ERR_PARSE: return "parse";
        case MIX_ERR_IO: return "io";
        case MIX_ERR_NUMERIC: return "numeric";
        case MIX_ERR_UNSUPPORTED: return "unsupported";
        case MIX_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* mix_last_error(void) { return g_last_error.c_str(); }

void mix_string_free(char* s) { std::free(s); }

/* ---- datasets ------------------------------------------------------- */

mix_status mix_dataset_create(const double* points, size_t num_points, size_t dim,
                              const char* sample_id, mix_dataset** out) {
    if (!points || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        mix::Dataset d(dim, sample_id ? sample_id : "");
        d.reserve(num_points);
        for (size_t i = 0; i < num_points; ++i) {
            std::span<const double> coords(points + i * dim, dim);
            for (double c : coords)
                if (!std::isfinite(c))
                    throw mix::Error(mix::ErrorCode::invalid_argument,
                                     "points must have finite coordinates");
            d.add_point(coords);
        }
        if (d.empty())
            throw mix::Error(mix::ErrorCode::empty_input, "dataset needs at least one point");
        *out = new mix_dataset{std::move(d)};
    });
}

mix_status mix_dataset_load_csv(const char* path, const char* sample_id, mix_dataset** out) {
    if (!path || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new mix_dataset{mix::load_dataset(path, sample_id ? sample_id : "")};
    });
}

mix_status mix_dataset_save_csv(const mix_dataset* d, const char* path) {
    if (!d || !path) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { mix::save_dataset(d->impl, path); });
}

size_t mix_dataset_size(const mix_dataset* d) { return d ? d->impl.size() : 0; }

size_t mix_dataset_dim(const mix_dataset* d) { return d ? d->impl.dim() : 0; }

mix_status mix_dataset_point(const mix_dataset* d, size_t index, double* coords_out) {
    if (!d || !coords_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    if (index >= d->impl.size()) return fail(MIX_ERR_INVALID_ARGUMENT, "point index out of range");
    const auto p = d->impl.point(index);
    std::memcpy(coords_out, p.data(), p.size() * sizeof(double));
    return MIX_OK;
}

mix_status mix_dataset_set_weights(mix_dataset* d, const double* weights, size_t n) {
    if (!d || !weights) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { d->impl.set_weights(std::vector<double>(weights, weights + n)); });
}

mix_status mix_dataset_set_labels(mix_dataset* d, const int* labels, size_t n) {
    if (!d || !labels) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { d->impl.set_labels(std::vector<int>(labels, labels + n)); });
}

int mix_dataset_has_labels(const mix_dataset* d) { return d && d->impl.has_labels() ? 1 : 0; }

mix_status mix_dataset_labels(const mix_dataset* d, int* labels_out) {
    if (!d || !labels_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto& labels = d->impl.labels();
        std::memcpy(labels_out, labels.data(), labels.size() * sizeof(int));
    });
}

mix_status mix_dataset_weighted_mean(const mix_dataset* d, double* mean_out) {
    if (!d || !mean_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const mix::Point mean = mix::weighted_mean(d->impl);
        std::memcpy(mean_out, mean.data(), mean.size() * sizeof(double));
    });
}

mix_status mix_dataset_concat(const mix_dataset* a, const mix_dataset* b, mix_dataset** out) {
    if (!a || !b || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        if (a->impl.dim() != b->impl.dim())
            throw mix::Error(mix::ErrorCode::dimension_mismatch, "concat: dimensions differ");
        mix::Dataset d(a->impl.dim(), a->impl.sample_id());
        d.reserve(a->impl.size() + b->impl.size());
        for (size_t i = 0; i < a->impl.size(); ++i) d.add_point(a->impl.point(i), a->impl.weight(i));
        for (size_t i = 0; i < b->impl.size(); ++i) d.add_point(b->impl.point(i), b->impl.weight(i));
        if (a->impl.has_labels() && b->impl.has_labels()) {
            std::vector<int> labels = a->impl.labels();
            const auto& lb = b->impl.labels();
            labels.insert(labels.end(), lb.begin(), lb.end());
            d.set_labels(std::move(labels));
        }
        *out = new mix_dataset{std::move(d)};
    });
}

void mix_dataset_free(mix_dataset* d) { delete d; }

/* ---- multi-sample projection ---------------------------------------- */

mix_status mix_basis_build(const mix_dataset* const* samples, size_t num_samples, double rank_tol,
                           int max_rank, mix_basis** out) {
    if (!samples || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        std::vector<const mix::Dataset*> sets;
        sets.reserve(num_samples);
        for (size_t i = 0; i < num_samples; ++i) {
            if (!samples[i])
                throw mix::Error(mix::ErrorCode::invalid_argument, "null sample handle");
            sets.push_back(&samples[i]->impl);
        }
        const auto means = mix::msp::estimate_means(sets);
        std::optional<std::size_t> cap;
        if (max_rank >= 0) cap = static_cast<std::size_t>(max_rank);
        *out = new mix_basis{mix::msp::build_basis(means, rank_tol, cap)};
    });
}

int mix_basis_rank(const mix_basis* b) { return b ? static_cast<int>(b->impl.effective_rank) : -1; }

size_t mix_basis_ambient_dim(const mix_basis* b) { return b ? b->impl.ambient_dim : 0; }

mix_status mix_basis_project(const mix_basis* b, const mix_dataset* d, mix_dataset** out) {
    if (!b || !d || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new mix_dataset{mix::msp::project(b->impl, d->impl)}; });
}

mix_status mix_basis_to_json(const mix_basis* b, char** json_out) {
    if (!b || !json_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *json_out = dup_string(b->impl.to_json()); });
}

mix_status mix_basis_from_json(const char* json, mix_basis** out) {
    if (!json || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new mix_basis{mix::msp::ProjectionBasis::from_json(json)}; });
}

void mix_basis_free(mix_basis* b) { delete b; }

mix_status mix_msp_bound(double sigma_max_sq, double coeff_bound, size_t dims,
                         const uint64_t* sample_sizes, size_t num_samples, double epsilon,
                         double* mean_deviation_out, double* distance_distortion_out) {
    if (!sample_sizes || !mean_deviation_out || !distance_distortion_out)
        return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        mix::msp::MSPBoundParams params;
        params.sigma_max_sq = sigma_max_sq;
        params.coeff_bound = coeff_bound;
        params.dims = dims;
        params.sample_sizes.assign(sample_sizes, sample_sizes + num_samples);
        const auto bounds = mix::msp::msp_bound(params, epsilon);
        *mean_deviation_out = bounds.mean_deviation;
        *distance_distortion_out = bounds.distance_distortion;
    });
}

/* ---- double-sample clustering --------------------------------------- */

mix_status mix_tree_build(const mix_dataset* s1, const mix_dataset* s2, const char* config_json,
                          uint64_t seed, uint64_t stream, mix_tree** out) {
    if (!s1 || !s2 || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto cfg = dsc_config_from_json(config_json);
        *out = new mix_tree{
            mix::dsc::build_tree(s1->impl, s2->impl, cfg, mix::RngHandle{seed, stream})};
    });
}

mix_status mix_tree_assign(const mix_tree* t, const double* coords, size_t dim, int* leaf_out) {
    if (!t || !coords || !leaf_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *leaf_out = t->impl.assign(std::span<const double>(coords, dim)); });
}

mix_status mix_tree_assign_dataset(const mix_tree* t, const mix_dataset* d, int* leaves_out) {
    if (!t || !d || !leaves_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto leaves = t->impl.assign(d->impl);
        std::memcpy(leaves_out, leaves.data(), leaves.size() * sizeof(int));
    });
}

int mix_tree_num_leaves(const mix_tree* t) { return t ? static_cast<int>(t->impl.num_leaves()) : -1; }

mix_status mix_tree_to_json(const mix_tree* t, char** json_out) {
    if (!t || !json_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *json_out = dup_string(t->impl.to_json()); });
}

mix_status mix_tree_from_json(const char* json, mix_tree** out) {
    if (!json || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new mix_tree{mix::dsc::ClusteringTree::from_json(json)}; });
}

void mix_tree_free(mix_tree* t) { delete t; }

/* ---- baselines ------------------------------------------------------- */

mix_status mix_kmeans(const mix_dataset* d, size_t k, size_t restarts, size_t max_iter,
                      uint64_t seed, uint64_t stream, int* assignments_out, double* centers_out,
                      double* inertia_out) {
    if (!d) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto result =
            mix::baselines::kmeans(d->impl, k, restarts, max_iter, mix::RngHandle{seed, stream});
        if (assignments_out)
            std::memcpy(assignments_out, result.assignments.data(),
                        result.assignments.size() * sizeof(int));
        if (centers_out) {
            for (size_t c = 0; c < result.centers.size(); ++c)
                std::memcpy(centers_out + c * d->impl.dim(), result.centers[c].data(),
                            d->impl.dim() * sizeof(double));
        }
        if (inertia_out) *inertia_out = result.inertia;
    });
}

mix_status mix_random_projection(const mix_dataset* d, size_t target_dim, uint64_t seed,
                                 uint64_t stream, mix_dataset** out) {
    if (!d || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new mix_dataset{
            mix::baselines::random_projection(d->impl, target_dim, mix::RngHandle{seed, stream})};
    });
}

mix_status mix_pca_projection(const mix_dataset* d, size_t target_dim, mix_dataset** out,
                              int* rank_truncated_out) {
    if (!d || !out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        auto result = mix::baselines::pca_projection(d->impl, target_dim);
        if (rank_truncated_out) *rank_truncated_out = result.rank_truncated ? 1 : 0;
        *out = new mix_dataset{std::move(result.data)};
    });
}

/* ---- theory ----------------------------------------------------------- */

mix_status mix_l1_optimal_set(const double* phi1, const double* phi2, size_t k, int* in_set_out,
                              double* value_out) {
    if (!phi1 || !phi2 || !value_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto result = mix::theory::l1_optimal_set(std::vector<double>(phi1, phi1 + k),
                                                        std::vector<double>(phi2, phi2 + k));
        if (in_set_out) {
            for (size_t i = 0; i < k; ++i) in_set_out[i] = 0;
            for (size_t i : result.indices) in_set_out[i] = 1;
        }
        *value_out = result.value;
    });
}

mix_status mix_gap_report_json(const double* phi1, const double* phi2, size_t k, char** json_out) {
    if (!phi1 || !phi2 || !json_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto report = mix::theory::compute_gap(std::vector<double>(phi1, phi1 + k),
                                                     std::vector<double>(phi2, phi2 + k));
        *json_out = dup_string(report.to_json());
    });
}

mix_status mix_theorem2_constants(double g, double b, unsigned k, double eps_star,
                                  double delta_star, uint64_t oracle_n1, double* epsilon_cap_out,
                                  double* gamma_k_out, double* delta_out,
                                  double* sample_size_out) {
    if (!epsilon_cap_out || !gamma_k_out || !delta_out || !sample_size_out)
        return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto c = mix::theory::theorem2_constants(g, b, k, eps_star, delta_star, oracle_n1);
        *epsilon_cap_out = c.epsilon_cap;
        *gamma_k_out = c.gamma_k;
        *delta_out = c.delta;
        *sample_size_out = c.sample_size;
    });
}

/* ---- benchmark harness ------------------------------------------------ */

mix_status mix_experiment_run(const char* config_json, unsigned threads, char** csv_out,
                              char** summary_json_out) {
    if (!config_json || !csv_out || !summary_json_out)
        return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto cfg = mix::bench::ExperimentConfig::from_json(config_json);
        const auto result = mix::bench::run_experiment(cfg, threads);
        *csv_out = dup_string(mix::bench::results_csv(result));
        *summary_json_out = dup_string(mix::bench::summary_json(cfg, result));
    });
}

mix_status mix_trial_generate(const char* config_json, uint64_t trial, mix_dataset** s1_out,
                              mix_dataset** s2_out) {
    if (!config_json || !s1_out || !s2_out)
        return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto cfg = mix::bench::ExperimentConfig::from_json(config_json);
        auto data = mix::bench::generate_trial(cfg, trial);
        *s1_out = new mix_dataset{std::move(data.s1)};
        *s2_out = new mix_dataset{std::move(data.s2)};
    });
}

mix_status mix_accuracy_best_assignment(const int* predicted, const int* truth, size_t n,
                                        unsigned k, double* accuracy_out) {
    if (!predicted || !truth || !accuracy_out)
        return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *accuracy_out = mix::bench::accuracy_best_assignment(
            std::vector<int>(predicted, predicted + n), std::vector<int>(truth, truth + n), k);
    });
}

mix_status mix_sign_test_pvalue(uint64_t wins, uint64_t trials, double* p_out) {
    if (!p_out) return fail(MIX_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *p_out = mix::bench::sign_test_pvalue(wins, trials); });
}

} // extern "C"
