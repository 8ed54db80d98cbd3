#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"
#include "dsc/clustering_tree.hpp"

namespace mix::bench {

enum class Algorithm { kmeans, random_proj, pca_proj, msp, dsc };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

// Synthetic benchmark: K Gaussian components at base_centers with
// signal_sigma in the signal dimensions, plus noise_dims appended dimensions
// of N(0, noise_sigma^2). Two samples per trial, mixing weights drawn by
// normalizing uniforms.
struct ExperimentConfig {
    std::vector<Point> base_centers = {{0.0, 0.0}, {3.0, 0.0}, {-3.0, 3.0}};
    std::size_t noise_dims = 0;
    double noise_sigma = 1.0;
    double signal_sigma = 1.0; // 0 is a test seam: points land exactly on the centers
    std::size_t points_per_sample = 80;
    std::size_t num_trials = 100;
    std::vector<Algorithm> algorithms = {Algorithm::kmeans, Algorithm::random_proj,
                                         Algorithm::pca_proj, Algorithm::msp, Algorithm::dsc};
    std::size_t projection_target_dim = 1;
    std::uint64_t seed = 0;

    double tau = 0.1;
    std::size_t min_points_per_side = 20;
    std::optional<int> max_splits;          // default: 4K
    oracle::TrainingConfig oracle_config;
    std::size_t kmeans_restarts = 10;
    std::size_t kmeans_max_iter = 100;

    std::size_t num_components() const { return base_centers.size(); }
    std::size_t signal_dims() const { return base_centers.empty() ? 0 : base_centers.front().size(); }
    std::size_t total_dims() const { return signal_dims() + noise_dims; }
    dsc::DSCConfig dsc_config() const;

    void validate() const;
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

struct TrialData {
    Dataset s1;
    Dataset s2;
    std::vector<double> phi1;
    std::vector<double> phi2;
};

// Labeled pair of samples for one trial; driven entirely by per-trial rng
// streams so any trial is reproducible in isolation and appending noise
// dimensions never disturbs the signal coordinates.
TrialData generate_trial(const ExperimentConfig& cfg, std::uint64_t trial);

struct TrialResult {
    std::uint64_t trial = 0;
    std::uint64_t stream = 0; // rng stream record (equals trial)
    std::vector<double> phi1;
    std::vector<double> phi2;
    double gap = 0.0; // realized gap of the sampled weight pair
    std::vector<std::pair<Algorithm, double>> accuracy; // config order
};

struct PairwiseStats {
    Algorithm a = Algorithm::kmeans;
    Algorithm b = Algorithm::kmeans;
    std::uint64_t wins_a = 0;
    std::uint64_t wins_b = 0;
    std::uint64_t ties = 0;
    double p_value_a_beats_b = 1.0; // exact sign test, ties excluded
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    std::vector<std::pair<Algorithm, double>> mean_accuracy;
    std::vector<PairwiseStats> pairwise;
};

TrialResult run_single_trial(const ExperimentConfig& cfg, std::uint64_t trial);
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

// Renderings used by the CLI; both are deterministic byte-for-byte given the
// same config and seed.
std::string results_csv(const ExperimentResult& result);
std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

} // namespace mix::bench
