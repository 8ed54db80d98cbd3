#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace mix::oracle {

struct TrainingConfig {
    int max_depth = 6;
    double min_leaf_weight = 0.01;  // fraction of total training weight
    double holdout_fraction = 0.3;  // per-sample stratified holdout for the error estimate
};

// Axis-aligned decision tree with {-1,+1} leaves, grown by weighted Gini.
class TrainedClassifier {
public:
    struct Node {
        int feature = -1;      // -1 for leaves
        double threshold = 0.0; // x[feature] <= threshold goes left
        int label = 0;          // leaf label, +1 or -1
        int left = -1;
        int right = -1;
    };

    TrainedClassifier() = default;
    TrainedClassifier(std::vector<Node> nodes, std::size_t dim, TrainingConfig cfg);

    int predict(std::span<const double> x) const;

    std::size_t dim() const { return dim_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const TrainingConfig& config() const { return cfg_; }
    int depth() const;

    std::string to_json() const;
    static TrainedClassifier from_json(const std::string& text);

private:
    std::vector<Node> nodes_;
    std::size_t dim_ = 0;
    TrainingConfig cfg_;
};

struct OracleOutput {
    TrainedClassifier classifier;
    double error_estimate = 0.0; // in [0,1], balanced between the two samples
};

// The binary learning oracle: labels s1 as +1 and s2 as -1, trains on a
// per-sample weighting of dataset weight x w_j, and estimates the error on a
// stratified holdout under balanced-mixture weighting (each sample
// contributes total weight 1/2). Holdout membership is keyed off the point
// contents and the rng, so swapping the two samples mirrors the split.
OracleOutput train(const Dataset& s1, const Dataset& s2, double w1, double w2,
                   const TrainingConfig& cfg, const RngHandle& rng);

} // namespace mix::oracle
