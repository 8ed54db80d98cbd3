#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"
#include "oracle/tree_learner.hpp"

namespace mix::dsc {

enum class StopReason { estimator, min_points, max_depth };

const char* stop_reason_name(StopReason r);

struct DSCConfig {
    double tau = 0.1;                      // stop when e >= 1/2 - tau
    std::size_t min_points_per_side = 20;  // from each sample, on each side of a split
    int max_splits = 32;                   // depth bound on any root-to-leaf path
    oracle::TrainingConfig oracle_config;
};

// Binary tree of classifiers; leaves are clusters. Internal nodes keep the
// accepted classifier and its error estimate, leaves record which stopping
// rule fired and how many points of each sample they retained.
class ClusteringTree {
public:
    struct Node {
        bool is_leaf = true;
        // leaf fields
        int leaf_id = -1;
        std::size_t n1 = 0;
        std::size_t n2 = 0;
        StopReason stop = StopReason::estimator;
        // internal fields
        double error_estimate = 0.0;
        std::optional<oracle::TrainedClassifier> classifier;
        int neg_child = -1;
        int pos_child = -1;
    };

    ClusteringTree(std::vector<Node> nodes, std::size_t dim, std::size_t num_leaves);

    std::size_t dim() const { return dim_; }
    std::size_t num_leaves() const { return num_leaves_; }
    const std::vector<Node>& nodes() const { return nodes_; }

    // Deterministic routing: h(x) >= 0 goes to the positive child.
    int assign(std::span<const double> x) const;
    std::vector<int> assign(const Dataset& d) const;

    std::string to_json() const;
    static ClusteringTree from_json(const std::string& text);

private:
    std::vector<Node> nodes_;
    std::size_t dim_ = 0;
    std::size_t num_leaves_ = 0;
};

// Algorithm: train the oracle with w1 = 1, w2 = |S1|/|S2| recomputed from the
// points reaching each node; stop when e >= 1/2 - tau, when a proposed split
// would starve a side of either sample, or at the depth bound.
ClusteringTree build_tree(const Dataset& s1, const Dataset& s2, const DSCConfig& cfg,
                          const RngHandle& rng);

struct ComponentReport {
    int component_label = 0;
    int leaf = -1;          // best qualifying leaf, or the best-capture leaf if none qualifies
    double captured = 0.0;  // fraction of this component's weight in that leaf
    double max_other = 0.0; // largest fraction any other component puts in that leaf
    bool ok = false;
};

struct EpsilonClusterReport {
    bool ok = false;
    std::vector<ComponentReport> components;
};

// Empirical epsilon-clustering check: every component needs a leaf capturing
// >= 1-eps of its (weighted) points while every other component puts < eps
// of its points there.
EpsilonClusterReport epsilon_clusters(const ClusteringTree& tree, const Dataset& labeled,
                                      double epsilon);

} // namespace mix::dsc
