#include "dsc/clustering_tree.hpp"

#include <algorithm>
#include <map>

#include "core/error.hpp"
#include "json.hpp"

namespace mix::dsc {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::estimator: return "estimator";
        case StopReason::min_points: return "min_points";
        case StopReason::max_depth: return "max_depth";
    }
    return "unknown";
}

namespace {

StopReason stop_reason_from_name(const std::string& s) {
    if (s == "estimator") return StopReason::estimator;
    if (s == "min_points") return StopReason::min_points;
    if (s == "max_depth") return StopReason::max_depth;
    throw Error(ErrorCode::parse, "unknown stop reason: " + s);
}

} // namespace

ClusteringTree::ClusteringTree(std::vector<Node> nodes, std::size_t dim, std::size_t num_leaves)
    : nodes_(std::move(nodes)), dim_(dim), num_leaves_(num_leaves) {
    if (nodes_.empty()) throw Error(ErrorCode::invalid_argument, "clustering tree needs a root");
}

int ClusteringTree::assign(std::span<const double> x) const {
    if (x.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "assign: point dimension mismatch");
    int i = 0;
    while (!nodes_[static_cast<std::size_t>(i)].is_leaf) {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        i = (n.classifier->predict(x) >= 0) ? n.pos_child : n.neg_child;
    }
    return nodes_[static_cast<std::size_t>(i)].leaf_id;
}

std::vector<int> ClusteringTree::assign(const Dataset& d) const {
    std::vector<int> out;
    out.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out.push_back(assign(d.point(i)));
    return out;
}

namespace {

Dataset subset(const Dataset& d, const std::vector<std::uint32_t>& idx) {
    Dataset out(d.dim(), d.sample_id());
    out.reserve(idx.size());
    for (std::uint32_t i : idx) out.add_point(d.point(i), d.weight(i));
    return out;
}

struct TreeBuilder {
    const Dataset& s1;
    const Dataset& s2;
    const DSCConfig& cfg;
    std::vector<ClusteringTree::Node> nodes;
    int next_leaf_id = 0;

    int make_leaf(std::size_t n1, std::size_t n2, StopReason reason) {
        ClusteringTree::Node leaf;
        leaf.is_leaf = true;
        leaf.leaf_id = next_leaf_id++;
        leaf.n1 = n1;
        leaf.n2 = n2;
        leaf.stop = reason;
        nodes.push_back(std::move(leaf));
        return static_cast<int>(nodes.size()) - 1;
    }

    int build(const std::vector<std::uint32_t>& idx1, const std::vector<std::uint32_t>& idx2,
              int depth, const RngHandle& rng) {
        if (depth >= cfg.max_splits) return make_leaf(idx1.size(), idx2.size(), StopReason::max_depth);

        const Dataset sub1 = subset(s1, idx1);
        const Dataset sub2 = subset(s2, idx2);
        const double w2 = static_cast<double>(idx1.size()) / static_cast<double>(idx2.size());
        oracle::OracleOutput out =
            oracle::train(sub1, sub2, 1.0, w2, cfg.oracle_config, rng.split(0));

        if (out.error_estimate >= 0.5 - cfg.tau)
            return make_leaf(idx1.size(), idx2.size(), StopReason::estimator);

        std::vector<std::uint32_t> neg1, pos1, neg2, pos2;
        for (std::uint32_t i : idx1) {
            (out.classifier.predict(s1.point(i)) >= 0 ? pos1 : neg1).push_back(i);
        }
        for (std::uint32_t i : idx2) {
            (out.classifier.predict(s2.point(i)) >= 0 ? pos2 : neg2).push_back(i);
        }
        const std::size_t m = cfg.min_points_per_side;
        if (neg1.size() < m || pos1.size() < m || neg2.size() < m || pos2.size() < m)
            return make_leaf(idx1.size(), idx2.size(), StopReason::min_points);

        const int self = static_cast<int>(nodes.size());
        ClusteringTree::Node node;
        node.is_leaf = false;
        node.error_estimate = out.error_estimate;
        node.classifier = std::move(out.classifier);
        nodes.push_back(std::move(node));

        const int neg_child = build(neg1, neg2, depth + 1, rng.split(1));
        const int pos_child = build(pos1, pos2, depth + 1, rng.split(2));
        nodes[static_cast<std::size_t>(self)].neg_child = neg_child;
        nodes[static_cast<std::size_t>(self)].pos_child = pos_child;
        return self;
    }
};

} // namespace

ClusteringTree build_tree(const Dataset& s1, const Dataset& s2, const DSCConfig& cfg,
                          const RngHandle& rng) {
    if (s1.empty() || s2.empty())
        throw Error(ErrorCode::empty_input, "build_tree: both samples must be non-empty");
    if (s1.dim() != s2.dim())
        throw Error(ErrorCode::dimension_mismatch, "build_tree: sample dimensions differ");
    if (!s1.all_finite() || !s2.all_finite())
        throw Error(ErrorCode::invalid_argument, "build_tree: non-finite coordinates");
    if (!(cfg.tau > 0.0 && cfg.tau < 0.5))
        throw Error(ErrorCode::invalid_argument, "build_tree: tau must lie in (0, 1/2)");
    if (cfg.min_points_per_side < 1)
        throw Error(ErrorCode::invalid_argument, "build_tree: min_points_per_side must be >= 1");
    if (cfg.max_splits < 0)
        throw Error(ErrorCode::invalid_argument, "build_tree: max_splits must be >= 0");

    std::vector<std::uint32_t> idx1(s1.size()), idx2(s2.size());
    for (std::size_t i = 0; i < idx1.size(); ++i) idx1[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < idx2.size(); ++i) idx2[i] = static_cast<std::uint32_t>(i);

    TreeBuilder builder{s1, s2, cfg, {}, 0};
    builder.build(idx1, idx2, 0, rng);
    return ClusteringTree(std::move(builder.nodes), s1.dim(),
                          static_cast<std::size_t>(builder.next_leaf_id));
}

EpsilonClusterReport epsilon_clusters(const ClusteringTree& tree, const Dataset& labeled,
                                      double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error(ErrorCode::invalid_argument, "epsilon_clusters: epsilon must lie in (0,1)");
    if (!labeled.has_labels())
        throw Error(ErrorCode::invalid_argument, "epsilon_clusters: dataset has no labels");

    const std::vector<int> leaves = tree.assign(labeled);
    const std::vector<int>& labels = labeled.labels();

    // weighted mass of each component per leaf
    std::map<int, std::vector<double>> mass;    // label -> per-leaf weight
    std::map<int, double> total;                // label -> total weight
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        auto& row = mass[labels[i]];
        row.resize(tree.num_leaves(), 0.0);
        row[static_cast<std::size_t>(leaves[i])] += labeled.weight(i);
        total[labels[i]] += labeled.weight(i);
    }

    EpsilonClusterReport report;
    report.ok = true;
    for (auto& [label, row] : mass) {
        row.resize(tree.num_leaves(), 0.0);
        ComponentReport comp;
        comp.component_label = label;
        ComponentReport best_capture = comp;
        bool found = false;
        for (std::size_t leaf = 0; leaf < tree.num_leaves(); ++leaf) {
            const double captured = total[label] > 0.0 ? row[leaf] / total[label] : 0.0;
            double max_other = 0.0;
            for (const auto& [other, orow] : mass) {
                if (other == label || total[other] <= 0.0) continue;
                max_other = std::max(max_other,
                                     orow.size() > leaf ? orow[leaf] / total[other] : 0.0);
            }
            const bool qualifies = captured >= 1.0 - epsilon && max_other < epsilon;
            if (qualifies && (!found || captured > comp.captured)) {
                found = true;
                comp.leaf = static_cast<int>(leaf);
                comp.captured = captured;
                comp.max_other = max_other;
                comp.ok = true;
            }
            if (captured > best_capture.captured) {
                best_capture.leaf = static_cast<int>(leaf);
                best_capture.captured = captured;
                best_capture.max_other = max_other;
            }
        }
        if (!found) {
            comp = best_capture;
            comp.ok = false;
            report.ok = false;
        }
        report.components.push_back(comp);
    }
    return report;
}

namespace {

nlohmann::ordered_json tree_node_to_json(const std::vector<ClusteringTree::Node>& nodes, int i) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    nlohmann::ordered_json j;
    if (n.is_leaf) {
        j["type"] = "leaf";
        j["leaf_id"] = n.leaf_id;
        j["n1"] = n.n1;
        j["n2"] = n.n2;
        j["stop_reason"] = stop_reason_name(n.stop);
    } else {
        j["type"] = "internal";
        j["error_estimate"] = n.error_estimate;
        j["classifier"] = nlohmann::ordered_json::parse(n.classifier->to_json());
        j["neg"] = tree_node_to_json(nodes, n.neg_child);
        j["pos"] = tree_node_to_json(nodes, n.pos_child);
    }
    return j;
}

int tree_node_from_json(const nlohmann::json& j, std::vector<ClusteringTree::Node>& nodes,
                        int& leaf_count) {
    const int self = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (j.at("type").get<std::string>() == "leaf") {
        auto& n = nodes[static_cast<std::size_t>(self)];
        n.is_leaf = true;
        n.leaf_id = j.at("leaf_id").get<int>();
        n.n1 = j.at("n1").get<std::size_t>();
        n.n2 = j.at("n2").get<std::size_t>();
        n.stop = stop_reason_from_name(j.at("stop_reason").get<std::string>());
        leaf_count = std::max(leaf_count, n.leaf_id + 1);
    } else {
        nodes[static_cast<std::size_t>(self)].is_leaf = false;
        nodes[static_cast<std::size_t>(self)].error_estimate = j.at("error_estimate").get<double>();
        nodes[static_cast<std::size_t>(self)].classifier =
            oracle::TrainedClassifier::from_json(j.at("classifier").dump());
        const int neg = tree_node_from_json(j.at("neg"), nodes, leaf_count);
        const int pos = tree_node_from_json(j.at("pos"), nodes, leaf_count);
        nodes[static_cast<std::size_t>(self)].neg_child = neg;
        nodes[static_cast<std::size_t>(self)].pos_child = pos;
    }
    return self;
}

} // namespace

std::string ClusteringTree::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim_;
    j["num_leaves"] = num_leaves_;
    j["root"] = tree_node_to_json(nodes_, 0);
    return j.dump(2);
}

ClusteringTree ClusteringTree::from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        std::vector<Node> nodes;
        int leaf_count = 0;
        tree_node_from_json(j.at("root"), nodes, leaf_count);
        return ClusteringTree(std::move(nodes), j.at("dim").get<std::size_t>(),
                              static_cast<std::size_t>(leaf_count));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad clustering tree JSON: ") + e.what());
    }
}

} // namespace mix::dsc
