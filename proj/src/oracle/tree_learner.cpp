#include "oracle/tree_learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "core/error.hpp"
#include "json.hpp"

namespace mix::oracle {

TrainedClassifier::TrainedClassifier(std::vector<Node> nodes, std::size_t dim, TrainingConfig cfg)
    : nodes_(std::move(nodes)), dim_(dim), cfg_(cfg) {
    if (nodes_.empty()) throw Error(ErrorCode::invalid_argument, "classifier needs at least one node");
}

int TrainedClassifier::predict(std::span<const double> x) const {
    if (x.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "predict: point dimension mismatch");
    int i = 0;
    while (nodes_[i].feature >= 0) {
        const Node& n = nodes_[i];
        i = (x[static_cast<std::size_t>(n.feature)] <= n.threshold) ? n.left : n.right;
    }
    return nodes_[i].label;
}

int TrainedClassifier::depth() const {
    // iterative depth over the flat node array
    std::vector<int> depth_of(nodes_.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.feature >= 0) {
            depth_of[static_cast<std::size_t>(n.left)] = depth_of[i] + 1;
            depth_of[static_cast<std::size_t>(n.right)] = depth_of[i] + 1;
        } else {
            best = std::max(best, depth_of[i]);
        }
    }
    return best;
}

namespace {

// one merged training view over both samples
struct Merged {
    const Dataset* data[2];
    std::vector<std::uint32_t> sample_of;  // 0 or 1
    std::vector<std::uint32_t> local_of;   // index within its dataset
    std::vector<double> weight;            // dataset weight * w_j
    std::vector<int> label;                // +1 for s1, -1 for s2

    std::size_t size() const { return sample_of.size(); }
    double coord(std::size_t i, std::size_t feature) const {
        return data[sample_of[i]]->point(local_of[i])[feature];
    }
};

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = 0.0; // weighted gini sum of the two children
};

double gini_sum(double wpos, double wneg) {
    const double total = wpos + wneg;
    if (total <= 0.0) return 0.0;
    return total - (wpos * wpos + wneg * wneg) / total; // total * gini impurity
}

struct Builder {
    const Merged& merged;
    TrainingConfig cfg;
    double min_child_weight = 0.0;
    std::vector<TrainedClassifier::Node> nodes;
    std::size_t dim;
    // scratch reused across nodes
    std::vector<std::uint32_t> order;

    SplitChoice best_split(const std::vector<std::uint32_t>& idx, double wpos, double wneg) {
        SplitChoice best;
        const double node_score = gini_sum(wpos, wneg);
        for (std::size_t f = 0; f < dim; ++f) {
            order.assign(idx.begin(), idx.end());
            std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                const double va = merged.coord(a, f);
                const double vb = merged.coord(b, f);
                if (va != vb) return va < vb;
                return a < b;
            });
            double lpos = 0.0, lneg = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const std::uint32_t id = order[i];
                if (merged.label[id] > 0)
                    lpos += merged.weight[id];
                else
                    lneg += merged.weight[id];
                const double v = merged.coord(id, f);
                const double vnext = merged.coord(order[i + 1], f);
                if (v == vnext) continue;
                const double lw = lpos + lneg;
                const double rw = (wpos - lpos) + (wneg - lneg);
                if (lw < min_child_weight || rw < min_child_weight) continue;
                const double score = gini_sum(lpos, lneg) + gini_sum(wpos - lpos, wneg - lneg);
                if (score < node_score - 1e-12 && (!best.found || score < best.score - 1e-12)) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = v + 0.5 * (vnext - v);
                    best.score = score;
                }
            }
        }
        return best;
    }

    int grow(std::vector<std::uint32_t>& idx, int depth) {
        double wpos = 0.0, wneg = 0.0;
        for (std::uint32_t id : idx) {
            if (merged.label[id] > 0)
                wpos += merged.weight[id];
            else
                wneg += merged.weight[id];
        }
        const int majority = (wpos >= wneg) ? 1 : -1;

        if (depth >= cfg.max_depth || wpos <= 0.0 || wneg <= 0.0 || idx.size() < 2) {
            nodes.push_back({-1, 0.0, majority, -1, -1});
            return static_cast<int>(nodes.size()) - 1;
        }
        const SplitChoice split = best_split(idx, wpos, wneg);
        if (!split.found) {
            nodes.push_back({-1, 0.0, majority, -1, -1});
            return static_cast<int>(nodes.size()) - 1;
        }

        std::vector<std::uint32_t> left_idx, right_idx;
        left_idx.reserve(idx.size());
        right_idx.reserve(idx.size());
        for (std::uint32_t id : idx) {
            if (merged.coord(id, split.feature) <= split.threshold)
                left_idx.push_back(id);
            else
                right_idx.push_back(id);
        }
        idx.clear();
        idx.shrink_to_fit();

        const int self = static_cast<int>(nodes.size());
        nodes.push_back({static_cast<int>(split.feature), split.threshold, 0, -1, -1});
        nodes[static_cast<std::size_t>(self)].left = grow(left_idx, depth + 1);
        nodes[static_cast<std::size_t>(self)].right = grow(right_idx, depth + 1);
        return self;
    }
};

std::uint64_t content_key(std::span<const double> coords, double weight) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mixin = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h ^= bits;
        h *= 0x100000001b3ULL;
    };
    for (double c : coords) mixin(c);
    mixin(weight);
    return h;
}

// Per-sample holdout: order points by a key derived from the rng and the
// point contents alone (not the argument position), take the first k.
std::vector<bool> holdout_mask(const Dataset& d, double fraction, std::uint64_t rng_key) {
    const std::size_t n = d.size();
    std::vector<bool> mask(n, false);
    if (fraction <= 0.0 || n < 2) return mask;
    std::size_t k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (k >= n) k = n - 1;
    if (k == 0) return mask;

    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i)
        keyed[i] = {mix64(content_key(d.point(i), d.weight(i)) ^ rng_key),
                    static_cast<std::uint32_t>(i)};
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < k; ++i) mask[keyed[i].second] = true;
    return mask;
}

// error rate of the classifier on the masked subset of one sample,
// weighted by the dataset weights; returns {error_weight, total_weight}
std::pair<double, double> side_error(const TrainedClassifier& h, const Dataset& d,
                                     const std::vector<bool>& mask, bool use_masked,
                                     int expected_label) {
    double wrong = 0.0, total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (mask[i] != use_masked) continue;
        const double w = d.weight(i);
        total += w;
        if (h.predict(d.point(i)) != expected_label) wrong += w;
    }
    return {wrong, total};
}

} // namespace

OracleOutput train(const Dataset& s1, const Dataset& s2, double w1, double w2,
                   const TrainingConfig& cfg, const RngHandle& rng) {
    if (s1.empty() || s2.empty())
        throw Error(ErrorCode::empty_input, "oracle train: both samples must be non-empty");
    if (s1.dim() != s2.dim())
        throw Error(ErrorCode::dimension_mismatch, "oracle train: sample dimensions differ");
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw Error(ErrorCode::invalid_argument, "oracle train: sample weights must be positive");
    if (s1.total_weight() <= 0.0 || s2.total_weight() <= 0.0)
        throw Error(ErrorCode::invalid_argument, "oracle train: a sample has zero total weight");
    if (!(cfg.holdout_fraction >= 0.0 && cfg.holdout_fraction < 1.0))
        throw Error(ErrorCode::invalid_argument, "oracle train: holdout_fraction must lie in [0,1)");
    if (cfg.max_depth < 0 || cfg.min_leaf_weight < 0.0)
        throw Error(ErrorCode::invalid_argument, "oracle train: bad tree limits");

    const std::uint64_t key = rng.key();
    const std::vector<bool> mask1 = holdout_mask(s1, cfg.holdout_fraction, key);
    const std::vector<bool> mask2 = holdout_mask(s2, cfg.holdout_fraction, key);

    Merged merged{{&s1, &s2}, {}, {}, {}, {}};
    const Dataset* sets[2] = {&s1, &s2};
    const double scale[2] = {w1, w2};
    const std::vector<bool>* masks[2] = {&mask1, &mask2};
    std::vector<std::uint32_t> train_idx;
    for (int j = 0; j < 2; ++j) {
        const Dataset& d = *sets[j];
        for (std::size_t i = 0; i < d.size(); ++i) {
            if ((*masks[j])[i]) continue; // holdout
            if (d.weight(i) <= 0.0) continue;
            merged.sample_of.push_back(static_cast<std::uint32_t>(j));
            merged.local_of.push_back(static_cast<std::uint32_t>(i));
            merged.weight.push_back(d.weight(i) * scale[j]);
            merged.label.push_back(j == 0 ? 1 : -1);
            train_idx.push_back(static_cast<std::uint32_t>(merged.size() - 1));
        }
    }
    if (train_idx.empty())
        throw Error(ErrorCode::invalid_argument, "oracle train: no training points left");

    const double total_train_weight = std::accumulate(merged.weight.begin(), merged.weight.end(), 0.0);

    Builder builder{merged, cfg, cfg.min_leaf_weight * total_train_weight, {}, s1.dim(), {}};
    builder.grow(train_idx, 0);
    TrainedClassifier h(std::move(builder.nodes), s1.dim(), cfg);

    // Balanced holdout error: each sample contributes total weight 1/2. A
    // side whose holdout is empty falls back to its training error rate.
    double e = 0.0;
    const int expected[2] = {1, -1};
    for (int j = 0; j < 2; ++j) {
        auto [wrong, total] = side_error(h, *sets[j], *masks[j], true, expected[j]);
        if (total <= 0.0) {
            std::tie(wrong, total) = side_error(h, *sets[j], *masks[j], false, expected[j]);
        }
        e += 0.5 * (total > 0.0 ? wrong / total : 0.0);
    }
    e = std::clamp(e, 0.0, 1.0);
    return OracleOutput{std::move(h), e};
}

namespace {

nlohmann::ordered_json node_to_json(const std::vector<TrainedClassifier::Node>& nodes, int i) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    nlohmann::ordered_json j;
    if (n.feature < 0) {
        j["label"] = n.label;
    } else {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["left"] = node_to_json(nodes, n.left);
        j["right"] = node_to_json(nodes, n.right);
    }
    return j;
}

int node_from_json(const nlohmann::json& j, std::vector<TrainedClassifier::Node>& nodes) {
    const int self = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (j.contains("label")) {
        nodes[static_cast<std::size_t>(self)].label = j.at("label").get<int>();
        nodes[static_cast<std::size_t>(self)].feature = -1;
    } else {
        nodes[static_cast<std::size_t>(self)].feature = j.at("feature").get<int>();
        nodes[static_cast<std::size_t>(self)].threshold = j.at("threshold").get<double>();
        const int left = node_from_json(j.at("left"), nodes);
        const int right = node_from_json(j.at("right"), nodes);
        nodes[static_cast<std::size_t>(self)].left = left;
        nodes[static_cast<std::size_t>(self)].right = right;
    }
    return self;
}

} // namespace

std::string TrainedClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim_;
    j["max_depth"] = cfg_.max_depth;
    j["min_leaf_weight"] = cfg_.min_leaf_weight;
    j["holdout_fraction"] = cfg_.holdout_fraction;
    j["tree"] = node_to_json(nodes_, 0);
    return j.dump(2);
}

TrainedClassifier TrainedClassifier::from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        TrainingConfig cfg;
        cfg.max_depth = j.at("max_depth").get<int>();
        cfg.min_leaf_weight = j.at("min_leaf_weight").get<double>();
        cfg.holdout_fraction = j.at("holdout_fraction").get<double>();
        std::vector<Node> nodes;
        node_from_json(j.at("tree"), nodes);
        return TrainedClassifier(std::move(nodes), j.at("dim").get<std::size_t>(), cfg);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad classifier JSON: ") + e.what());
    }
}

} // namespace mix::oracle
