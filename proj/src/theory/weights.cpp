#include "theory/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "json.hpp"

namespace mix::theory {

L1OptimalSet l1_optimal_set(const std::vector<double>& phi1, const std::vector<double>& phi2) {
    if (phi1.size() != phi2.size())
        throw Error(ErrorCode::invalid_argument, "l1_optimal_set: weight vector lengths differ");
    const std::vector<double> p1 = normalize_weight_vector(phi1);
    const std::vector<double> p2 = normalize_weight_vector(phi2);
    L1OptimalSet out;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        if (p1[i] > p2[i]) {
            out.indices.push_back(i);
            out.value += p1[i] - p2[i];
        }
    }
    return out;
}

GapReport compute_gap(const std::vector<double>& phi1, const std::vector<double>& phi2) {
    if (phi1.size() != phi2.size())
        throw Error(ErrorCode::invalid_argument, "compute_gap: weight vector lengths differ");
    const std::size_t k = phi1.size();
    if (k < 2) throw Error(ErrorCode::invalid_argument, "compute_gap: needs K >= 2");
    if (k > 20)
        throw Error(ErrorCode::unsupported,
                    "compute_gap: exact subset enumeration is limited to K <= 20; "
                    "sample subsets externally for larger K");
    const std::vector<double> p1 = normalize_weight_vector(phi1);
    const std::vector<double> p2 = normalize_weight_vector(phi2);

    GapReport report;
    report.gap = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        if (std::popcount(mask) < 2) continue;
        double sum1 = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                sum1 += p1[i];
                sum2 += p2[i];
            }
        }
        if (sum1 <= 0.0 || sum2 <= 0.0) continue; // conditional weights undefined
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (1u << i))) continue;
            const double diff = std::abs(p1[i] / sum1 - p2[i] / sum2);
            if (diff < report.gap) {
                report.gap = diff;
                report.witness_index = i;
                report.witness_subset.clear();
                for (std::size_t j = 0; j < k; ++j)
                    if (mask & (1u << j)) report.witness_subset.push_back(j);
            }
        }
    }
    if (!std::isfinite(report.gap)) report.gap = 0.0;

    report.bounded_b = 1.0;
    for (double w : p1) report.bounded_b = std::min(report.bounded_b, w);
    for (double w : p2) report.bounded_b = std::min(report.bounded_b, w);
    report.recommended_tau = report.gap / 8.0;
    return report;
}

std::string GapReport::to_json() const {
    nlohmann::ordered_json j;
    j["gap"] = gap;
    j["witness_subset"] = witness_subset;
    j["witness_index"] = witness_index;
    j["bounded_b"] = bounded_b;
    j["recommended_tau"] = recommended_tau;
    return j.dump(2);
}

Theorem2Constants theorem2_constants(double g, double b, unsigned k, double eps_star,
                                     double delta_star, std::uint64_t oracle_n1) {
    if (!(g > 0.0 && g < 1.0) || !(b > 0.0 && b < 1.0) || !(eps_star > 0.0 && eps_star < 1.0) ||
        !(delta_star > 0.0 && delta_star < 1.0) || k == 0 || oracle_n1 == 0)
        throw Error(ErrorCode::invalid_argument, "theorem2_constants: parameters out of range");

    const double kk = static_cast<double>(k);
    Theorem2Constants out;
    out.epsilon_cap = std::min({g * g * b / (160.0 * kk),
                                b * g / (8.0 * kk),
                                g * g * b / (4.0 * kk * (kk + 3.0)),
                                eps_star * g / (4.0 * kk)});
    out.gamma_k = 4.0 * out.epsilon_cap * kk / g;
    out.delta = delta_star / (4.0 * kk);
    out.sample_size = std::max(4.0 * static_cast<double>(oracle_n1) / b,
                               (2.0 / (b * b)) * std::log(1.0 / out.delta));
    return out;
}

std::pair<Dataset, Dataset> discrete_dsc_simulate(const MixtureSpec& spec, std::size_t n1,
                                                  std::size_t n2, const RngHandle& rng) {
    if (spec.num_mixtures() < 2)
        throw Error(ErrorCode::invalid_argument, "discrete_dsc_simulate: needs two weight rows");
    if (!spec.has_components())
        throw Error(ErrorCode::invalid_argument, "discrete_dsc_simulate: spec has no components");
    if (n1 == 0 || n2 == 0)
        throw Error(ErrorCode::invalid_argument, "discrete_dsc_simulate: sample sizes must be >= 1");

    std::vector<IntervalComponent> intervals;
    intervals.reserve(spec.num_components());
    for (const auto& c : spec.components()) {
        const auto* interval = std::get_if<IntervalComponent>(&c);
        if (!interval)
            throw Error(ErrorCode::invalid_argument,
                        "discrete_dsc_simulate: components must be 1-D intervals");
        if (!(interval->lo < interval->hi))
            throw Error(ErrorCode::invalid_argument, "discrete_dsc_simulate: empty interval");
        intervals.push_back(*interval);
    }
    // disjoint supports: sort by left endpoint, reject positive-measure overlap
    std::vector<std::size_t> order(intervals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return intervals[a].lo < intervals[b].lo; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (intervals[order[i]].lo < intervals[order[i - 1]].hi)
            throw Error(ErrorCode::invalid_argument,
                        "discrete_dsc_simulate: component intervals overlap");
    }

    auto draw_sample = [&](std::size_t mixture, std::size_t count, const RngHandle& handle,
                           const std::string& id) {
        Rng stream(handle);
        const auto& phi = spec.weights(mixture);
        Dataset d(1, id);
        d.reserve(count);
        std::vector<int> labels;
        labels.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t comp = stream.categorical(phi);
            const double x = stream.uniform(intervals[comp].lo, intervals[comp].hi);
            d.add_point(std::span<const double>(&x, 1));
            labels.push_back(static_cast<int>(comp));
        }
        d.set_labels(std::move(labels));
        return d;
    };

    return {draw_sample(0, n1, rng.split(0), "S1"), draw_sample(1, n2, rng.split(1), "S2")};
}

} // namespace mix::theory
