#include "bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "core/error.hpp"

namespace mix::bench {

namespace {

// rows <= cols <= 8: DP over column bitmask, rows processed in order, each
// row either skipped or matched to an unused column.
double exhaustive_best(const std::vector<std::vector<double>>& score) {
    const std::size_t rows = score.size();
    const std::size_t cols = score.front().size();
    std::vector<double> dp(1u << cols, -1.0);
    dp[0] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> next = dp; // row r skipped
        for (std::uint32_t mask = 0; mask < (1u << cols); ++mask) {
            if (dp[mask] < 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) {
                if (mask & (1u << c)) continue;
                const std::uint32_t m2 = mask | (1u << c);
                next[m2] = std::max(next[m2], dp[mask] + score[r][c]);
            }
        }
        dp = std::move(next);
    }
    return *std::max_element(dp.begin(), dp.end());
}

// O(s^3) Hungarian (shortest augmenting path with potentials) on a square
// cost matrix, minimizing. 1-indexed internals per the classic formulation.
double hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
    return total;
}

} // namespace

double best_assignment_score(const std::vector<std::vector<double>>& score) {
    if (score.empty() || score.front().empty())
        throw Error(ErrorCode::invalid_argument, "best_assignment_score: empty matrix");
    const std::size_t rows = score.size();
    const std::size_t cols = score.front().size();
    for (const auto& row : score)
        if (row.size() != cols)
            throw Error(ErrorCode::invalid_argument, "best_assignment_score: ragged matrix");

    if (std::max(rows, cols) <= 8) {
        if (rows <= cols) return exhaustive_best(score);
        // transpose so rows <= cols; injective maps are symmetric in value
        std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) t[c][r] = score[r][c];
        return exhaustive_best(t);
    }

    // pad to square, convert to min-cost
    const std::size_t s = std::max(rows, cols);
    double peak = 0.0;
    for (const auto& row : score)
        for (double x : row) peak = std::max(peak, x);
    std::vector<std::vector<double>> cost(s, std::vector<double>(s, peak));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) cost[r][c] = peak - score[r][c];
    const double min_cost = hungarian_min_cost(cost);
    return peak * static_cast<double>(s) - min_cost;
}

double accuracy_best_assignment(const std::vector<int>& predicted, const std::vector<int>& truth,
                                std::size_t k) {
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::invalid_argument,
                    "accuracy_best_assignment: prediction/truth lengths differ");
    if (predicted.empty())
        throw Error(ErrorCode::empty_input, "accuracy_best_assignment: no points");

    std::map<int, std::size_t> cluster_ids, component_ids;
    for (int c : predicted) cluster_ids.emplace(c, 0);
    for (int t : truth) component_ids.emplace(t, 0);
    {
        std::size_t next = 0;
        for (auto& [key, id] : cluster_ids) id = next++;
        next = 0;
        for (auto& [key, id] : component_ids) id = next++;
    }
    const std::size_t rows = cluster_ids.size();
    const std::size_t cols = std::max(component_ids.size(), k);

    std::vector<std::vector<double>> confusion(rows, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < predicted.size(); ++i)
        confusion[cluster_ids[predicted[i]]][component_ids[truth[i]]] += 1.0;

    return best_assignment_score(confusion) / static_cast<double>(predicted.size());
}

double sign_test_pvalue(std::uint64_t wins, std::uint64_t trials) {
    if (wins > trials)
        throw Error(ErrorCode::invalid_argument, "sign_test_pvalue: wins exceeds trials");
    if (trials == 0) return 1.0;
    const double n = static_cast<double>(trials);
    // log of sum_{j >= wins} C(n, j), streamed via logaddexp
    double acc = -std::numeric_limits<double>::infinity();
    for (std::uint64_t j = wins; j <= trials; ++j) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(j) + 1.0) -
                          std::lgamma(n - static_cast<double>(j) + 1.0);
        if (lc > acc) {
            acc = lc + std::log1p(std::exp(acc - lc));
        } else {
            acc = acc + std::log1p(std::exp(lc - acc));
        }
    }
    const double log_p = acc - n * std::numbers::ln2;
    return std::min(std::exp(log_p), 1.0);
}

} // namespace mix::bench
