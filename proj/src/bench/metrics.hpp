#pragma once

#include <cstdint>
#include <vector>

namespace mix::bench {

// Best total over injective maps from rows (clusters) to columns (components)
// of a non-negative score matrix; rows left unmapped contribute nothing.
// Exhaustive bitmask DP when max(rows, cols) <= 8, Hungarian assignment
// otherwise.
double best_assignment_score(const std::vector<std::vector<double>>& score);

// Fraction of points whose cluster maps to their true component under the
// best injective cluster-to-component assignment. Cluster count may differ
// from k (extra clusters count as errors).
double accuracy_best_assignment(const std::vector<int>& predicted, const std::vector<int>& truth,
                                std::size_t k);

// Exact one-sided binomial tail P[X >= wins], X ~ Bin(trials, 1/2), summed in
// log space. trials counts non-tied comparisons.
double sign_test_pvalue(std::uint64_t wins, std::uint64_t trials);

} // namespace mix::bench
