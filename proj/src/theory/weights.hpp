#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/dataset.hpp"
#include "core/mixture.hpp"
#include "core/rng.hpp"

namespace mix::theory {

struct L1OptimalSet {
    std::vector<std::size_t> indices; // A* = { i : phi1[i] > phi2[i] }, 0-based
    double value = 0.0;               // sum_i max(phi1[i] - phi2[i], 0)
};

// The L1-attaining union of components and its value (closed form).
L1OptimalSet l1_optimal_set(const std::vector<double>& phi1, const std::vector<double>& phi2);

struct GapReport {
    double gap = 0.0;
    std::vector<std::size_t> witness_subset; // attaining I, 0-based, |I| > 1
    std::size_t witness_index = 0;           // attaining i within I
    double bounded_b = 0.0;                  // min entry over both weight vectors
    double recommended_tau = 0.0;            // gap / 8

    std::string to_json() const;
};

// Exhaustive minimum of |phi1_i / phi1(I) - phi2_i / phi2(I)| over subsets I
// with |I| > 1 and i in I. Exact mode only; refuses K > 20 (2^K blowup).
GapReport compute_gap(const std::vector<double>& phi1, const std::vector<double>& phi2);

struct Theorem2Constants {
    double epsilon_cap = 0.0; // min(g^2 b/160K, bg/8K, g^2 b/(4K(K+3)), eps* g/4K)
    double gamma_k = 0.0;     // 4 eps K / g at the chosen eps
    double delta = 0.0;       // delta* / 4K
    double sample_size = 0.0; // max(4 N1 / b, (2/b^2) ln(1/delta))
};

// Advisory sample-size calculator; N1 is the oracle's own sample requirement,
// supplied by the caller.
Theorem2Constants theorem2_constants(double g, double b, unsigned k, double eps_star,
                                     double delta_star, std::uint64_t oracle_n1);

// Draws two labeled 1-D samples from a disjoint-interval mixture spec:
// component by categorical draw on the mixture's weight row, position uniform
// within the component interval.
std::pair<Dataset, Dataset> discrete_dsc_simulate(const MixtureSpec& spec, std::size_t n1,
                                                  std::size_t n2, const RngHandle& rng);

} // namespace mix::theory
