#pragma once

#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace mix::baselines {

// Applies a fixed row matrix: output coordinate j is rows[j] . x. Exposed so
// tests can substitute a known matrix (e.g. the identity).
Dataset apply_projection_matrix(const Dataset& d, const std::vector<Point>& rows);

// Gaussian random projection: target_dim x n i.i.d. N(0,1) entries scaled by
// 1/sqrt(target_dim).
Dataset random_projection(const Dataset& d, std::size_t target_dim, const RngHandle& rng);

struct PCAProjection {
    Dataset data;
    std::size_t rank_used = 0;
    bool rank_truncated = false;        // requested dimension exceeded the data rank
    std::vector<double> eigenvalues;    // descending
    std::vector<Point> components;      // rank_used principal directions
};

// Centers the data (weighted) and projects onto the leading principal
// directions; eigenvectors are sign-fixed so their first non-negligible
// coordinate is positive. Uses the n x n covariance when n <= #points and
// the Gram matrix otherwise.
PCAProjection pca_projection(const Dataset& d, std::size_t target_dim);

} // namespace mix::baselines
