#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace mix::msp {

// Basis of the affine space spanned by the sample means: raw difference
// vectors, their orthonormalized span (truncated by singular value), and the
// affine anchor. A rank of 0 is a valid flagged state (all means coincide);
// project() refuses to use it.
struct ProjectionBasis {
    std::size_t ambient_dim = 0;
    std::vector<Point> raw_vectors;         // v_j = mean_j - mean_{j+1}
    std::vector<Point> orthonormal_basis;   // effective_rank vectors, unit, pairwise orthogonal
    std::vector<double> singular_values;    // all m-1 values, non-increasing
    std::vector<double> residual_norms;     // per raw vector, mass outside the retained span
    Point anchor;                           // last sample mean, affine origin
    std::size_t effective_rank = 0;

    bool rank_zero() const { return effective_rank == 0; }

    std::string to_json() const;
    static ProjectionBasis from_json(const std::string& text);
};

// Per-sample means; element j is weighted_mean(*samples[j]).
std::vector<Point> estimate_means(const std::vector<const Dataset*>& samples);

ProjectionBasis build_basis(const std::vector<Point>& means, double rank_tol = 1e-6,
                            std::optional<std::size_t> max_rank = std::nullopt);

// Coordinates of (x - anchor) in the orthonormal basis; output dimension is
// the effective rank. Weights, labels and sample_id carry over.
Dataset project(const ProjectionBasis& basis, const Dataset& d);
Point project_point(const ProjectionBasis& basis, std::span<const double> x);

// Maps basis coordinates back to the ambient space: anchor + sum(y_k b_k).
Point reconstruct_point(const ProjectionBasis& basis, std::span<const double> projected);

struct MSPBoundParams {
    double sigma_max_sq = 1.0;              // maximal per-direction component variance
    double coeff_bound = 1.0;               // A = max_i sum_j |alpha_j^i|
    std::size_t dims = 1;                   // ambient dimension n
    std::vector<std::uint64_t> sample_sizes; // N_1 .. N_M
};

struct MSPBounds {
    double mean_deviation;       // P[sup_j ||E_j - est_j|| > eps] bound
    double distance_distortion;  // P[max distortion of projected mean distances > eps] bound
};

// Failure-probability bounds, clipped to [0, 1]:
//   mean_deviation      = n * sigma_max^2 / eps^2 * sum_j 1/N_j
//   distance_distortion = 4 * n * sigma_max^2 * A^2 / eps^2 * sum_j 1/N_j
MSPBounds msp_bound(const MSPBoundParams& params, double epsilon);

} // namespace mix::msp
