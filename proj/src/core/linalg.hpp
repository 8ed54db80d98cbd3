#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mix {

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

// Eigen-decomposition of a dense symmetric matrix (row-major, n x n) via
// cyclic Jacobi rotations. Pairs are returned sorted by descending eigenvalue;
// vectors[i] is the unit eigenvector for values[i]. Intended for the small
// matrices this project produces (Gram/covariance of at most a few hundred).
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n);

} // namespace mix
