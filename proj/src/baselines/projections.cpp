#include "baselines/projections.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/linalg.hpp"

namespace mix::baselines {

Dataset apply_projection_matrix(const Dataset& d, const std::vector<Point>& rows) {
    if (rows.empty()) throw Error(ErrorCode::invalid_argument, "projection matrix has no rows");
    for (const auto& r : rows)
        if (r.size() != d.dim())
            throw Error(ErrorCode::dimension_mismatch, "projection matrix row dimension mismatch");
    Dataset out(rows.size(), d.sample_id());
    out.reserve(d.size());
    Point y(rows.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = d.point(i);
        for (std::size_t j = 0; j < rows.size(); ++j) y[j] = dot(rows[j], p);
        out.add_point(y, d.weight(i));
    }
    if (d.has_labels()) out.set_labels(d.labels());
    return out;
}

Dataset random_projection(const Dataset& d, std::size_t target_dim, const RngHandle& rng) {
    if (target_dim < 1 || target_dim > d.dim())
        throw Error(ErrorCode::invalid_argument, "random_projection: target_dim out of range");
    Rng stream(rng);
    const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
    std::vector<Point> rows(target_dim, Point(d.dim()));
    for (auto& row : rows)
        for (double& v : row) v = scale * stream.normal();
    return apply_projection_matrix(d, rows);
}

PCAProjection pca_projection(const Dataset& d, std::size_t target_dim) {
    if (d.empty()) throw Error(ErrorCode::empty_input, "pca_projection: empty dataset");
    const std::size_t n = d.dim();
    const std::size_t count = d.size();
    if (target_dim < 1 || target_dim > n)
        throw Error(ErrorCode::invalid_argument, "pca_projection: target_dim out of range");

    const Point mean = weighted_mean(d);
    const double total = d.total_weight();

    std::vector<double> eigenvalues;
    std::vector<Point> directions; // candidate principal directions, descending eigenvalue

    if (n <= count) {
        // n x n weighted covariance
        std::vector<double> cov(n * n, 0.0);
        Point centered(n);
        for (std::size_t i = 0; i < count; ++i) {
            const auto p = d.point(i);
            const double w = d.weight(i) / total;
            for (std::size_t a = 0; a < n; ++a) centered[a] = p[a] - mean[a];
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b) cov[a * n + b] += w * centered[a] * centered[b];
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < a; ++b) cov[a * n + b] = cov[b * n + a];
        SymmetricEigen eig = symmetric_eigen(std::move(cov), n);
        eigenvalues = std::move(eig.values);
        directions = std::move(eig.vectors);
    } else {
        // Gram route: B has rows sqrt(w_i / W) (x_i - mean); eigenvectors of
        // B B^T map to principal directions B^T y / ||B^T y||.
        std::vector<double> b(count * n);
        for (std::size_t i = 0; i < count; ++i) {
            const auto p = d.point(i);
            const double s = std::sqrt(d.weight(i) / total);
            for (std::size_t a = 0; a < n; ++a) b[i * n + a] = s * (p[a] - mean[a]);
        }
        std::vector<double> gram(count * count);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = i; j < count; ++j) {
                double s = 0.0;
                for (std::size_t a = 0; a < n; ++a) s += b[i * n + a] * b[j * n + a];
                gram[i * count + j] = gram[j * count + i] = s;
            }
        SymmetricEigen eig = symmetric_eigen(std::move(gram), count);
        eigenvalues = eig.values;
        directions.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            Point v(n, 0.0);
            for (std::size_t i = 0; i < count; ++i) {
                const double c = eig.vectors[k][i];
                for (std::size_t a = 0; a < n; ++a) v[a] += c * b[i * n + a];
            }
            const double len = norm(v);
            if (len > 0.0)
                for (double& x : v) x /= len;
            directions.push_back(std::move(v));
        }
    }

    // numerical rank relative to the leading eigenvalue
    const double lead = eigenvalues.empty() ? 0.0 : std::max(eigenvalues.front(), 0.0);
    std::size_t rank = 0;
    while (rank < eigenvalues.size() && eigenvalues[rank] > lead * 1e-12 && eigenvalues[rank] > 0.0)
        ++rank;
    if (rank == 0)
        throw Error(ErrorCode::numeric, "pca_projection: data has zero variance");

    const std::size_t rank_used = std::min(target_dim, rank);

    std::vector<Point> components(directions.begin(),
                                  directions.begin() + static_cast<std::ptrdiff_t>(rank_used));
    // sign convention: first coordinate of non-negligible magnitude is positive
    for (auto& v : components) {
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, std::abs(x));
        for (double x : v) {
            if (std::abs(x) > 1e-12 * peak) {
                if (x < 0.0)
                    for (double& y : v) y = -y;
                break;
            }
        }
    }

    Dataset out(rank_used, d.sample_id());
    out.reserve(count);
    Point y(rank_used), centered(n);
    for (std::size_t i = 0; i < count; ++i) {
        const auto p = d.point(i);
        for (std::size_t a = 0; a < n; ++a) centered[a] = p[a] - mean[a];
        for (std::size_t k = 0; k < rank_used; ++k) y[k] = dot(components[k], centered);
        out.add_point(y, d.weight(i));
    }
    if (d.has_labels()) out.set_labels(d.labels());

    return PCAProjection{std::move(out), rank_used, target_dim > rank, std::move(eigenvalues),
                         std::move(components)};
}

} // namespace mix::baselines
