#include "msp/projection.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/linalg.hpp"
#include "json.hpp"

namespace mix::msp {

std::vector<Point> estimate_means(const std::vector<const Dataset*>& samples) {
    if (samples.size() < 2)
        throw Error(ErrorCode::invalid_argument, "estimate_means needs at least 2 samples");
    const std::size_t dim = samples.front()->dim();
    std::vector<Point> means;
    means.reserve(samples.size());
    for (const Dataset* s : samples) {
        if (!s) throw Error(ErrorCode::invalid_argument, "null sample");
        if (s->empty()) throw Error(ErrorCode::empty_input, "estimate_means: empty sample");
        if (s->dim() != dim)
            throw Error(ErrorCode::dimension_mismatch, "estimate_means: samples have mixed dimensions");
        means.push_back(weighted_mean(*s));
    }
    return means;
}

ProjectionBasis build_basis(const std::vector<Point>& means, double rank_tol,
                            std::optional<std::size_t> max_rank) {
    if (means.size() < 2)
        throw Error(ErrorCode::invalid_argument, "build_basis needs at least 2 means");
    if (!(rank_tol > 0.0 && rank_tol < 1.0))
        throw Error(ErrorCode::invalid_argument, "rank_tol must lie in (0,1)");
    const std::size_t dim = means.front().size();
    for (const auto& m : means)
        if (m.size() != dim)
            throw Error(ErrorCode::dimension_mismatch, "build_basis: means have mixed dimensions");

    ProjectionBasis basis;
    basis.ambient_dim = dim;
    basis.anchor = means.back();

    const std::size_t r = means.size() - 1;
    basis.raw_vectors.reserve(r);
    for (std::size_t j = 0; j < r; ++j) {
        Point v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = means[j][k] - means[j + 1][k];
        basis.raw_vectors.push_back(std::move(v));
    }

    // Singular spectrum of the stacked difference vectors via their Gram
    // matrix; r is small (m-1) while dim may be large.
    std::vector<double> gram(r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j)
            gram[i * r + j] = gram[j * r + i] = dot(basis.raw_vectors[i], basis.raw_vectors[j]);

    const SymmetricEigen eig = symmetric_eigen(std::move(gram), r);

    basis.singular_values.reserve(r);
    for (double lambda : eig.values)
        basis.singular_values.push_back(std::sqrt(std::max(lambda, 0.0)));

    const double sigma1 = basis.singular_values.empty() ? 0.0 : basis.singular_values.front();
    std::size_t rank = 0;
    if (sigma1 > 0.0) {
        while (rank < r && basis.singular_values[rank] > rank_tol * sigma1) ++rank;
    }
    if (max_rank && rank > *max_rank) rank = *max_rank;

    basis.effective_rank = rank;
    basis.orthonormal_basis.reserve(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        Point b(dim, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            const double coeff = eig.vectors[k][i];
            const auto& raw = basis.raw_vectors[i];
            for (std::size_t c = 0; c < dim; ++c) b[c] += coeff * raw[c];
        }
        // Gram-Schmidt polish against the previously accepted directions.
        for (std::size_t prev = 0; prev < basis.orthonormal_basis.size(); ++prev) {
            const double proj = dot(b, basis.orthonormal_basis[prev]);
            for (std::size_t c = 0; c < dim; ++c) b[c] -= proj * basis.orthonormal_basis[prev][c];
        }
        const double len = norm(b);
        if (len <= 0.0)
            throw Error(ErrorCode::numeric, "build_basis: degenerate singular direction");
        for (double& c : b) c /= len;
        basis.orthonormal_basis.push_back(std::move(b));
    }

    basis.residual_norms.reserve(r);
    for (const auto& raw : basis.raw_vectors) {
        Point rem = raw;
        for (const auto& b : basis.orthonormal_basis) {
            const double proj = dot(rem, b);
            for (std::size_t c = 0; c < dim; ++c) rem[c] -= proj * b[c];
        }
        basis.residual_norms.push_back(norm(rem));
    }
    return basis;
}

Point project_point(const ProjectionBasis& basis, std::span<const double> x) {
    if (x.size() != basis.ambient_dim)
        throw Error(ErrorCode::dimension_mismatch, "project: point dimension mismatch");
    if (basis.rank_zero())
        throw Error(ErrorCode::invalid_argument,
                    "project: basis has rank 0 (all sample means coincide); no informative directions exist");
    Point out(basis.effective_rank);
    Point centered(x.begin(), x.end());
    for (std::size_t c = 0; c < centered.size(); ++c) centered[c] -= basis.anchor[c];
    for (std::size_t k = 0; k < basis.effective_rank; ++k)
        out[k] = dot(centered, basis.orthonormal_basis[k]);
    return out;
}

Dataset project(const ProjectionBasis& basis, const Dataset& d) {
    if (d.dim() != basis.ambient_dim)
        throw Error(ErrorCode::dimension_mismatch, "project: dataset dimension mismatch");
    if (basis.rank_zero())
        throw Error(ErrorCode::invalid_argument,
                    "project: basis has rank 0 (all sample means coincide); no informative directions exist");
    Dataset out(basis.effective_rank, d.sample_id());
    out.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        out.add_point(project_point(basis, d.point(i)), d.weight(i));
    if (d.has_labels()) out.set_labels(d.labels());
    return out;
}

Point reconstruct_point(const ProjectionBasis& basis, std::span<const double> projected) {
    if (projected.size() != basis.effective_rank)
        throw Error(ErrorCode::dimension_mismatch, "reconstruct: coordinate dimension mismatch");
    Point out = basis.anchor;
    for (std::size_t k = 0; k < basis.effective_rank; ++k)
        for (std::size_t c = 0; c < out.size(); ++c)
            out[c] += projected[k] * basis.orthonormal_basis[k][c];
    return out;
}

MSPBounds msp_bound(const MSPBoundParams& params, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "msp_bound: epsilon must be > 0");
    if (!(params.sigma_max_sq > 0.0) || !(params.coeff_bound > 0.0) || params.dims == 0 ||
        params.sample_sizes.empty())
        throw Error(ErrorCode::invalid_argument, "msp_bound: parameters must be strictly positive");
    double inv_sum = 0.0;
    for (std::uint64_t n : params.sample_sizes) {
        if (n == 0) throw Error(ErrorCode::invalid_argument, "msp_bound: sample sizes must be positive");
        inv_sum += 1.0 / static_cast<double>(n);
    }
    const double base = static_cast<double>(params.dims) * params.sigma_max_sq * inv_sum /
                        (epsilon * epsilon);
    const double a2 = params.coeff_bound * params.coeff_bound;
    return MSPBounds{std::min(base, 1.0), std::min(4.0 * a2 * base, 1.0)};
}

namespace {

nlohmann::ordered_json vectors_to_json(const std::vector<Point>& vs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : vs) arr.push_back(v);
    return arr;
}

std::vector<Point> vectors_from_json(const nlohmann::json& arr) {
    std::vector<Point> out;
    for (const auto& v : arr) out.push_back(v.get<Point>());
    return out;
}

} // namespace

std::string ProjectionBasis::to_json() const {
    nlohmann::ordered_json j;
    j["ambient_dim"] = ambient_dim;
    j["effective_rank"] = effective_rank;
    j["anchor"] = anchor;
    j["singular_values"] = singular_values;
    j["residual_norms"] = residual_norms;
    j["raw_vectors"] = vectors_to_json(raw_vectors);
    j["orthonormal_basis"] = vectors_to_json(orthonormal_basis);
    return j.dump(2);
}

ProjectionBasis ProjectionBasis::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        ProjectionBasis b;
        b.ambient_dim = j.at("ambient_dim").get<std::size_t>();
        b.effective_rank = j.at("effective_rank").get<std::size_t>();
        b.anchor = j.at("anchor").get<Point>();
        b.singular_values = j.at("singular_values").get<std::vector<double>>();
        b.residual_norms = j.at("residual_norms").get<std::vector<double>>();
        b.raw_vectors = vectors_from_json(j.at("raw_vectors"));
        b.orthonormal_basis = vectors_from_json(j.at("orthonormal_basis"));
        if (b.orthonormal_basis.size() != b.effective_rank)
            throw Error(ErrorCode::parse, "basis JSON: rank does not match basis vectors");
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad basis JSON: ") + e.what());
    }
}

} // namespace mix::msp
