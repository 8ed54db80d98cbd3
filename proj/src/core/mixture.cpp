#include "core/mixture.hpp"

#include <cmath>

#include "core/error.hpp"

namespace mix {

std::vector<double> normalize_weight_vector(const std::vector<double>& phi) {
    if (phi.empty()) throw Error(ErrorCode::invalid_argument, "weight vector is empty");
    double total = 0.0;
    for (double w : phi) {
        if (!std::isfinite(w) || w < 0.0)
            throw Error(ErrorCode::invalid_argument, "mixing weights must be finite and non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorCode::invalid_argument, "mixing weights must sum to 1 within 1e-9");
    std::vector<double> out = phi;
    for (double& w : out) w /= total;
    return out;
}

MixtureSpec::MixtureSpec(std::vector<std::vector<double>> weight_matrix,
                         std::vector<Component> components)
    : components_(std::move(components)) {
    if (weight_matrix.empty())
        throw Error(ErrorCode::invalid_argument, "mixture spec needs at least one weight row");
    k_ = weight_matrix.front().size();
    if (k_ == 0) throw Error(ErrorCode::invalid_argument, "mixture spec needs K >= 1");
    weight_matrix_.reserve(weight_matrix.size());
    for (const auto& row : weight_matrix) {
        if (row.size() != k_)
            throw Error(ErrorCode::invalid_argument, "all weight rows must have length K");
        weight_matrix_.push_back(normalize_weight_vector(row));
    }
    if (!components_.empty() && components_.size() != k_)
        throw Error(ErrorCode::invalid_argument, "component descriptor count must equal K");
}

const std::vector<double>& MixtureSpec::weights(std::size_t mixture) const {
    if (mixture >= weight_matrix_.size())
        throw Error(ErrorCode::invalid_argument, "mixture index out of range");
    return weight_matrix_[mixture];
}

double MixtureSpec::phi_min() const {
    double m = 1.0;
    for (const auto& row : weight_matrix_)
        for (double w : row) m = std::min(m, w);
    return m;
}

} // namespace mix
