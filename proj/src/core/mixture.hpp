#pragma once

#include <string>
#include <variant>
#include <vector>

namespace mix {

// Component descriptors: Gaussian (mean + per-dimension sigma) for synthetic
// generation, Interval for 1-D disjoint-support theory cases, Label when the
// component is abstract.
struct GaussianComponent {
    std::vector<double> mean;
    std::vector<double> sigma; // per-dimension standard deviation
};

struct IntervalComponent {
    double lo = 0.0;
    double hi = 1.0;
};

struct LabeledComponent {
    std::string name;
};

using Component = std::variant<GaussianComponent, IntervalComponent, LabeledComponent>;

// K components shared by M mixtures, each mixture with its own weight row.
// Rows must be non-negative and sum to 1 within 1e-9; they are renormalized
// on construction so downstream identities hold exactly.
class MixtureSpec {
public:
    MixtureSpec(std::vector<std::vector<double>> weight_matrix,
                std::vector<Component> components = {});

    std::size_t num_components() const { return k_; }
    std::size_t num_mixtures() const { return weight_matrix_.size(); }

    const std::vector<double>& weights(std::size_t mixture) const;
    const std::vector<std::vector<double>>& weight_matrix() const { return weight_matrix_; }

    double phi_min() const;

    bool has_components() const { return !components_.empty(); }
    const std::vector<Component>& components() const { return components_; }

private:
    std::size_t k_ = 0;
    std::vector<std::vector<double>> weight_matrix_;
    std::vector<Component> components_;
};

// Validates a single weight vector (non-negative, sums to 1 within 1e-9)
// and returns the renormalized copy.
std::vector<double> normalize_weight_vector(const std::vector<double>& phi);

} // namespace mix
