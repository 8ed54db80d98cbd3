#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mix {

using Point = std::vector<double>;

// A weighted collection of n-dimensional points belonging to one sample.
// Row-major flat storage; immutable once built (all mutators are for
// construction/ingestion, callers share const references afterwards).
class Dataset {
public:
    explicit Dataset(std::size_t dim, std::string sample_id = {});

    void add_point(std::span<const double> coords, double weight = 1.0);
    void reserve(std::size_t num_points);

    std::size_t size() const { return weights_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return weights_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& raw_data() const { return data_; }

    const std::string& sample_id() const { return sample_id_; }
    void set_sample_id(std::string id) { sample_id_ = std::move(id); }

    void set_weights(std::vector<double> weights);

    bool has_labels() const { return labels_.has_value(); }
    const std::vector<int>& labels() const;
    void set_labels(std::vector<int> labels);

    double total_weight() const;
    bool all_finite() const;

private:
    std::size_t dim_;
    std::vector<double> data_;
    std::vector<double> weights_;
    std::optional<std::vector<int>> labels_;
    std::string sample_id_;
};

// Weighted mean sum(w_i x_i) / sum(w_i); throws on zero total weight.
Point weighted_mean(const Dataset& d);

// CSV interchange: one row per point, optional single header line. A sidecar
// JSON file (same path with extension swapped for .json) carries sample_id
// and ground-truth labels when present.
Dataset load_dataset(const std::string& path, const std::string& sample_id = {});
void save_dataset(const Dataset& d, const std::string& path);

std::string sidecar_path(const std::string& csv_path);

} // namespace mix
