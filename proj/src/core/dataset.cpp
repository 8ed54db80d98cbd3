#include "core/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "json.hpp"

namespace mix {

Dataset::Dataset(std::size_t dim, std::string sample_id)
    : dim_(dim), sample_id_(std::move(sample_id)) {
    if (dim == 0) throw Error(ErrorCode::invalid_argument, "dataset dimension must be >= 1");
}

void Dataset::add_point(std::span<const double> coords, double weight) {
    if (coords.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "point dimension does not match dataset");
    if (weight < 0.0 || !std::isfinite(weight))
        throw Error(ErrorCode::invalid_argument, "point weight must be finite and non-negative");
    data_.insert(data_.end(), coords.begin(), coords.end());
    weights_.push_back(weight);
}

void Dataset::reserve(std::size_t num_points) {
    data_.reserve(num_points * dim_);
    weights_.reserve(num_points);
}

void Dataset::set_weights(std::vector<double> weights) {
    if (weights.size() != size())
        throw Error(ErrorCode::invalid_argument, "weight count does not match point count");
    bool any_positive = false;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw Error(ErrorCode::invalid_argument, "weights must be finite and non-negative");
        any_positive = any_positive || w > 0.0;
    }
    if (!weights.empty() && !any_positive)
        throw Error(ErrorCode::invalid_argument, "at least one weight must be positive");
    weights_ = std::move(weights);
}

const std::vector<int>& Dataset::labels() const {
    if (!labels_) throw Error(ErrorCode::invalid_argument, "dataset has no labels");
    return *labels_;
}

void Dataset::set_labels(std::vector<int> labels) {
    if (labels.size() != size())
        throw Error(ErrorCode::invalid_argument, "label count does not match point count");
    labels_ = std::move(labels);
}

double Dataset::total_weight() const {
    double total = 0.0;
    for (double w : weights_) total += w;
    return total;
}

bool Dataset::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Point weighted_mean(const Dataset& d) {
    if (d.empty()) throw Error(ErrorCode::empty_input, "weighted_mean of empty dataset");
    const double total = d.total_weight();
    if (total <= 0.0) throw Error(ErrorCode::invalid_argument, "weighted_mean needs positive total weight");
    Point mean(d.dim(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = d.point(i);
        const double w = d.weight(i);
        for (std::size_t k = 0; k < d.dim(); ++k) mean[k] += w * p[k];
    }
    for (double& v : mean) v /= total;
    return mean;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_cell(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return cells;
}

std::string column_count_message(std::size_t row, std::size_t got, std::size_t expected) {
    std::ostringstream os;
    os << "row " << row << " has " << got << (got == 1 ? " column" : " columns")
       << ", expected " << expected;
    return os.str();
}

} // namespace

std::string sidecar_path(const std::string& csv_path) {
    return std::filesystem::path(csv_path).replace_extension(".json").string();
}

Dataset load_dataset(const std::string& path, const std::string& sample_id) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open dataset file: " + path);

    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t expected_cols = 0;
    std::size_t line_number = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto cells = split_line(view);

        std::vector<double> row;
        row.reserve(cells.size());
        bool ok = true;
        for (const auto& cell : cells) {
            double value = 0.0;
            if (!parse_cell(cell, value)) {
                ok = false;
                break;
            }
            row.push_back(value);
        }

        if (!ok) {
            // one optional header line is allowed; anything else is a parse error
            if (first_content_line) {
                first_content_line = false;
                continue;
            }
            std::ostringstream os;
            os << "non-numeric cell in row " << line_number << " of " << path;
            throw Error(ErrorCode::parse, os.str());
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite value in row " << line_number << " of " << path;
                throw Error(ErrorCode::parse, os.str());
            }
        }
        if (first_content_line) {
            first_content_line = false;
            expected_cols = row.size();
        } else if (row.size() != expected_cols) {
            if (expected_cols == 0) {
                expected_cols = row.size();
            } else {
                throw Error(ErrorCode::parse, column_count_message(line_number, row.size(), expected_cols));
            }
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw Error(ErrorCode::empty_input, "dataset file has no data rows: " + path);

    Dataset result(expected_cols, sample_id);
    result.reserve(rows.size());
    for (const auto& row : rows) result.add_point(row);

    // sidecar carries sample_id and ground-truth labels when present
    const std::string side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        std::ifstream sin(side);
        nlohmann::json j;
        try {
            sin >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::parse, "bad sidecar " + side + ": " + e.what());
        }
        if (sample_id.empty() && j.contains("sample_id"))
            result.set_sample_id(j["sample_id"].get<std::string>());
        if (j.contains("labels") && !j["labels"].is_null()) {
            auto labels = j["labels"].get<std::vector<int>>();
            if (labels.size() != result.size())
                throw Error(ErrorCode::parse, "sidecar label count does not match dataset " + path);
            result.set_labels(std::move(labels));
        }
    }
    return result;
}

void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write dataset file: " + path);
    char buf[40];
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = d.point(i);
        for (std::size_t k = 0; k < d.dim(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[k]);
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::io, "write failed: " + path);

    if (d.has_labels() || !d.sample_id().empty()) {
        nlohmann::ordered_json j;
        j["sample_id"] = d.sample_id();
        if (d.has_labels()) j["labels"] = d.labels();
        std::ofstream side(sidecar_path(path));
        if (!side) throw Error(ErrorCode::io, "cannot write sidecar for: " + path);
        side << j.dump(2) << '\n';
    }
}

} // namespace mix
