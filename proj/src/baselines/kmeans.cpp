#include "baselines/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "core/error.hpp"
#include "core/linalg.hpp"

namespace mix::baselines {

namespace {

std::size_t count_distinct(const Dataset& d) {
    std::vector<std::uint32_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::uint32_t a, std::uint32_t b) {
        const auto pa = d.point(a);
        const auto pb = d.point(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    };
    std::sort(idx.begin(), idx.end(), less);
    std::size_t distinct = d.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        const auto prev = d.point(idx[i - 1]);
        const auto cur = d.point(idx[i]);
        if (!std::equal(prev.begin(), prev.end(), cur.begin())) ++distinct;
    }
    return distinct;
}

struct Run {
    std::vector<Point> centers;
    std::vector<int> assignments;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

Run single_run(const Dataset& d, std::size_t k, std::size_t max_iter, Rng& rng) {
    const std::size_t n = d.size();
    const std::size_t dim = d.dim();

    // D^2 seeding, mass proportional to weight * squared distance to the
    // nearest already-chosen center.
    std::vector<Point> centers;
    centers.reserve(k);
    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    {
        const std::size_t first = rng.categorical(d.weights());
        centers.emplace_back(d.point(first).begin(), d.point(first).end());
    }
    std::vector<double> mass(n);
    while (centers.size() < k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double sq = squared_distance(d.point(i), centers.back());
            min_sq[i] = std::min(min_sq[i], sq);
            mass[i] = d.weight(i) * min_sq[i];
        }
        const std::size_t next = rng.categorical(mass);
        centers.emplace_back(d.point(next).begin(), d.point(next).end());
    }

    std::vector<int> assign(n, -1);
    auto assign_all = [&]() {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double sq = squared_distance(d.point(i), centers[c]);
                if (sq < best) {
                    best = sq;
                    best_c = static_cast<int>(c);
                }
            }
            if (assign[i] != best_c) {
                assign[i] = best_c;
                changed = true;
            }
        }
        return changed;
    };

    assign_all();
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // recompute weighted centers
        std::vector<Point> next(k, Point(dim, 0.0));
        std::vector<double> cluster_weight(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = d.point(i);
            const double w = d.weight(i);
            auto& c = next[static_cast<std::size_t>(assign[i])];
            for (std::size_t j = 0; j < dim; ++j) c[j] += w * p[j];
            cluster_weight[static_cast<std::size_t>(assign[i])] += w;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (cluster_weight[c] > 0.0) {
                for (std::size_t j = 0; j < dim; ++j) next[c][j] /= cluster_weight[c];
            } else {
                // reseed the emptied cluster at the point farthest from its center
                double far_d = -1.0;
                std::size_t far_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double sq =
                        squared_distance(d.point(i), centers[static_cast<std::size_t>(assign[i])]);
                    if (sq > far_d) {
                        far_d = sq;
                        far_i = i;
                    }
                }
                next[c].assign(d.point(far_i).begin(), d.point(far_i).end());
            }
        }
        centers = std::move(next);
        if (!assign_all()) {
            ++iter;
            break;
        }
    }

    Run run;
    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        run.inertia += d.weight(i) *
                       squared_distance(d.point(i), centers[static_cast<std::size_t>(assign[i])]);
    run.centers = std::move(centers);
    run.assignments = std::move(assign);
    run.iterations = iter;
    return run;
}

} // namespace

KMeansResult kmeans(const Dataset& d, std::size_t k, std::size_t restarts,
                    std::size_t max_iter, const RngHandle& rng) {
    if (d.empty()) throw Error(ErrorCode::empty_input, "kmeans: empty dataset");
    if (k == 0) throw Error(ErrorCode::invalid_argument, "kmeans: k must be >= 1");
    if (restarts == 0) throw Error(ErrorCode::invalid_argument, "kmeans: restarts must be >= 1");
    if (k > count_distinct(d))
        throw Error(ErrorCode::invalid_argument, "kmeans: k exceeds the number of distinct points");

    Run best;
    bool have_best = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng stream(rng.split(r));
        Run run = single_run(d, k, max_iter, stream);
        if (!have_best || run.inertia < best.inertia) {
            best = std::move(run);
            have_best = true;
        }
    }
    return KMeansResult{std::move(best.centers), std::move(best.assignments), best.inertia,
                        best.iterations};
}

} // namespace mix::baselines
