#pragma once

#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace mix::baselines {

struct KMeansResult {
    std::vector<Point> centers;
    std::vector<int> assignments;   // nearest center, ties to the lowest index
    double inertia = 0.0;           // weighted sum of squared distances
    std::size_t iterations_run = 0; // Lloyd iterations of the winning restart
};

// Lloyd's algorithm with weighted D^2 seeding, `restarts` independent
// seedings, lowest inertia wins. An emptied cluster is reseeded at the point
// farthest from its currently assigned center.
KMeansResult kmeans(const Dataset& d, std::size_t k, std::size_t restarts,
                    std::size_t max_iter, const RngHandle& rng);

} // namespace mix::baselines
