#include "bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "baselines/kmeans.hpp"
#include "baselines/projections.hpp"
#include "bench/metrics.hpp"
#include "common/parallel.hpp"
#include "core/error.hpp"
#include "msp/projection.hpp"
#include "theory/weights.hpp"
#include "json.hpp"

namespace mix::bench {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::random_proj: return "random_proj";
        case Algorithm::pca_proj: return "pca_proj";
        case Algorithm::msp: return "msp";
        case Algorithm::dsc: return "dsc";
    }
    return "unknown";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "random_proj") return Algorithm::random_proj;
    if (name == "pca_proj") return Algorithm::pca_proj;
    if (name == "msp") return Algorithm::msp;
    if (name == "dsc") return Algorithm::dsc;
    return std::nullopt;
}

dsc::DSCConfig ExperimentConfig::dsc_config() const {
    dsc::DSCConfig cfg;
    cfg.tau = tau;
    cfg.min_points_per_side = min_points_per_side;
    cfg.max_splits = max_splits.value_or(4 * static_cast<int>(num_components()));
    cfg.oracle_config = oracle_config;
    return cfg;
}

void ExperimentConfig::validate() const {
    if (base_centers.empty())
        throw Error(ErrorCode::invalid_argument, "config: base_centers must be non-empty");
    const std::size_t dim = base_centers.front().size();
    if (dim == 0) throw Error(ErrorCode::invalid_argument, "config: centers must have dimension >= 1");
    for (const auto& c : base_centers)
        if (c.size() != dim)
            throw Error(ErrorCode::invalid_argument, "config: centers have mixed dimensions");
    if (points_per_sample < num_components())
        throw Error(ErrorCode::invalid_argument, "config: points_per_sample must be >= K");
    if (num_trials < 1) throw Error(ErrorCode::invalid_argument, "config: num_trials must be >= 1");
    if (algorithms.empty())
        throw Error(ErrorCode::invalid_argument, "config: algorithms must be non-empty");
    if (projection_target_dim < 1 || projection_target_dim > total_dims())
        throw Error(ErrorCode::invalid_argument, "config: projection_target_dim out of range");
    if (noise_sigma < 0.0 || signal_sigma < 0.0)
        throw Error(ErrorCode::invalid_argument, "config: sigmas must be non-negative");
    if (!(tau > 0.0 && tau < 0.5))
        throw Error(ErrorCode::invalid_argument, "config: tau must lie in (0, 1/2)");
    if (kmeans_restarts < 1)
        throw Error(ErrorCode::invalid_argument, "config: kmeans_restarts must be >= 1");
}

namespace {

std::vector<double> draw_mixing_weights(Rng& rng, std::size_t k) {
    std::vector<double> phi(k);
    double total = 0.0;
    do {
        total = 0.0;
        for (double& w : phi) {
            w = rng.uniform01();
            total += w;
        }
    } while (total <= 0.0);
    for (double& w : phi) w /= total;
    return phi;
}

Dataset draw_sample(const ExperimentConfig& cfg, const std::vector<double>& phi,
                    const RngHandle& handle, const std::string& id) {
    const std::size_t signal = cfg.signal_dims();
    const std::size_t dims = cfg.total_dims();
    const std::size_t n = cfg.points_per_sample;

    Rng label_rng(handle.split(0));
    Rng signal_rng(handle.split(1));
    Rng noise_rng(handle.split(2));

    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(label_rng.categorical(phi));

    Dataset d(dims, id);
    d.reserve(n);
    Point p(dims);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& center = cfg.base_centers[static_cast<std::size_t>(labels[i])];
        for (std::size_t a = 0; a < signal; ++a)
            p[a] = center[a] + cfg.signal_sigma * signal_rng.normal();
        for (std::size_t a = signal; a < dims; ++a) p[a] = cfg.noise_sigma * noise_rng.normal();
        d.add_point(p);
    }
    d.set_labels(std::move(labels));
    return d;
}

Dataset pool_samples(const Dataset& s1, const Dataset& s2) {
    Dataset pooled(s1.dim(), "pooled");
    pooled.reserve(s1.size() + s2.size());
    std::vector<int> labels;
    labels.reserve(s1.size() + s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        pooled.add_point(s1.point(i), s1.weight(i));
        labels.push_back(s1.labels()[i]);
    }
    for (std::size_t i = 0; i < s2.size(); ++i) {
        pooled.add_point(s2.point(i), s2.weight(i));
        labels.push_back(s2.labels()[i]);
    }
    pooled.set_labels(std::move(labels));
    return pooled;
}

} // namespace

TrialData generate_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    cfg.validate();
    const RngHandle root{cfg.seed, trial};
    Rng weight_rng(root.split(0));
    std::vector<double> phi1 = draw_mixing_weights(weight_rng, cfg.num_components());
    std::vector<double> phi2 = draw_mixing_weights(weight_rng, cfg.num_components());
    Dataset s1 = draw_sample(cfg, phi1, root.split(1), "S1");
    Dataset s2 = draw_sample(cfg, phi2, root.split(2), "S2");
    return TrialData{std::move(s1), std::move(s2), std::move(phi1), std::move(phi2)};
}

TrialResult run_single_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    TrialData data = generate_trial(cfg, trial);
    const RngHandle root{cfg.seed, trial};
    const std::size_t k = cfg.num_components();

    const Dataset pooled = pool_samples(data.s1, data.s2);
    const std::vector<int>& truth = pooled.labels();

    TrialResult result;
    result.trial = trial;
    result.stream = trial;
    result.phi1 = data.phi1;
    result.phi2 = data.phi2;
    result.gap = theory::compute_gap(data.phi1, data.phi2).gap;

    for (Algorithm algo : cfg.algorithms) {
        double acc = 0.0;
        switch (algo) {
            case Algorithm::kmeans: {
                const auto km = baselines::kmeans(pooled, k, cfg.kmeans_restarts,
                                                  cfg.kmeans_max_iter, root.split(10));
                acc = accuracy_best_assignment(km.assignments, truth, k);
                break;
            }
            case Algorithm::random_proj: {
                const Dataset proj =
                    baselines::random_projection(pooled, cfg.projection_target_dim, root.split(11));
                const auto km = baselines::kmeans(proj, k, cfg.kmeans_restarts, cfg.kmeans_max_iter,
                                                  root.split(12));
                acc = accuracy_best_assignment(km.assignments, truth, k);
                break;
            }
            case Algorithm::pca_proj: {
                const auto proj = baselines::pca_projection(pooled, cfg.projection_target_dim);
                const auto km = baselines::kmeans(proj.data, k, cfg.kmeans_restarts,
                                                  cfg.kmeans_max_iter, root.split(13));
                acc = accuracy_best_assignment(km.assignments, truth, k);
                break;
            }
            case Algorithm::msp: {
                const auto means = msp::estimate_means({&data.s1, &data.s2});
                const std::size_t rank_cap =
                    std::min(cfg.projection_target_dim, k > 1 ? k - 1 : std::size_t{1});
                const auto basis = msp::build_basis(means, 1e-6, rank_cap);
                const Dataset proj = msp::project(basis, pooled);
                const auto km = baselines::kmeans(proj, k, cfg.kmeans_restarts, cfg.kmeans_max_iter,
                                                  root.split(14));
                acc = accuracy_best_assignment(km.assignments, truth, k);
                break;
            }
            case Algorithm::dsc: {
                const auto tree = dsc::build_tree(data.s1, data.s2, cfg.dsc_config(), root.split(15));
                const std::vector<int> leaves = tree.assign(pooled);
                acc = accuracy_best_assignment(leaves, truth, k);
                break;
            }
        }
        result.accuracy.emplace_back(algo, acc);
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    ExperimentResult result;
    result.trials.resize(cfg.num_trials);

    parallel_for(cfg.num_trials, threads, [&](std::size_t t) {
        try {
            result.trials[t] = run_single_trial(cfg, static_cast<std::uint64_t>(t));
        } catch (const Error& e) {
            throw Error(e.code(), "trial " + std::to_string(t) + " failed: " + e.what());
        }
    });

    // mean accuracy per algorithm, in config order
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        double total = 0.0;
        for (const auto& trial : result.trials) total += trial.accuracy[a].second;
        result.mean_accuracy.emplace_back(cfg.algorithms[a],
                                          total / static_cast<double>(cfg.num_trials));
    }

    // pairwise sign tests; ties at 1e-12 are excluded from the test
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        for (std::size_t b = a + 1; b < cfg.algorithms.size(); ++b) {
            PairwiseStats stats;
            stats.a = cfg.algorithms[a];
            stats.b = cfg.algorithms[b];
            for (const auto& trial : result.trials) {
                const double diff = trial.accuracy[a].second - trial.accuracy[b].second;
                if (diff > 1e-12)
                    ++stats.wins_a;
                else if (diff < -1e-12)
                    ++stats.wins_b;
                else
                    ++stats.ties;
            }
            stats.p_value_a_beats_b = sign_test_pvalue(stats.wins_a, stats.wins_a + stats.wins_b);
            result.pairwise.push_back(stats);
        }
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string results_csv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "trial,algorithm,accuracy\n";
    for (const auto& trial : result.trials)
        for (const auto& [algo, acc] : trial.accuracy)
            os << trial.trial << ',' << algorithm_name(algo) << ',' << format_double(acc) << '\n';
    return os.str();
}

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json centers = nlohmann::ordered_json::array();
    for (const auto& c : base_centers) centers.push_back(c);
    j["base_centers"] = centers;
    j["noise_dims"] = noise_dims;
    j["noise_sigma"] = noise_sigma;
    j["signal_sigma"] = signal_sigma;
    j["points_per_sample"] = points_per_sample;
    j["num_trials"] = num_trials;
    nlohmann::ordered_json algos = nlohmann::ordered_json::array();
    for (Algorithm a : algorithms) algos.push_back(algorithm_name(a));
    j["algorithms"] = algos;
    j["projection_target_dim"] = projection_target_dim;
    j["seed"] = seed;
    j["tau"] = tau;
    j["min_points_per_side"] = min_points_per_side;
    if (max_splits) j["max_splits"] = *max_splits;
    j["oracle"] = {{"max_depth", oracle_config.max_depth},
                   {"min_leaf_weight", oracle_config.min_leaf_weight},
                   {"holdout_fraction", oracle_config.holdout_fraction}};
    j["kmeans_restarts"] = kmeans_restarts;
    j["kmeans_max_iter"] = kmeans_max_iter;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    ExperimentConfig cfg;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (j.contains("base_centers")) {
            cfg.base_centers.clear();
            for (const auto& c : j.at("base_centers")) cfg.base_centers.push_back(c.get<Point>());
        }
        if (j.contains("noise_dims")) cfg.noise_dims = j.at("noise_dims").get<std::size_t>();
        if (j.contains("noise_sigma")) cfg.noise_sigma = j.at("noise_sigma").get<double>();
        if (j.contains("signal_sigma")) cfg.signal_sigma = j.at("signal_sigma").get<double>();
        if (j.contains("points_per_sample"))
            cfg.points_per_sample = j.at("points_per_sample").get<std::size_t>();
        if (j.contains("num_trials")) cfg.num_trials = j.at("num_trials").get<std::size_t>();
        if (j.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& name : j.at("algorithms")) {
                const auto algo = algorithm_from_name(name.get<std::string>());
                if (!algo)
                    throw Error(ErrorCode::invalid_argument,
                                "config: unknown algorithm " + name.get<std::string>());
                cfg.algorithms.push_back(*algo);
            }
        }
        if (j.contains("projection_target_dim"))
            cfg.projection_target_dim = j.at("projection_target_dim").get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
        if (j.contains("min_points_per_side"))
            cfg.min_points_per_side = j.at("min_points_per_side").get<std::size_t>();
        if (j.contains("max_splits")) cfg.max_splits = j.at("max_splits").get<int>();
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            if (o.contains("max_depth")) cfg.oracle_config.max_depth = o.at("max_depth").get<int>();
            if (o.contains("min_leaf_weight"))
                cfg.oracle_config.min_leaf_weight = o.at("min_leaf_weight").get<double>();
            if (o.contains("holdout_fraction"))
                cfg.oracle_config.holdout_fraction = o.at("holdout_fraction").get<double>();
        }
        if (j.contains("kmeans_restarts"))
            cfg.kmeans_restarts = j.at("kmeans_restarts").get<std::size_t>();
        if (j.contains("kmeans_max_iter"))
            cfg.kmeans_max_iter = j.at("kmeans_max_iter").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(cfg.to_json());

    nlohmann::ordered_json mean;
    for (const auto& [algo, acc] : result.mean_accuracy) mean[algorithm_name(algo)] = acc;
    j["mean_accuracy"] = mean;

    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& p : result.pairwise) {
        nlohmann::ordered_json row;
        row["a"] = algorithm_name(p.a);
        row["b"] = algorithm_name(p.b);
        row["wins_a"] = p.wins_a;
        row["wins_b"] = p.wins_b;
        row["ties"] = p.ties;
        row["p_value_a_beats_b"] = p.p_value_a_beats_b;
        pairs.push_back(row);
    }
    j["pairwise"] = pairs;

    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (const auto& t : result.trials) {
        nlohmann::ordered_json row;
        row["trial"] = t.trial;
        row["stream"] = t.stream;
        row["phi1"] = t.phi1;
        row["phi2"] = t.phi2;
        row["gap"] = t.gap;
        nlohmann::ordered_json acc;
        for (const auto& [algo, a] : t.accuracy) acc[algorithm_name(algo)] = a;
        row["accuracy"] = acc;
        trials.push_back(row);
    }
    j["trials"] = trials;
    return j.dump(2);
}

} // namespace mix::bench
