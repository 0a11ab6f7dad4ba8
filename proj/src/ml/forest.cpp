#include <atomic>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "fseg/hash.hpp"
#include "fseg/ml.hpp"
#include "fseg/ml_tree_build.hpp"
#include "fseg/rng.hpp"

namespace fseg::ml {

ForestModel ForestModel::train(const Samples& train, const ForestParams& params) {
    if (train.size() == 0) throw std::invalid_argument("forest: empty training set");
    if (params.n_trees < 1 || params.max_depth < 1) throw std::invalid_argument("forest: bad params");

    ForestModel model;
    model.params = params;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    // every tree draws from its own seed stream, so the result does not
    // depend on how trees are scheduled across threads
    auto build_one = [&](int t) {
        Rng rng(mix64(mix64(params.seed) ^ (static_cast<std::uint64_t>(t) + 1)));
        std::vector<std::size_t> rows;
        rows.reserve(train.size());
        if (params.bootstrap) {
            for (std::size_t i = 0; i < train.size(); ++i) {
                rows.push_back(static_cast<std::size_t>(bounded(rng, train.size())));
            }
        } else {
            for (std::size_t i = 0; i < train.size(); ++i) rows.push_back(i);
        }
        model.trees[static_cast<std::size_t>(t)] = detail::build_classification_tree(train, rows, params, rng);
    };

    int n_threads = params.n_threads > 0 ? params.n_threads : 1;
    if (n_threads <= 1) {
        for (int t = 0; t < params.n_trees; ++t) build_one(t);
    } else {
        std::vector<std::thread> workers;
        std::atomic<int> next{0};
        for (int w = 0; w < n_threads; ++w) {
            workers.emplace_back([&]() {
                for (int t = next.fetch_add(1); t < params.n_trees; t = next.fetch_add(1)) build_one(t);
            });
        }
        for (auto& th : workers) th.join();
    }
    return model;
}

double ForestModel::score(std::span<const double> x) const {
    if (trees.empty()) return 0.0;
    double votes = 0;
    for (const auto& t : trees) {
        if (t.eval(x) >= 0.5) votes += 1.0;
    }
    return votes / static_cast<double>(trees.size());
}

namespace {

nlohmann::json tree_to_json(const Tree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
        nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}, {"v", n.value}});
    }
    return nodes;
}

Tree tree_from_json(const nlohmann::json& j) {
    Tree t;
    for (const auto& n : j) {
        t.nodes.push_back({n.at("f").get<int>(), n.at("t").get<double>(), n.at("l").get<int>(),
                           n.at("r").get<int>(), n.at("v").get<double>()});
    }
    return t;
}

}  // namespace

nlohmann::json ForestModel::to_json() const {
    nlohmann::json trees_json = nlohmann::json::array();
    for (const auto& t : trees) trees_json.push_back(tree_to_json(t));
    return {{"kind", "forest"},
            {"threshold", threshold},
            {"params",
             {{"n_trees", params.n_trees},
              {"max_depth", params.max_depth},
              {"min_samples_split", params.min_samples_split},
              {"bootstrap", params.bootstrap},
              {"sqrt_features", params.sqrt_features},
              {"seed", params.seed}}},
            {"trees", trees_json}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
    ForestModel m;
    m.threshold = j.at("threshold").get<double>();
    const auto& p = j.at("params");
    m.params.n_trees = p.at("n_trees").get<int>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.min_samples_split = p.at("min_samples_split").get<int>();
    m.params.bootstrap = p.at("bootstrap").get<bool>();
    m.params.sqrt_features = p.at("sqrt_features").get<bool>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
    return m;
}

// json helpers shared with gbt.cpp
namespace detail {
nlohmann::json tree_json(const Tree& t) { return tree_to_json(t); }
Tree tree_from(const nlohmann::json& j) { return tree_from_json(j); }
}  // namespace detail

}  // namespace fseg::ml
