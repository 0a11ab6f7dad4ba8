#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fseg/ml.hpp"
#include "fseg/ml_tree_build.hpp"

namespace fseg::ml {

namespace detail {
nlohmann::json tree_json(const Tree& t);
Tree tree_from(const nlohmann::json& j);
}  // namespace detail

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double log_loss(const std::vector<double>& margin, const std::vector<int>& y) {
    const double eps = 1e-12;
    double sum = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
        double p = std::clamp(sigmoid(margin[i]), eps, 1.0 - eps);
        sum += y[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    return sum / static_cast<double>(margin.size());
}

}  // namespace

GbtModel GbtModel::train(const Samples& train, const GbtParams& params,
                         std::vector<double>* train_loss_history) {
    if (train.size() == 0) throw std::invalid_argument("gbt: empty training set");
    if (params.rounds < 0 || params.learning_rate <= 0.0 || params.max_depth < 1) {
        throw std::invalid_argument("gbt: bad params");
    }

    GbtModel model;
    model.params = params;

    double base_rate = static_cast<double>(train.count(1)) / static_cast<double>(train.size());
    base_rate = std::clamp(base_rate, 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(base_rate / (1.0 - base_rate));

    std::vector<double> margin(train.size(), model.base_score);
    std::vector<double> grad(train.size()), hess(train.size());

    if (train_loss_history) train_loss_history->push_back(log_loss(margin, train.y));

    for (int round = 0; round < params.rounds; ++round) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            double p = sigmoid(margin[i]);
            grad[i] = p - static_cast<double>(train.y[i]);
            hess[i] = p * (1.0 - p);
        }
        Tree tree = detail::build_boost_tree(train, grad, hess, params);
        for (std::size_t i = 0; i < train.size(); ++i) {
            margin[i] += params.learning_rate * tree.eval(train.x[i]);
        }
        model.trees.push_back(std::move(tree));
        if (train_loss_history) train_loss_history->push_back(log_loss(margin, train.y));
    }
    return model;
}

double GbtModel::raw_score(std::span<const double> x) const {
    double s = base_score;
    for (const auto& t : trees) s += params.learning_rate * t.eval(x);
    return s;
}

double GbtModel::score(std::span<const double> x) const { return sigmoid(raw_score(x)); }

nlohmann::json GbtModel::to_json() const {
    nlohmann::json trees_json = nlohmann::json::array();
    for (const auto& t : trees) trees_json.push_back(detail::tree_json(t));
    return {{"kind", "gbt"},
            {"threshold", threshold},
            {"base_score", base_score},
            {"params",
             {{"rounds", params.rounds},
              {"learning_rate", params.learning_rate},
              {"max_depth", params.max_depth},
              {"lambda", params.lambda},
              {"min_child_hess", params.min_child_hess},
              {"seed", params.seed}}},
            {"trees", trees_json}};
}

GbtModel GbtModel::from_json(const nlohmann::json& j) {
    GbtModel m;
    m.threshold = j.at("threshold").get<double>();
    m.base_score = j.at("base_score").get<double>();
    const auto& p = j.at("params");
    m.params.rounds = p.at("rounds").get<int>();
    m.params.learning_rate = p.at("learning_rate").get<double>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.lambda = p.at("lambda").get<double>();
    m.params.min_child_hess = p.at("min_child_hess").get<double>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("trees")) m.trees.push_back(detail::tree_from(t));
    return m;
}

}  // namespace fseg::ml
