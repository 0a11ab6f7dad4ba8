#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fseg/ml.hpp"

namespace fseg::ml {

namespace {

// Cholesky solve of A w = b for symmetric positive-definite A (dense,
// row-major). The ridge term keeps A positive-definite even when one-hot
// blocks make the design rank-deficient.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) throw std::runtime_error("linear: normal equations not positive definite");
        double l = std::sqrt(d);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    // forward: L z = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    // backward: L^T w = z
    for (std::size_t ii = n; ii > 0; --ii) {
        std::size_t i = ii - 1;
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
        b[i] = s / a[i * n + i];
    }
    return b;
}

}  // namespace

LinearModel LinearModel::train(const Samples& train, double ridge, double threshold) {
    if (train.size() == 0) throw std::invalid_argument("linear: empty training set");
    const std::size_t d = train.n_features();
    const std::size_t p = d + 1;  // intercept first

    // normal equations X'X + ridge*I, X'y with fixed summation order
    std::vector<double> a(p * p, 0.0), b(p, 0.0);
    for (std::size_t r = 0; r < train.size(); ++r) {
        const auto& x = train.x[r];
        double y = train.y[r];
        a[0] += 1.0;
        b[0] += y;
        for (std::size_t i = 0; i < d; ++i) {
            a[(i + 1) * p] += x[i];
            b[i + 1] += x[i] * y;
            for (std::size_t j = 0; j <= i; ++j) {
                a[(i + 1) * p + (j + 1)] += x[i] * x[j];
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) a[i * p + j] = a[j * p + i];
        a[i * p + i] += ridge;
    }

    std::vector<double> w = solve_spd(std::move(a), std::move(b), p);

    LinearModel model;
    model.threshold = threshold;
    model.intercept = w[0];
    model.weights.assign(w.begin() + 1, w.end());
    return model;
}

double LinearModel::score(std::span<const double> x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("linear: feature width mismatch");
    double s = intercept;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
    return s;
}

nlohmann::json LinearModel::to_json() const {
    return {{"kind", "linear"}, {"threshold", threshold}, {"intercept", intercept}, {"weights", weights}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
    LinearModel m;
    m.threshold = j.at("threshold").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    return m;
}

}  // namespace fseg::ml
