#include <algorithm>
#include <cmath>

#include "fseg/ml.hpp"
#include "fseg/ml_tree_build.hpp"
#include "fseg/rng.hpp"

namespace fseg::ml {

double Tree::eval(std::span<const double> x) const {
    int idx = 0;
    while (true) {
        const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
        if (n.feature < 0) return n.value;
        idx = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
}

namespace detail {

// Candidate features for one split; all features when mtry >= d.
std::vector<int> pick_features(std::size_t d, std::size_t mtry, Rng& rng) {
    std::vector<int> all(d);
    for (std::size_t i = 0; i < d; ++i) all[i] = static_cast<int>(i);
    if (mtry >= d) return all;
    for (std::size_t i = 0; i < mtry; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded(rng, d - i));
        std::swap(all[i], all[j]);
    }
    all.resize(mtry);
    std::sort(all.begin(), all.end());  // deterministic scan order
    return all;
}

// Exhaustive threshold scan for the best Gini split of `rows`.
// Returns gain <= 0 when no split helps.
GiniSplit best_gini_split(const Samples& s, const std::vector<std::size_t>& rows,
                          const std::vector<int>& features) {
    GiniSplit best;
    const double n = static_cast<double>(rows.size());
    double pos = 0;
    for (std::size_t r : rows) pos += s.y[r];
    double gini_parent = 1.0 - (pos / n) * (pos / n) - ((n - pos) / n) * ((n - pos) / n);

    std::vector<std::pair<double, std::size_t>> sorted;
    sorted.reserve(rows.size());
    for (int f : features) {
        sorted.clear();
        for (std::size_t r : rows) sorted.emplace_back(s.x[r][static_cast<std::size_t>(f)], r);
        std::sort(sorted.begin(), sorted.end());  // (value, row) pairs: total order

        double left_n = 0, left_pos = 0;
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
            left_n += 1.0;
            left_pos += s.y[sorted[k].second];
            if (sorted[k].first == sorted[k + 1].first) continue;  // not a boundary

            double right_n = n - left_n;
            double right_pos = pos - left_pos;
            double gl = 1.0 - (left_pos / left_n) * (left_pos / left_n) -
                        ((left_n - left_pos) / left_n) * ((left_n - left_pos) / left_n);
            double gr = 1.0 - (right_pos / right_n) * (right_pos / right_n) -
                        ((right_n - right_pos) / right_n) * ((right_n - right_pos) / right_n);
            double gain = gini_parent - (left_n / n) * gl - (right_n / n) * gr;
            double threshold = (sorted[k].first + sorted[k + 1].first) / 2.0;
            if (gain > best.gain + 1e-15 ||
                (gain > best.gain - 1e-15 &&
                 (f < best.feature || (f == best.feature && threshold < best.threshold)))) {
                best.gain = gain;
                best.feature = f;
                best.threshold = threshold;
            }
        }
    }
    return best;
}

struct ClassificationBuilder {
    const Samples& s;
    const ForestParams& params;
    Rng& rng;
    Tree& tree;

    int build(std::vector<std::size_t> rows, int depth) {
        double pos = 0;
        for (std::size_t r : rows) pos += s.y[r];
        double prob = pos / static_cast<double>(rows.size());

        auto leaf = [&]() {
            tree.nodes.push_back({-1, 0.0, -1, -1, prob});
            return static_cast<int>(tree.nodes.size()) - 1;
        };
        if (depth >= params.max_depth || rows.size() < static_cast<std::size_t>(params.min_samples_split) ||
            pos == 0.0 || pos == static_cast<double>(rows.size())) {
            return leaf();
        }

        std::size_t d = s.n_features();
        std::size_t mtry = params.sqrt_features
                               ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))))
                               : d;
        auto features = pick_features(d, mtry, rng);
        GiniSplit split = best_gini_split(s, rows, features);
        if (split.feature < 0 || split.gain <= 1e-12) return leaf();

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (s.x[r][static_cast<std::size_t>(split.feature)] < split.threshold ? left : right).push_back(r);
        }
        if (left.empty() || right.empty()) return leaf();

        int self = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({split.feature, split.threshold, -1, -1, 0.0});
        int l = build(std::move(left), depth + 1);
        int r = build(std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = l;
        tree.nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }
};

Tree build_classification_tree(const Samples& s, const std::vector<std::size_t>& rows,
                               const ForestParams& params, Rng& rng) {
    Tree tree;
    ClassificationBuilder{s, params, rng, tree}.build(rows, 0);
    return tree;
}

// Regression tree on gradient/hessian sums (Newton leaves), used by boosting.
struct BoostBuilder {
    const Samples& s;
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    const GbtParams& params;
    Tree& tree;

    int build(std::vector<std::size_t> rows, int depth) {
        double g = 0, h = 0;
        for (std::size_t r : rows) {
            g += grad[r];
            h += hess[r];
        }
        auto leaf = [&]() {
            tree.nodes.push_back({-1, 0.0, -1, -1, -g / (h + params.lambda)});
            return static_cast<int>(tree.nodes.size()) - 1;
        };
        if (depth >= params.max_depth || rows.size() < 2) return leaf();

        // best gain over every feature (no subsampling in boosting)
        double best_gain = 0.0;
        int best_f = -1;
        double best_thr = 0.0;
        double parent_score = g * g / (h + params.lambda);

        std::vector<std::pair<double, std::size_t>> sorted;
        for (std::size_t f = 0; f < s.n_features(); ++f) {
            sorted.clear();
            for (std::size_t r : rows) sorted.emplace_back(s.x[r][f], r);
            std::sort(sorted.begin(), sorted.end());

            double gl = 0, hl = 0;
            for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
                gl += grad[sorted[k].second];
                hl += hess[sorted[k].second];
                if (sorted[k].first == sorted[k + 1].first) continue;
                double gr = g - gl, hr = h - hl;
                if (hl < params.min_child_hess || hr < params.min_child_hess) continue;
                double gain = gl * gl / (hl + params.lambda) + gr * gr / (hr + params.lambda) - parent_score;
                double thr = (sorted[k].first + sorted[k + 1].first) / 2.0;
                if (gain > best_gain + 1e-15 ||
                    (gain > best_gain - 1e-15 && best_f >= 0 &&
                     (static_cast<int>(f) < best_f || (static_cast<int>(f) == best_f && thr < best_thr)))) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_thr = thr;
                }
            }
        }
        if (best_f < 0 || best_gain <= 1e-12) return leaf();

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (s.x[r][static_cast<std::size_t>(best_f)] < best_thr ? left : right).push_back(r);
        }
        if (left.empty() || right.empty()) return leaf();

        int self = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({best_f, best_thr, -1, -1, 0.0});
        int l = build(std::move(left), depth + 1);
        int r = build(std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = l;
        tree.nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }
};

Tree build_boost_tree(const Samples& s, const std::vector<double>& grad,
                      const std::vector<double>& hess, const GbtParams& params) {
    Tree tree;
    std::vector<std::size_t> rows(s.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    BoostBuilder{s, grad, hess, params, tree}.build(std::move(rows), 0);
    return tree;
}

}  // namespace detail

}  // namespace fseg::ml
