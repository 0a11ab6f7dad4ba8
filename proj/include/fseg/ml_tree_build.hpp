#pragma once

#include <vector>

#include "fseg/ml.hpp"
#include "fseg/rng.hpp"

// internal tree-building entry points shared by the ensembles
namespace fseg::ml::detail {

struct GiniSplit {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

std::vector<int> pick_features(std::size_t d, std::size_t mtry, Rng& rng);

GiniSplit best_gini_split(const Samples& s, const std::vector<std::size_t>& rows,
                          const std::vector<int>& features);

Tree build_classification_tree(const Samples& s, const std::vector<std::size_t>& rows,
                               const ForestParams& params, Rng& rng);

Tree build_boost_tree(const Samples& s, const std::vector<double>& grad,
                      const std::vector<double>& hess, const GbtParams& params);

}  // namespace fseg::ml::detail
