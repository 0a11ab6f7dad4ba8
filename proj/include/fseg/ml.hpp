#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fseg/features.hpp"

namespace fseg::ml {

// ------------------------------------------------------------------ data

struct Samples {
    std::vector<std::vector<double>> x;
    std::vector<int> y;  // 0/1

    std::size_t size() const { return x.size(); }
    std::size_t n_features() const { return x.empty() ? 0 : x.front().size(); }
    std::size_t count(int label) const;
};

Samples samples_from_matrix(const feat::LabeledMatrix& m, std::span<const std::size_t> idx);

// 240-row train set plus the two fixed test mixes: test1 = 28 negatives /
// 2 positives, test2 = 15 / 15. With more than 150 rows per class the extra
// rows all land in train.
struct SplitSpec {
    std::size_t test1_neg = 28, test1_pos = 2;
    std::size_t test2_neg = 15, test2_pos = 15;
    std::size_t min_per_class = 150;
};

struct Split {
    Samples train, test1, test2;
    std::vector<std::size_t> train_idx, test1_idx, test2_idx;  // rows of the source matrix
};

class SplitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Split make_split(const feat::LabeledMatrix& m, std::uint64_t seed, const SplitSpec& spec = {});

// ------------------------------------------------------------------ metrics

struct ConfusionMatrix {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

struct EvalReport {
    double accuracy = 0.0;
    std::optional<double> precision;  // absent when no positive predictions
    std::optional<double> f1;
    std::optional<double> tpr;        // absent when the test set has no positives
};

EvalReport metrics_from_confusion(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_predictions(std::span<const int> pred, std::span<const int> label);

// ------------------------------------------------------------------ models

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual double score(std::span<const double> x) const = 0;
    virtual const char* kind() const = 0;
    virtual nlohmann::json to_json() const = 0;

    bool predict(std::span<const double> x) const { return score(x) >= threshold; }

    double threshold = 0.5;
};

std::pair<EvalReport, ConfusionMatrix> evaluate(const Classifier& model, const Samples& test);

// Least squares of the 0/1 label on the features plus an intercept,
// ridge-stabilized; classification by thresholding the fitted score.
class LinearModel final : public Classifier {
public:
    static LinearModel train(const Samples& train, double ridge = 1e-6, double threshold = 0.5);

    double score(std::span<const double> x) const override;
    const char* kind() const override { return "linear"; }
    nlohmann::json to_json() const override;
    static LinearModel from_json(const nlohmann::json& j);

    double intercept = 0.0;
    std::vector<double> weights;
};

// index-linked node storage shared by the tree ensembles
struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;  // leaf payload: class probability / boosting weight
};

struct Tree {
    std::vector<TreeNode> nodes;
    double eval(std::span<const double> x) const;
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 8;
    int min_samples_split = 2;
    bool bootstrap = true;
    bool sqrt_features = true;  // per-split feature subsampling
    std::uint64_t seed = 0;
    int n_threads = 1;  // results are independent of thread count
};

// Bootstrap-bagged CART with Gini splits; score = fraction of trees voting
// positive.
class ForestModel final : public Classifier {
public:
    static ForestModel train(const Samples& train, const ForestParams& params);

    double score(std::span<const double> x) const override;
    const char* kind() const override { return "forest"; }
    nlohmann::json to_json() const override;
    static ForestModel from_json(const nlohmann::json& j);

    ForestParams params;
    std::vector<Tree> trees;
};

struct GbtParams {
    int rounds = 200;
    double learning_rate = 0.1;
    int max_depth = 3;
    double lambda = 1.0;  // L2 on leaf weights
    double min_child_hess = 1e-6;
    std::uint64_t seed = 0;
};

// Additive regression trees on logistic loss; score = sigmoid(raw margin).
class GbtModel final : public Classifier {
public:
    static GbtModel train(const Samples& train, const GbtParams& params,
                          std::vector<double>* train_loss_history = nullptr);

    double score(std::span<const double> x) const override;
    double raw_score(std::span<const double> x) const;
    const char* kind() const override { return "gbt"; }
    nlohmann::json to_json() const override;
    static GbtModel from_json(const nlohmann::json& j);

    GbtParams params;
    double base_score = 0.0;  // log-odds of the training base rate
    std::vector<Tree> trees;
};

// ------------------------------------------------------------------ persistence

// Versioned JSON container; see README for the schema.
void save_model(const Classifier& model, const std::filesystem::path& path);
std::unique_ptr<Classifier> load_model(const std::filesystem::path& path);

}  // namespace fseg::ml
