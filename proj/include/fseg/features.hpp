#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "fseg/edu_features.hpp"
#include "fseg/ingest.hpp"
#include "fseg/segmentation.hpp"

namespace fseg::feat {

// Layout: [highest_edu | field one-hot x10 | level | persona A..T x20 | flags x23]
inline constexpr int kWidth = 55;
inline constexpr int kHighestEduIndex = 0;
inline constexpr int kFieldOffset = 1;
inline constexpr int kLevelIndex = 11;
inline constexpr int kPersonaOffset = 12;
inline constexpr int kFlagOffset = 32;

struct FeatureVector {
    std::array<double, kWidth> values{};
};

struct MatrixRow {
    std::string founder_id;
    FeatureVector x;
    bool success = false;
};

struct LabeledMatrix {
    std::vector<MatrixRow> rows;

    static const std::vector<std::string>& column_names();
    std::size_t count_success(bool flag) const;
};

FeatureVector build_feature_vector(edu::DegreeCode degree, const edu::FieldCodeSet& fields,
                                   const seg::SegmentLabels& labels);

struct Exclusion {
    std::string founder_id;
    std::string reason;
};

struct MatrixBuild {
    LabeledMatrix matrix;
    std::vector<Exclusion> excluded;
};

// Row order follows the dataset; founders without a feature vector are
// excluded and reported (reason taken from `errors` when present).
MatrixBuild build_matrix(const Dataset& dataset,
                         const std::unordered_map<std::string, FeatureVector>& features,
                         const std::unordered_map<std::string, std::string>& errors = {});

// artifacts/features.csv: founder_id, 55 feature columns, success (0/1)
void save_csv(const LabeledMatrix& m, const std::filesystem::path& path);
LabeledMatrix load_csv(const std::filesystem::path& path);

}  // namespace fseg::feat
