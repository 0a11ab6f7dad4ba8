#include "fseg/features.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fseg/csv.hpp"

namespace fseg::feat {

namespace {

const char* kFieldShortNames[10] = {
    "math_quant",        // 0
    "bio_med",           // 1
    "finance_econ",      // 2
    "business_mgmt",     // 3
    "sales_marketing",   // 4
    "cs_ai",             // 5
    "humanities_media",  // 6
    "social_law",        // 7
    "arch_design",       // 8
    "eng_physics",       // 9
};

std::vector<std::string> make_column_names() {
    std::vector<std::string> names;
    names.reserve(kWidth);
    names.emplace_back("highest_edu");
    for (int i = 0; i < 10; ++i) {
        names.push_back("field_" + std::to_string(i) + "_" + kFieldShortNames[i]);
    }
    names.emplace_back("level");
    for (char c = 'A'; c <= 'T'; ++c) {
        names.push_back(std::string("persona_") + c);
    }
    for (const char* flag : seg::kFlagNames) {
        names.emplace_back(flag);
    }
    return names;
}

std::string format_value(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& LabeledMatrix::column_names() {
    static const std::vector<std::string> names = make_column_names();
    return names;
}

std::size_t LabeledMatrix::count_success(bool flag) const {
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.success == flag) ++n;
    return n;
}

FeatureVector build_feature_vector(edu::DegreeCode degree, const edu::FieldCodeSet& fields,
                                   const seg::SegmentLabels& labels) {
    FeatureVector v;
    v.values[kHighestEduIndex] = degree;
    for (int code : fields) {
        if (code >= 0 && code <= 9) v.values[static_cast<std::size_t>(kFieldOffset + code)] = 1.0;
    }
    v.values[kLevelIndex] = labels.level.level;
    for (char c : labels.personas.personas) {
        if (c >= 'A' && c <= 'T') v.values[static_cast<std::size_t>(kPersonaOffset + (c - 'A'))] = 1.0;
    }
    for (int i = 0; i < seg::kFlagCount; ++i) {
        v.values[static_cast<std::size_t>(kFlagOffset + i)] = labels.flags.flags[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    return v;
}

MatrixBuild build_matrix(const Dataset& dataset,
                         const std::unordered_map<std::string, FeatureVector>& features,
                         const std::unordered_map<std::string, std::string>& errors) {
    MatrixBuild out;
    for (const auto& rec : dataset.records) {
        auto it = features.find(rec.founder_id);
        if (it == features.end()) {
            auto err = errors.find(rec.founder_id);
            out.excluded.push_back(
                {rec.founder_id, err == errors.end() ? "no feature vector" : err->second});
            continue;
        }
        out.matrix.rows.push_back({rec.founder_id, it->second, rec.success});
    }
    return out;
}

void save_csv(const LabeledMatrix& m, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("features: cannot write " + path.string());

    std::vector<std::string> header;
    header.emplace_back("founder_id");
    for (const auto& c : LabeledMatrix::column_names()) header.push_back(c);
    header.emplace_back("success");
    csv::write_row(out, header);

    for (const auto& row : m.rows) {
        std::vector<std::string> fields;
        fields.reserve(kWidth + 2);
        fields.push_back(row.founder_id);
        for (double v : row.x.values) fields.push_back(format_value(v));
        fields.emplace_back(row.success ? "1" : "0");
        csv::write_row(out, fields);
    }
}

LabeledMatrix load_csv(const std::filesystem::path& path) {
    csv::Table t = csv::read_file(path);
    if (!t.errors.empty()) {
        throw std::runtime_error("features: malformed rows in " + path.string());
    }
    if (t.header.size() != kWidth + 2 || t.header.front() != "founder_id" || t.header.back() != "success") {
        throw std::runtime_error("features: unexpected header in " + path.string());
    }
    const auto& names = LabeledMatrix::column_names();
    for (int i = 0; i < kWidth; ++i) {
        if (t.header[static_cast<std::size_t>(i + 1)] != names[static_cast<std::size_t>(i)]) {
            throw std::runtime_error("features: column mismatch at " + names[static_cast<std::size_t>(i)]);
        }
    }

    LabeledMatrix m;
    for (const auto& row : t.rows) {
        MatrixRow r;
        r.founder_id = row[0];
        for (int i = 0; i < kWidth; ++i) {
            r.x.values[static_cast<std::size_t>(i)] = std::stod(row[static_cast<std::size_t>(i + 1)]);
        }
        r.success = row.back() == "1" || row.back() == "true";
        m.rows.push_back(std::move(r));
    }
    return m;
}

}  // namespace fseg::feat
