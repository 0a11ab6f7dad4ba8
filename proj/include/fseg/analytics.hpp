#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fseg/features.hpp"

namespace fseg::analytics {

struct RateRow {
    std::string key;
    std::size_t total = 0;
    std::size_t successes = 0;

    // percent in [0,100]; absent when total == 0
    std::optional<double> rate_pct() const {
        if (total == 0) return std::nullopt;
        return 100.0 * static_cast<double>(successes) / static_cast<double>(total);
    }
};

struct FlagRatePair {
    std::string flag;
    RateRow no, yes;

    std::optional<double> gap_pp() const {
        auto a = no.rate_pct(), b = yes.rate_pct();
        if (!a || !b) return std::nullopt;
        return *b - *a;
    }
};

// 10 rows, L1..L10; rows partition the matrix.
std::vector<RateRow> success_by_level(const feat::LabeledMatrix& m);

// 20 rows, A..T; a founder counts toward every persona they carry.
std::vector<RateRow> success_by_persona(const feat::LabeledMatrix& m);

// All 23 flags, unfiltered.
std::vector<FlagRatePair> success_by_flag_all(const feat::LabeledMatrix& m);

// Display filter: keep pairs whose |yes - no| gap is defined and strictly
// greater than min_gap_pp.
std::vector<FlagRatePair> success_by_flag(const feat::LabeledMatrix& m, double min_gap_pp = 5.0);

// Aligned plain-text renderings; undefined rates print as an em dash.
// Level/persona rates show one decimal, flag rates two.
std::string render_level_table(const std::vector<RateRow>& rows);
std::string render_persona_table(const std::vector<RateRow>& rows);
std::string render_flag_table(const std::vector<FlagRatePair>& pairs);

void write_rate_csv(const std::vector<RateRow>& rows, const std::filesystem::path& path, int decimals);
void write_flag_csv(const std::vector<FlagRatePair>& pairs, const std::filesystem::path& path);

}  // namespace fseg::analytics
