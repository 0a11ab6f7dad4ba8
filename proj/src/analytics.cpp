#include "fseg/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "fseg/csv.hpp"

namespace fseg::analytics {

namespace {

std::string format_rate(const std::optional<double>& rate, int decimals) {
    if (!rate) return "—";  // em dash: no data, not a zero rate
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, *rate);
    return buf;
}

std::string render_rows(const std::string& key_header, const std::vector<RateRow>& rows, int decimals) {
    std::size_t key_w = key_header.size();
    for (const auto& r : rows) key_w = std::max(key_w, r.key.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(key_w) + 2) << key_header
        << std::right << std::setw(12) << "Total count" << std::setw(18) << "Success rate (%)" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(key_w) + 2) << r.key
            << std::right << std::setw(12) << r.total
            << std::setw(18) << format_rate(r.rate_pct(), decimals) << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<RateRow> success_by_level(const feat::LabeledMatrix& m) {
    std::vector<RateRow> rows(10);
    for (int i = 0; i < 10; ++i) rows[static_cast<std::size_t>(i)].key = "L" + std::to_string(i + 1);
    for (const auto& row : m.rows) {
        int level = static_cast<int>(row.x.values[feat::kLevelIndex]);
        if (level < 1 || level > 10) continue;  // cannot happen for vectors built here
        auto& r = rows[static_cast<std::size_t>(level - 1)];
        ++r.total;
        if (row.success) ++r.successes;
    }
    return rows;
}

std::vector<RateRow> success_by_persona(const feat::LabeledMatrix& m) {
    std::vector<RateRow> rows(20);
    for (int i = 0; i < 20; ++i) rows[static_cast<std::size_t>(i)].key = std::string(1, static_cast<char>('A' + i));
    for (const auto& row : m.rows) {
        for (int i = 0; i < 20; ++i) {
            if (row.x.values[static_cast<std::size_t>(feat::kPersonaOffset + i)] != 0.0) {
                auto& r = rows[static_cast<std::size_t>(i)];
                ++r.total;
                if (row.success) ++r.successes;
            }
        }
    }
    return rows;
}

std::vector<FlagRatePair> success_by_flag_all(const feat::LabeledMatrix& m) {
    std::vector<FlagRatePair> pairs(seg::kFlagCount);
    for (int i = 0; i < seg::kFlagCount; ++i) {
        auto& p = pairs[static_cast<std::size_t>(i)];
        p.flag = seg::kFlagNames[static_cast<std::size_t>(i)];
        p.no.key = p.flag + " (No)";
        p.yes.key = p.flag + " (Yes)";
    }
    for (const auto& row : m.rows) {
        for (int i = 0; i < seg::kFlagCount; ++i) {
            bool yes = row.x.values[static_cast<std::size_t>(feat::kFlagOffset + i)] != 0.0;
            auto& r = yes ? pairs[static_cast<std::size_t>(i)].yes : pairs[static_cast<std::size_t>(i)].no;
            ++r.total;
            if (row.success) ++r.successes;
        }
    }
    return pairs;
}

std::vector<FlagRatePair> success_by_flag(const feat::LabeledMatrix& m, double min_gap_pp) {
    std::vector<FlagRatePair> out;
    for (auto& p : success_by_flag_all(m)) {
        auto gap = p.gap_pp();
        if (gap && std::abs(*gap) > min_gap_pp) out.push_back(std::move(p));
    }
    return out;
}

std::string render_level_table(const std::vector<RateRow>& rows) {
    return render_rows("Level", rows, 1);
}

std::string render_persona_table(const std::vector<RateRow>& rows) {
    return render_rows("Persona", rows, 1);
}

std::string render_flag_table(const std::vector<FlagRatePair>& pairs) {
    std::vector<RateRow> rows;
    rows.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        rows.push_back(p.no);
        rows.push_back(p.yes);
    }
    return render_rows("Flag", rows, 2);
}

void write_rate_csv(const std::vector<RateRow>& rows, const std::filesystem::path& path, int decimals) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("analytics: cannot write " + path.string());
    csv::write_row(out, {"key", "total_count", "success_count", "success_rate_pct"});
    for (const auto& r : rows) {
        auto rate = r.rate_pct();
        csv::write_row(out, {r.key, std::to_string(r.total), std::to_string(r.successes),
                             rate ? format_rate(rate, decimals) : ""});
    }
}

void write_flag_csv(const std::vector<FlagRatePair>& pairs, const std::filesystem::path& path) {
    std::vector<RateRow> rows;
    for (const auto& p : pairs) {
        rows.push_back(p.no);
        rows.push_back(p.yes);
    }
    write_rate_csv(rows, path, 2);
}

}  // namespace fseg::analytics
