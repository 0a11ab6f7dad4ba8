#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fseg::edu {

struct EducationEntry {
    std::string institution;
    std::string degree_text;
    std::string field_text;
    std::optional<int> start_year;
    std::optional<int> end_year;
};

// 0 none/unknown, 1 bachelor, 2 master, 3 doctorate
using DegreeCode = int;

// subset of {0..9}
using FieldCodeSet = std::set<int>;

// Pulls the education section out of a profile document. Absent section or
// malformed entries degrade to an empty list / empty fields, never an error.
std::vector<EducationEntry> extract_education(std::string_view linkedin_doc);

// Keyword tables live in data/edu_keywords.txt (one category per block; field
// blocks listed in match-priority order). The classifier is loaded once and
// shared; all methods are const and thread-safe.
class EduClassifier {
public:
    static EduClassifier load(const std::filesystem::path& keyword_file);

    DegreeCode map_degree(std::string_view degree_text) const;

    // Single-category classification of one field fragment; highest-priority
    // matching category wins, absent when nothing matches.
    std::optional<int> map_field(std::string_view field_text) const;

    // Splits a compound field string on commas, slashes and the word "and",
    // then unions map_field over the fragments.
    FieldCodeSet map_field_set(std::string_view field_text) const;

    DegreeCode highest_education(const std::vector<EducationEntry>& entries) const;
    FieldCodeSet fields_of_study(const std::vector<EducationEntry>& entries) const;

    struct FieldCategory {
        int code;
        std::vector<std::string> phrases;  // normalized, token-joined by ' '
    };

    const std::vector<FieldCategory>& field_categories() const { return fields_; }
    const std::vector<std::string>& degree_phrases(int code) const;

private:
    std::vector<std::string> doctorate_, master_, bachelor_;
    std::vector<FieldCategory> fields_;  // in priority order
};

}  // namespace fseg::edu
