#include "fseg/edu_features.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fseg::edu {

using nlohmann::json;

namespace {

std::optional<int> year_from(const json& v) {
    auto plausible = [](long y) { return y >= 1900 && y <= 2100; };
    if (v.is_number_integer()) {
        long y = v.get<long>();
        if (plausible(y)) return static_cast<int>(y);
        return std::nullopt;
    }
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        // leading 4-digit year, e.g. "2009-01" or "2009"
        if (s.size() >= 4 && std::isdigit((unsigned char)s[0]) && std::isdigit((unsigned char)s[1]) &&
            std::isdigit((unsigned char)s[2]) && std::isdigit((unsigned char)s[3])) {
            long y = std::stol(s.substr(0, 4));
            if (plausible(y)) return static_cast<int>(y);
        }
        return std::nullopt;
    }
    if (v.is_object() && v.contains("year")) return year_from(v["year"]);
    return std::nullopt;
}

std::string string_from(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = obj.find(k);
        if (it != obj.end() && it->is_string()) return it->get<std::string>();
    }
    return {};
}

std::optional<int> year_field(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = obj.find(k);
        if (it != obj.end()) {
            auto y = year_from(*it);
            if (y) return y;
        }
    }
    return std::nullopt;
}

EducationEntry entry_from(const json& e) {
    EducationEntry out;
    out.institution = string_from(e, {"school", "institution", "school_name", "schoolName", "name"});
    out.degree_text = string_from(e, {"degree", "degree_name", "degreeName"});
    out.field_text = string_from(e, {"field_of_study", "field", "fieldOfStudy", "fields_of_study", "major"});
    out.start_year = year_field(e, {"start_year", "startYear", "start", "starts_at", "from"});
    out.end_year = year_field(e, {"end_year", "endYear", "end", "ends_at", "to"});
    if (out.start_year && out.end_year && *out.start_year > *out.end_year) {
        std::swap(out.start_year, out.end_year);
    }
    return out;
}

// lowercase, '.' removed, everything non-alphanumeric becomes a token break
std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (c == '.') continue;
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string normalize_phrase(std::string_view text) {
    auto toks = tokenize(text);
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out.push_back(' ');
        out += toks[i];
    }
    return out;
}

// phrase = normalized token sequence; match = consecutive token run
bool contains_phrase(const std::vector<std::string>& tokens, const std::string& phrase) {
    auto needle = tokenize(phrase);
    if (needle.empty() || needle.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (tokens[i + j] != needle[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool matches_any(const std::vector<std::string>& tokens, const std::vector<std::string>& phrases) {
    for (const auto& p : phrases) {
        if (contains_phrase(tokens, p)) return true;
    }
    return false;
}

}  // namespace

std::vector<EducationEntry> extract_education(std::string_view linkedin_doc) {
    std::vector<EducationEntry> out;
    json doc = json::parse(linkedin_doc, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return out;

    const json* section = nullptr;
    for (const char* key : {"education", "educations", "schools"}) {
        auto it = doc.find(key);
        if (it != doc.end()) {
            section = &*it;
            break;
        }
    }
    if (!section) return out;

    if (section->is_array()) {
        for (const auto& e : *section) {
            if (e.is_object()) out.push_back(entry_from(e));
        }
    } else if (section->is_object()) {
        out.push_back(entry_from(*section));
    }
    return out;
}

EduClassifier EduClassifier::load(const std::filesystem::path& keyword_file) {
    std::ifstream in(keyword_file);
    if (!in) throw std::runtime_error("edu: cannot open keyword file " + keyword_file.string());

    EduClassifier c;
    std::string line;
    std::string kind;
    int code = -1;
    FieldCategory* field_block = nullptr;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        auto first = trimmed.find_first_not_of(" \t");
        trimmed = first == std::string::npos ? "" : trimmed.substr(first);
        if (trimmed.empty() || trimmed[0] == '#') continue;

        if (trimmed.front() == '[') {
            auto close = trimmed.find(']');
            auto colon = trimmed.find(':');
            if (close == std::string::npos || colon == std::string::npos || colon > close) {
                throw std::runtime_error("edu: bad block header: " + trimmed);
            }
            kind = trimmed.substr(1, colon - 1);
            code = std::stoi(trimmed.substr(colon + 1, close - colon - 1));
            field_block = nullptr;
            if (kind == "degree") {
                if (code < 1 || code > 3) throw std::runtime_error("edu: degree code out of range");
            } else if (kind == "field") {
                if (code < 0 || code > 9) throw std::runtime_error("edu: field code out of range");
                c.fields_.push_back({code, {}});
                field_block = &c.fields_.back();
            } else {
                throw std::runtime_error("edu: unknown block kind '" + kind + "'");
            }
            continue;
        }

        std::string phrase = normalize_phrase(trimmed);
        if (phrase.empty()) continue;
        if (kind == "degree") {
            (code == 3 ? c.doctorate_ : code == 2 ? c.master_ : c.bachelor_).push_back(phrase);
        } else if (kind == "field") {
            field_block->phrases.push_back(phrase);
        } else {
            throw std::runtime_error("edu: keyword outside a block: " + trimmed);
        }
    }
    if (c.doctorate_.empty() || c.master_.empty() || c.bachelor_.empty() || c.fields_.empty()) {
        throw std::runtime_error("edu: keyword file incomplete: " + keyword_file.string());
    }
    return c;
}

const std::vector<std::string>& EduClassifier::degree_phrases(int code) const {
    switch (code) {
        case 3: return doctorate_;
        case 2: return master_;
        default: return bachelor_;
    }
}

DegreeCode EduClassifier::map_degree(std::string_view degree_text) const {
    auto tokens = tokenize(degree_text);
    if (tokens.empty()) return 0;
    if (matches_any(tokens, doctorate_)) return 3;
    if (matches_any(tokens, master_)) return 2;
    if (matches_any(tokens, bachelor_)) return 1;
    return 0;
}

std::optional<int> EduClassifier::map_field(std::string_view field_text) const {
    auto tokens = tokenize(field_text);
    if (tokens.empty()) return std::nullopt;
    for (const auto& cat : fields_) {
        if (matches_any(tokens, cat.phrases)) return cat.code;
    }
    return std::nullopt;
}

FieldCodeSet EduClassifier::map_field_set(std::string_view field_text) const {
    // fragment boundaries: ',', '/', ';', '&', standalone "and"
    std::vector<std::string> fragments;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            fragments.push_back(cur);
            cur.clear();
        }
    };
    for (char c : field_text) {
        if (c == ',' || c == '/' || c == ';' || c == '&') flush();
        else cur.push_back(c);
    }
    flush();

    FieldCodeSet out;
    for (const auto& frag : fragments) {
        // split on the word "and" inside the fragment
        auto tokens = tokenize(frag);
        std::vector<std::string> piece;
        std::vector<std::vector<std::string>> pieces;
        for (auto& t : tokens) {
            if (t == "and") {
                if (!piece.empty()) pieces.push_back(std::move(piece));
                piece.clear();
            } else {
                piece.push_back(std::move(t));
            }
        }
        if (!piece.empty()) pieces.push_back(std::move(piece));
        for (const auto& p : pieces) {
            for (const auto& cat : fields_) {
                if (matches_any(p, cat.phrases)) {
                    out.insert(cat.code);
                    break;
                }
            }
        }
    }
    return out;
}

DegreeCode EduClassifier::highest_education(const std::vector<EducationEntry>& entries) const {
    DegreeCode best = 0;
    for (const auto& e : entries) best = std::max(best, map_degree(e.degree_text));
    return best;
}

FieldCodeSet EduClassifier::fields_of_study(const std::vector<EducationEntry>& entries) const {
    FieldCodeSet out;
    for (const auto& e : entries) {
        auto codes = map_field_set(e.field_text);
        out.insert(codes.begin(), codes.end());
    }
    return out;
}

}  // namespace fseg::edu
