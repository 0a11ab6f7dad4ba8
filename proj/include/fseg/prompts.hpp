#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fseg::prompts {

class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A named body with {placeholder} slots. Rendering is pure substitution:
// every declared placeholder must be supplied, anything else in braces is
// literal text and left alone.
class PromptTemplate {
public:
    PromptTemplate() = default;
    PromptTemplate(std::string name, std::string body, std::set<std::string> placeholders);

    std::string render(const std::map<std::string, std::string>& values) const;

    const std::string& name() const { return name_; }
    const std::string& body() const { return body_; }
    const std::set<std::string>& placeholders() const { return placeholders_; }

private:
    struct Piece {
        bool is_placeholder = false;
        std::string text;  // literal text or placeholder name
    };

    std::string name_;
    std::string body_;
    std::set<std::string> placeholders_;
    std::vector<Piece> pieces_;
};

// The five pipeline templates plus the default base-category list, loaded
// from a prompts/ directory. Template bodies are data; do not reformat them.
class PromptLibrary {
public:
    static PromptLibrary load(const std::filesystem::path& dir);

    const PromptTemplate& summary() const { return summary_; }
    const PromptTemplate& level_proposal() const { return level_proposal_; }
    const PromptTemplate& level_label() const { return level_label_; }
    const PromptTemplate& persona_label() const { return persona_label_; }
    const PromptTemplate& flags_label() const { return flags_label_; }
    const std::string& base_levels() const { return base_levels_; }

private:
    PromptTemplate summary_, level_proposal_, level_label_, persona_label_, flags_label_;
    std::string base_levels_;
};

// "1" -> "one" ... "20" -> "twenty", digits beyond that
std::string spell_count(int n);

}  // namespace fseg::prompts
