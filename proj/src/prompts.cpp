#include "fseg/prompts.hpp"

#include <fstream>
#include <sstream>

namespace fseg::prompts {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("cannot open template file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string body, std::set<std::string> placeholders)
    : name_(std::move(name)), body_(std::move(body)), placeholders_(std::move(placeholders)) {
    // pre-split the body into literal / placeholder pieces
    std::size_t pos = 0;
    std::set<std::string> seen;
    std::string literal;
    while (pos < body_.size()) {
        if (body_[pos] == '{') {
            std::size_t close = body_.find('}', pos + 1);
            if (close != std::string::npos) {
                std::string token = body_.substr(pos + 1, close - pos - 1);
                if (placeholders_.count(token)) {
                    if (!literal.empty()) {
                        pieces_.push_back({false, std::move(literal)});
                        literal.clear();
                    }
                    pieces_.push_back({true, token});
                    seen.insert(token);
                    pos = close + 1;
                    continue;
                }
            }
        }
        literal.push_back(body_[pos]);
        ++pos;
    }
    if (!literal.empty()) pieces_.push_back({false, std::move(literal)});

    for (const auto& p : placeholders_) {
        if (!seen.count(p)) {
            throw TemplateError("template '" + name_ + "' is missing placeholder {" + p + "}");
        }
    }
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
    for (const auto& p : placeholders_) {
        if (!values.count(p)) {
            throw TemplateError("template '" + name_ + "': no value for placeholder {" + p + "}");
        }
    }
    std::string out;
    out.reserve(body_.size());
    for (const auto& piece : pieces_) {
        if (piece.is_placeholder) {
            out += values.at(piece.text);
        } else {
            out += piece.text;
        }
    }
    return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib;
    lib.summary_ = PromptTemplate("summary", read_text_file(dir / "summary.txt"),
                                  {"linkedin_json", "org_name"});
    lib.level_proposal_ = PromptTemplate("level_proposal", read_text_file(dir / "level_proposal.txt"),
                                         {"summaries"});
    lib.level_label_ = PromptTemplate("level_label", read_text_file(dir / "level_label.txt"),
                                      {"summary"});
    lib.persona_label_ = PromptTemplate("persona_label", read_text_file(dir / "persona_label.txt"),
                                        {"summary"});
    lib.flags_label_ = PromptTemplate("flags_label", read_text_file(dir / "flags_label.txt"),
                                      {"summary"});
    lib.base_levels_ = read_text_file(dir / "base_levels.txt");
    return lib;
}

std::string spell_count(int n) {
    static const char* words[] = {"zero", "one", "two", "three", "four", "five", "six", "seven",
                                  "eight", "nine", "ten", "eleven", "twelve", "thirteen", "fourteen",
                                  "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
    if (n >= 0 && n <= 20) return words[n];
    return std::to_string(n);
}

}  // namespace fseg::prompts
