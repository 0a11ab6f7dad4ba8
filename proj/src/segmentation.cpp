#include "fseg/segmentation.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace fseg::seg {

const std::array<const char*, kFlagCount> kFlagNames = {
    "is_firsttime_founder",
    "is_researcher",
    "is_phd",
    "is_scholarship",
    "is_young_grad",
    "is_dropout",
    "top_tier_uni",
    "multiple_degrees",
    "entrepreneurship_education",
    "few_years_experience",
    "decade_experience",
    "big_tech_experience",
    "comm_experience",
    "exec_experience",
    "is_investor",
    "is_board_member",
    "international_uni",
    "lived_multiple_countries",
    "has_job_hopped",
    "has_promotions",
    "is_top_tier_consultant",
    "is_top_tier_banker",
    "founded_under_30",
};

const char* to_string(ParseErrorCode c) {
    switch (c) {
        case ParseErrorCode::none: return "none";
        case ParseErrorCode::no_token: return "no_token";
        case ParseErrorCode::out_of_range: return "out_of_range";
        case ParseErrorCode::no_list: return "no_list";
        case ParseErrorCode::empty_list: return "empty_list";
        case ParseErrorCode::invalid_token: return "invalid_token";
        case ParseErrorCode::non_binary: return "non_binary";
        case ParseErrorCode::wrong_length: return "wrong_length";
    }
    return "?";
}

// ------------------------------------------------------------------ parsers

ParseResult<LevelLabel> parse_level(std::string_view text) {
    // first L<digits> token, case-insensitive; the full digit run counts,
    // so "L11" is out_of_range rather than a sneaky L1
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != 'L' && c != 'l') continue;
        if (i > 0) {
            unsigned char prev = static_cast<unsigned char>(text[i - 1]);
            if (std::isalnum(prev)) continue;  // inside a word
        }
        std::size_t j = i + 1;
        // tolerate "L 7" / "L-7"
        while (j < text.size() && (text[j] == ' ' || text[j] == '-')) ++j;
        if (j >= text.size() || !std::isdigit(static_cast<unsigned char>(text[j]))) continue;
        long value = 0;
        std::size_t digits = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            value = value * 10 + (text[j] - '0');
            ++j;
            if (++digits > 6) break;
        }
        if (value < 1 || value > 10) {
            return {std::nullopt, ParseErrorCode::out_of_range,
                    "level L" + std::to_string(value) + " outside 1..10"};
        }
        return {LevelLabel{static_cast<int>(value)}, ParseErrorCode::none, {}};
    }
    return {std::nullopt, ParseErrorCode::no_token, "no level token found"};
}

namespace {

// last non-nested [ ... ] span, contents only
std::optional<std::string_view> last_bracketed(std::string_view text) {
    std::size_t open = text.rfind('[');
    while (open != std::string_view::npos) {
        std::size_t close = text.find(']', open + 1);
        if (close != std::string_view::npos) {
            return text.substr(open + 1, close - open - 1);
        }
        if (open == 0) break;
        open = text.rfind('[', open - 1);
    }
    return std::nullopt;
}

std::vector<std::string> split_trim(std::string_view inner) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&]() {
        std::size_t a = cur.find_first_not_of(" \t\r\n\"'()");
        std::size_t b = cur.find_last_not_of(" \t\r\n\"'().");
        out.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
        cur.clear();
    };
    for (char c : inner) {
        if (c == ',') flush();
        else cur.push_back(c);
    }
    flush();
    return out;
}

}  // namespace

ParseResult<PersonaSet> parse_personas(std::string_view text) {
    auto inner = last_bracketed(text);
    if (!inner) return {std::nullopt, ParseErrorCode::no_list, "no bracketed list found"};

    auto tokens = split_trim(*inner);
    PersonaSet set;
    for (auto& tok : tokens) {
        if (tok.empty()) {
            if (tokens.size() == 1) break;  // "[]"
            return {std::nullopt, ParseErrorCode::invalid_token, "empty persona token"};
        }
        if (tok.size() != 1) {
            return {std::nullopt, ParseErrorCode::invalid_token, "not a persona letter: '" + tok + "'"};
        }
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
        if (c < 'A' || c > 'T') {
            return {std::nullopt, ParseErrorCode::invalid_token, std::string("persona outside A..T: '") + tok + "'"};
        }
        set.personas.insert(c);
    }
    if (set.personas.empty()) {
        return {std::nullopt, ParseErrorCode::empty_list, "persona list is empty"};
    }
    return {std::move(set), ParseErrorCode::none, {}};
}

ParseResult<FlagVector> parse_flags(std::string_view text) {
    auto inner = last_bracketed(text);
    if (!inner) return {std::nullopt, ParseErrorCode::no_list, "no bracketed list found"};

    auto tokens = split_trim(*inner);
    if (tokens.size() == 1 && tokens[0].empty()) {
        return {std::nullopt, ParseErrorCode::empty_list, "flag list is empty"};
    }
    std::vector<int> values;
    for (auto& tok : tokens) {
        if (tok.size() != 1 || (tok[0] != '0' && tok[0] != '1')) {
            bool numeric = !tok.empty() &&
                           std::all_of(tok.begin(), tok.end(),
                                       [](unsigned char c) { return std::isdigit(c); });
            return {std::nullopt, numeric ? ParseErrorCode::non_binary : ParseErrorCode::invalid_token,
                    "flag element not 0/1: '" + tok + "'"};
        }
        values.push_back(tok[0] - '0');
    }
    if (values.size() != kFlagCount) {
        return {std::nullopt, ParseErrorCode::wrong_length,
                "expected " + std::to_string(kFlagCount) + " flags, got " + std::to_string(values.size())};
    }
    FlagVector fv;
    for (int i = 0; i < kFlagCount; ++i) fv.flags[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i)] == 1;
    return {fv, ParseErrorCode::none, {}};
}

std::string format_level(const LevelLabel& l) { return "L" + std::to_string(l.level); }

std::string format_personas(const PersonaSet& p) {
    std::string out = "[";
    bool first = true;
    for (char c : p.personas) {
        if (!first) out += ", ";
        out.push_back(c);
        first = false;
    }
    out += "]";
    return out;
}

std::string format_flags(const FlagVector& f) {
    std::string out = "[";
    for (int i = 0; i < kFlagCount; ++i) {
        if (i) out.push_back(',');
        out.push_back(f.flags[static_cast<std::size_t>(i)] ? '1' : '0');
    }
    out += "]";
    return out;
}

// ------------------------------------------------------------------ summary

namespace {

// line offsets of the last "1)", "2)", "3)" markers, in order
struct AnswerBlocks {
    std::string narrative;
    std::string block1, block2, block3;
    bool found = false;
};

std::size_t find_last_marker(std::string_view text, char digit, std::size_t before) {
    // marker = start-of-line, optional whitespace, digit, ')'
    std::size_t best = std::string_view::npos;
    std::size_t pos = 0;
    while (pos < text.size() && pos < before) {
        std::size_t line_start = pos;
        std::size_t nl = text.find('\n', pos);
        std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
        std::size_t i = line_start;
        while (i < line_end && (text[i] == ' ' || text[i] == '\t' || text[i] == '-' || text[i] == '*')) ++i;
        if (i + 1 < line_end && text[i] == digit && text[i + 1] == ')') {
            if (line_start < before) best = line_start;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return best;
}

AnswerBlocks split_answers(std::string_view text) {
    AnswerBlocks out;
    std::size_t p3 = find_last_marker(text, '3', text.size());
    std::size_t p2 = find_last_marker(text, '2', p3 == std::string_view::npos ? text.size() : p3);
    std::size_t p1 = find_last_marker(text, '1', p2 == std::string_view::npos ? text.size() : p2);
    if (p1 == std::string_view::npos || p2 == std::string_view::npos || p3 == std::string_view::npos) {
        out.narrative = std::string(text);
        return out;
    }
    out.found = true;
    out.narrative = std::string(text.substr(0, p1));
    out.block1 = std::string(text.substr(p1, p2 - p1));
    out.block2 = std::string(text.substr(p2, p3 - p2));
    out.block3 = std::string(text.substr(p3));
    return out;
}

std::string trim(std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> answer_lines(const std::string& block) {
    // drop the first line (the restated question), keep the rest
    std::vector<std::string> lines;
    std::istringstream in(block);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::optional<double> parse_net_worth(std::string tok) {
    tok = trim(tok);
    while (!tok.empty() && (tok.back() == '.' || tok.back() == ';')) tok.pop_back();
    if (tok.empty()) return std::nullopt;
    std::string lower;
    for (char c : tok) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower.find("unknown") != std::string::npos || lower.find("n/a") != std::string::npos ||
        lower.find("not available") != std::string::npos) {
        return std::nullopt;
    }
    static const std::regex re(R"(\$?\s*([0-9]+(?:\.[0-9]+)?)\s*([KkMmBb])?)");
    std::smatch m;
    if (!std::regex_search(tok, m, re)) return std::nullopt;
    double value = std::stod(m[1].str());
    if (m[2].matched) {
        char unit = static_cast<char>(std::tolower(static_cast<unsigned char>(m[2].str()[0])));
        if (unit == 'k') value *= 1e3;
        else if (unit == 'm') value *= 1e6;
        else if (unit == 'b') value *= 1e9;
    }
    return value;
}

}  // namespace

FounderSummary parse_summary(std::string founder_id, std::string_view completion) {
    FounderSummary s;
    s.founder_id = std::move(founder_id);
    s.full_text = std::string(completion);

    AnswerBlocks blocks = split_answers(completion);
    s.narrative = trim(blocks.narrative);
    if (!blocks.found) return s;

    // 1) universities: lines shaped "Name, #53." (rank may be N/A)
    static const std::regex uni_re(R"(^\s*[-*]?\s*(.+?),\s*#\s*([0-9]{1,4}|N/?A)\s*[.;,]?\s*$)",
                                   std::regex::icase);
    for (const auto& line : answer_lines(blocks.block1)) {
        std::smatch m;
        if (!std::regex_match(line, m, uni_re)) continue;
        University u;
        u.name = trim(m[1].str());
        std::string rank = m[2].str();
        if (!rank.empty() && std::isdigit(static_cast<unsigned char>(rank[0]))) {
            u.qs_rank = std::stoi(rank);
        }
        s.universities.push_back(std::move(u));
    }

    // 2) total prior work experience in years
    static const std::regex years_re(R"(([0-9]+(?:\.[0-9]+)?)\s*(?:years?|yrs?)\b)", std::regex::icase);
    {
        std::smatch m;
        std::string body = blocks.block2;
        // skip the restated question, which contains "(in years)"
        auto lines = answer_lines(blocks.block2);
        std::string joined;
        for (const auto& l : lines) joined += l + "\n";
        if (std::regex_search(joined, m, years_re)) {
            s.prior_experience_years = std::stod(m[1].str());
        } else {
            static const std::regex bare_re(R"(^\s*[-*]?\s*([0-9]+(?:\.[0-9]+)?)\s*\.?\s*$)");
            for (const auto& l : lines) {
                if (std::regex_match(l, m, bare_re)) {
                    s.prior_experience_years = std::stod(m[1].str());
                    break;
                }
            }
        }
        if (s.prior_experience_years && *s.prior_experience_years < 0) {
            s.prior_experience_years = std::nullopt;
        }
    }

    // 3) prior companies: "company, status, net worth"
    for (const auto& line : answer_lines(blocks.block3)) {
        std::string lower;
        for (char c : line) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (lower.find("not available") != std::string::npos || lower == "none" || lower == "n/a") continue;
        std::vector<std::string> parts;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                parts.push_back(trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        parts.push_back(trim(cur));
        if (parts.size() < 2 || parts[0].empty()) continue;
        PriorCompany pc;
        pc.name = parts[0];
        while (!pc.name.empty() && (pc.name.front() == '-' || pc.name.front() == '*' || pc.name.front() == ' ')) {
            pc.name.erase(pc.name.begin());
        }
        pc.status = parts[1];
        while (!pc.status.empty() && pc.status.back() == '.') pc.status.pop_back();
        if (parts.size() >= 3) pc.net_worth_usd = parse_net_worth(parts[2]);
        s.prior_companies.push_back(std::move(pc));
    }

    return s;
}

// ------------------------------------------------------------------ chain

std::optional<SegmentLabels> ChainResult::labels() const {
    if (!complete()) return std::nullopt;
    SegmentLabels out;
    out.founder_id = founder_id;
    out.level = *level;
    out.personas = *personas;
    out.flags = *flags;
    return out;
}

Segmenter::Segmenter(const prompts::PromptLibrary& library, llm::LlmGateway& gateway,
                     llm::CacheStore* cache, SegmenterOptions options)
    : library_(library), gateway_(gateway), cache_(cache), options_(std::move(options)) {}

std::string Segmenter::render_summary_prompt(const FounderRecord& r) const {
    return library_.summary().render({{"linkedin_json", r.linkedin_doc}, {"org_name", r.org_name}});
}

std::string Segmenter::render_level_prompt(std::string_view summary_text) const {
    return library_.level_label().render({{"summary", std::string(summary_text)}});
}

std::string Segmenter::render_persona_prompt(std::string_view summary_text) const {
    return library_.persona_label().render({{"summary", std::string(summary_text)}});
}

std::string Segmenter::render_flags_prompt(std::string_view summary_text) const {
    return library_.flags_label().render({{"summary", std::string(summary_text)}});
}

namespace {

std::size_t count_nonempty_lines(const std::string& text) {
    std::size_t n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
    }
    return n;
}

std::string replace_word(std::string text, const std::string& from, const std::string& to) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t hit = text.find(from, pos);
        if (hit == std::string::npos) {
            out += text.substr(pos);
            break;
        }
        bool left_ok = hit == 0 || !std::isalnum(static_cast<unsigned char>(text[hit - 1]));
        std::size_t end = hit + from.size();
        bool right_ok = end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
        out += text.substr(pos, hit - pos);
        out += (left_ok && right_ok) ? to : from;
        pos = end;
    }
    return out;
}

}  // namespace

std::string Segmenter::render_taxonomy_prompt(std::span<const std::string> summaries,
                                              const std::string& base_taxonomy,
                                              int target_count) const {
    if (summaries.empty()) throw SegmentationError("taxonomy proposal needs at least one summary");

    std::string joined;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        if (i) joined += ",\n\n";
        joined += summaries[i];
    }
    std::string prompt = library_.level_proposal().render({{"summaries", joined}});

    // The shipped template carries the default five-level base block and the
    // word "ten"; requests that differ get those spliced.
    std::string base = base_taxonomy.empty() ? library_.base_levels() : base_taxonomy;
    std::string shipped = library_.base_levels();
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
        return s;
    };
    if (strip(base) != strip(shipped)) {
        std::size_t open = prompt.find("$$$");
        std::size_t close = open == std::string::npos ? std::string::npos : prompt.find("$$$", open + 3);
        if (open == std::string::npos || close == std::string::npos) {
            throw SegmentationError("taxonomy template is missing its $$$ base block");
        }
        prompt = prompt.substr(0, open + 3) + "\n" + strip(base) + "\n  " + prompt.substr(close);
        std::size_t base_count = count_nonempty_lines(base);
        prompt = replace_word(prompt, "five", prompts::spell_count(static_cast<int>(base_count)));
    }
    if (target_count != 10) {
        prompt = replace_word(prompt, "ten", prompts::spell_count(target_count));
    }
    return prompt;
}

llm::LlmResponse Segmenter::ask(const std::string& prompt) {
    llm::LlmRequest req{options_.model_id, prompt, options_.temperature, options_.max_output_tokens};
    if (cache_) return gateway_.cached_complete(req, *cache_);
    return gateway_.complete(req);
}

FounderSummary Segmenter::generate_summary(const FounderRecord& r) {
    llm::LlmResponse res = ask(render_summary_prompt(r));
    return parse_summary(r.founder_id, res.text);
}

template <typename T>
T Segmenter::assign_with_retry(const std::string& stage, const std::string& prompt,
                               ParseResult<T> (*parser)(std::string_view),
                               const std::string& correction) {
    llm::LlmResponse res = ask(prompt);
    ParseResult<T> parsed = parser(res.text);
    if (parsed.ok()) return *parsed.value;
    if (!options_.retry_parse_once) {
        throw SegmentationError(stage + ": " + parsed.message);
    }
    std::string retry_prompt = prompt + "\n\nYour previous response was:\n" + res.text + "\n\n" + correction;
    llm::LlmResponse second = ask(retry_prompt);
    ParseResult<T> reparsed = parser(second.text);
    if (reparsed.ok()) return *reparsed.value;
    throw SegmentationError(stage + ": unparseable after retry: " + reparsed.message);
}

LevelLabel Segmenter::assign_level(const FounderSummary& s) {
    if (s.narrative.empty()) throw SegmentationError("level: summary narrative is empty");
    return assign_with_retry<LevelLabel>(
        "level", render_level_prompt(s.full_text), parse_level,
        "The output should ONLY be the level assignment, example \"L10\".");
}

PersonaSet Segmenter::assign_personas(const FounderSummary& s) {
    if (s.narrative.empty()) throw SegmentationError("personas: summary narrative is empty");
    return assign_with_retry<PersonaSet>(
        "personas", render_persona_prompt(s.full_text), parse_personas,
        "The output should ONLY be the persona assignment(s) in a list format, example \"[D, J]\".");
}

FlagVector Segmenter::assign_flags(const FounderSummary& s) {
    if (s.narrative.empty()) throw SegmentationError("flags: summary narrative is empty");
    return assign_with_retry<FlagVector>(
        "flags", render_flags_prompt(s.full_text), parse_flags,
        "The output should ONLY be the integer list of length 23 containing 0s and 1s.");
}

std::string Segmenter::propose_taxonomy(std::span<const std::string> summaries,
                                        const std::string& base_taxonomy, int target_count) {
    llm::LlmResponse res = ask(render_taxonomy_prompt(summaries, base_taxonomy, target_count));
    if (res.text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw llm::GatewayError(llm::ErrorKind::empty_completion, "taxonomy proposal came back empty");
    }
    return res.text;
}

ChainResult Segmenter::run_chain(const FounderRecord& r) {
    ChainResult out;
    out.founder_id = r.founder_id;

    try {
        out.summary = generate_summary(r);
    } catch (const std::exception& e) {
        out.errors.push_back({"summary", e.what()});
        return out;  // later stages depend on the summary
    }

    try {
        out.level = assign_level(*out.summary);
    } catch (const std::exception& e) {
        out.errors.push_back({"level", e.what()});
    }
    try {
        out.personas = assign_personas(*out.summary);
    } catch (const std::exception& e) {
        out.errors.push_back({"personas", e.what()});
    }
    try {
        out.flags = assign_flags(*out.summary);
    } catch (const std::exception& e) {
        out.errors.push_back({"flags", e.what()});
    }
    return out;
}

}  // namespace fseg::seg
