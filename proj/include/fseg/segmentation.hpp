#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fseg/ingest.hpp"
#include "fseg/llm_gateway.hpp"
#include "fseg/prompts.hpp"

namespace fseg::seg {

// ------------------------------------------------------------------ types

struct University {
    std::string name;
    std::optional<int> qs_rank;
};

struct PriorCompany {
    std::string name;
    std::string status;
    std::optional<double> net_worth_usd;
};

struct FounderSummary {
    std::string founder_id;
    std::string full_text;   // raw completion; later stages consume this
    std::string narrative;   // text before the numbered answer blocks
    std::vector<University> universities;
    std::optional<double> prior_experience_years;
    std::vector<PriorCompany> prior_companies;
};

struct LevelLabel {
    int level = 0;  // 1..10
};

struct PersonaSet {
    std::set<char> personas;  // non-empty subset of {'A'..'T'}
};

inline constexpr int kFlagCount = 23;

extern const std::array<const char*, kFlagCount> kFlagNames;

struct FlagVector {
    std::array<bool, kFlagCount> flags{};
};

struct SegmentLabels {
    std::string founder_id;
    LevelLabel level;
    PersonaSet personas;
    FlagVector flags;
};

// ------------------------------------------------------------------ parsers
//
// All three completion parsers are total: any input yields either a value or
// a typed error, never an exception.

enum class ParseErrorCode {
    none,
    no_token,      // parse_level: no L<k> token found
    out_of_range,  // parse_level: level outside 1..10
    no_list,       // no bracketed list in the text
    empty_list,
    invalid_token,  // persona letter outside A..T / non-integer flag element
    non_binary,     // flag element not 0/1
    wrong_length,   // flag list length != 23
};

const char* to_string(ParseErrorCode c);

template <typename T>
struct ParseResult {
    std::optional<T> value;
    ParseErrorCode error = ParseErrorCode::none;
    std::string message;

    bool ok() const { return value.has_value(); }
};

ParseResult<LevelLabel> parse_level(std::string_view text);
ParseResult<PersonaSet> parse_personas(std::string_view text);
ParseResult<FlagVector> parse_flags(std::string_view text);

std::string format_level(const LevelLabel& l);
std::string format_personas(const PersonaSet& p);
std::string format_flags(const FlagVector& f);

// Completion text -> narrative + three structured answer blocks. Unparseable
// blocks degrade to absent fields.
FounderSummary parse_summary(std::string founder_id, std::string_view completion);

// ------------------------------------------------------------------ chain

class SegmentationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StageError {
    std::string stage;  // summary | level | personas | flags
    std::string message;
};

struct ChainResult {
    std::string founder_id;
    std::optional<FounderSummary> summary;
    std::optional<LevelLabel> level;
    std::optional<PersonaSet> personas;
    std::optional<FlagVector> flags;
    std::vector<StageError> errors;

    bool complete() const { return summary && level && personas && flags; }
    std::optional<SegmentLabels> labels() const;
};

struct SegmenterOptions {
    std::string model_id = "gpt-4o";
    double temperature = 0.0;  // labels must be reproducible
    int max_output_tokens = 2048;
    bool retry_parse_once = true;  // one corrective re-prompt per stage
};

// Renders the pipeline prompts, drives the gateway and validates outputs.
class Segmenter {
public:
    Segmenter(const prompts::PromptLibrary& library, llm::LlmGateway& gateway,
              llm::CacheStore* cache = nullptr, SegmenterOptions options = {});

    std::string render_summary_prompt(const FounderRecord& r) const;
    std::string render_level_prompt(std::string_view summary_text) const;
    std::string render_persona_prompt(std::string_view summary_text) const;
    std::string render_flags_prompt(std::string_view summary_text) const;

    // The proposal template keeps its shipped base block and category count
    // when they match the request; other bases/counts are spliced in.
    std::string render_taxonomy_prompt(std::span<const std::string> summaries,
                                       const std::string& base_taxonomy, int target_count) const;

    FounderSummary generate_summary(const FounderRecord& r);
    LevelLabel assign_level(const FounderSummary& s);
    PersonaSet assign_personas(const FounderSummary& s);
    FlagVector assign_flags(const FounderSummary& s);
    std::string propose_taxonomy(std::span<const std::string> summaries,
                                 const std::string& base_taxonomy, int target_count);

    // summary -> level -> personas -> flags; stage failures are collected,
    // not thrown.
    ChainResult run_chain(const FounderRecord& r);

private:
    llm::LlmResponse ask(const std::string& prompt);
    template <typename T>
    T assign_with_retry(const std::string& stage, const std::string& prompt,
                        ParseResult<T> (*parser)(std::string_view), const std::string& correction);

    const prompts::PromptLibrary& library_;
    llm::LlmGateway& gateway_;
    llm::CacheStore* cache_;
    SegmenterOptions options_;
};

}  // namespace fseg::seg
