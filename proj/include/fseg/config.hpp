#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fseg/ml.hpp"

namespace fseg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // inputs
    std::filesystem::path successful_csv;
    std::filesystem::path unsuccessful_csv;

    // sampling / splitting
    std::size_t n_per_class = 150;
    std::uint64_t seed_sample = 7;
    std::uint64_t seed_split = 17;
    std::uint64_t seed_models = 42;

    // LLM backend
    std::string backend = "mock";  // mock | live
    std::string model_id = "gpt-4o";
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string api_key;  // from FS_LLM_API_KEY; never written to disk
    std::filesystem::path mock_fixtures;  // optional canned-completion file
    double temperature = 0.0;
    int max_output_tokens = 2048;
    int concurrency = 4;
    int retry_attempts = 5;
    int retry_backoff_ms = 1000;

    // models
    double decision_threshold = 0.5;
    ml::ForestParams forest;
    ml::GbtParams gbt;

    // analytics
    double min_flag_gap_pp = 5.0;
    bool all_flags = false;

    // run layout
    std::filesystem::path run_dir = "run";
    std::filesystem::path prompts_dir;  // auto-located when empty
    std::filesystem::path data_dir;
    double failure_tolerance = 0.0;  // fraction of founders allowed to hard-fail

    std::filesystem::path artifacts_dir() const { return run_dir / "artifacts"; }
    std::filesystem::path reports_dir() const { return run_dir / "reports"; }
    std::filesystem::path cache_file() const { return run_dir / "cache" / "llm.jsonl"; }
    std::filesystem::path sample_file() const { return artifacts_dir() / "sample.jsonl"; }
    std::filesystem::path labels_file() const { return artifacts_dir() / "labels.jsonl"; }
    std::filesystem::path features_file() const { return artifacts_dir() / "features.csv"; }
    std::filesystem::path manifest_file() const { return run_dir / "manifest.json"; }

    void validate() const;

    // the semantic part of the config (inputs, seeds, parameters — not the
    // run directory), canonically serialized; hashed into the manifest
    nlohmann::json semantic_json() const;
    std::string config_hash() const;

    static RunConfig from_file(const std::filesystem::path& path);
    void apply_json(const nlohmann::json& j);
};

}  // namespace fseg
