#include "fseg/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "fseg/hash.hpp"

namespace fseg {

using nlohmann::json;

void RunConfig::validate() const {
    if (n_per_class < 1) throw ConfigError("sample size per class must be >= 1");
    if (backend != "mock" && backend != "live") {
        throw ConfigError("backend must be 'mock' or 'live', got '" + backend + "'");
    }
    if (backend == "live" && api_key.empty()) {
        throw ConfigError("live backend requires FS_LLM_API_KEY to be set");
    }
    if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (decision_threshold <= 0.0 || decision_threshold >= 1.0) {
        throw ConfigError("decision threshold must lie in (0,1)");
    }
    if (forest.n_trees < 1 || gbt.rounds < 0) throw ConfigError("bad model parameters");
    if (failure_tolerance < 0.0 || failure_tolerance > 1.0) {
        throw ConfigError("failure tolerance must lie in [0,1]");
    }
}

json RunConfig::semantic_json() const {
    return json{
        {"inputs", {{"successful", successful_csv.string()}, {"unsuccessful", unsuccessful_csv.string()}}},
        {"sampling", {{"n_per_class", n_per_class}, {"seed_sample", seed_sample}}},
        {"split", {{"seed_split", seed_split}}},
        {"llm",
         {{"backend", backend},
          {"model_id", model_id},
          {"temperature", temperature},
          {"max_output_tokens", max_output_tokens}}},
        {"models",
         {{"seed_models", seed_models},
          {"threshold", decision_threshold},
          {"forest",
           {{"n_trees", forest.n_trees}, {"max_depth", forest.max_depth}, {"bootstrap", forest.bootstrap},
            {"sqrt_features", forest.sqrt_features}}},
          {"gbt",
           {{"rounds", gbt.rounds}, {"learning_rate", gbt.learning_rate}, {"max_depth", gbt.max_depth},
            {"lambda", gbt.lambda}}}}},
        {"analytics", {{"min_flag_gap_pp", min_flag_gap_pp}}},
    };
}

std::string RunConfig::config_hash() const { return sha256_hex(semantic_json().dump()); }

void RunConfig::apply_json(const json& j) {
    auto get_path = [&](const char* key, std::filesystem::path& into) {
        if (j.contains(key)) into = j.at(key).get<std::string>();
    };
    get_path("successful_csv", successful_csv);
    get_path("unsuccessful_csv", unsuccessful_csv);
    get_path("run_dir", run_dir);
    get_path("prompts_dir", prompts_dir);
    get_path("data_dir", data_dir);
    get_path("mock_fixtures", mock_fixtures);

    if (j.contains("n_per_class")) n_per_class = j.at("n_per_class").get<std::size_t>();
    if (j.contains("seed_sample")) seed_sample = j.at("seed_sample").get<std::uint64_t>();
    if (j.contains("seed_split")) seed_split = j.at("seed_split").get<std::uint64_t>();
    if (j.contains("seed_models")) seed_models = j.at("seed_models").get<std::uint64_t>();
    if (j.contains("backend")) backend = j.at("backend").get<std::string>();
    if (j.contains("model_id")) model_id = j.at("model_id").get<std::string>();
    if (j.contains("endpoint")) endpoint = j.at("endpoint").get<std::string>();
    if (j.contains("temperature")) temperature = j.at("temperature").get<double>();
    if (j.contains("max_output_tokens")) max_output_tokens = j.at("max_output_tokens").get<int>();
    if (j.contains("concurrency")) concurrency = j.at("concurrency").get<int>();
    if (j.contains("retry_attempts")) retry_attempts = j.at("retry_attempts").get<int>();
    if (j.contains("retry_backoff_ms")) retry_backoff_ms = j.at("retry_backoff_ms").get<int>();
    if (j.contains("decision_threshold")) decision_threshold = j.at("decision_threshold").get<double>();
    if (j.contains("min_flag_gap_pp")) min_flag_gap_pp = j.at("min_flag_gap_pp").get<double>();
    if (j.contains("all_flags")) all_flags = j.at("all_flags").get<bool>();
    if (j.contains("failure_tolerance")) failure_tolerance = j.at("failure_tolerance").get<double>();

    if (j.contains("forest")) {
        const auto& f = j.at("forest");
        if (f.contains("n_trees")) forest.n_trees = f.at("n_trees").get<int>();
        if (f.contains("max_depth")) forest.max_depth = f.at("max_depth").get<int>();
        if (f.contains("bootstrap")) forest.bootstrap = f.at("bootstrap").get<bool>();
        if (f.contains("sqrt_features")) forest.sqrt_features = f.at("sqrt_features").get<bool>();
        if (f.contains("n_threads")) forest.n_threads = f.at("n_threads").get<int>();
    }
    if (j.contains("gbt")) {
        const auto& g = j.at("gbt");
        if (g.contains("rounds")) gbt.rounds = g.at("rounds").get<int>();
        if (g.contains("learning_rate")) gbt.learning_rate = g.at("learning_rate").get<double>();
        if (g.contains("max_depth")) gbt.max_depth = g.at("max_depth").get<int>();
        if (g.contains("lambda")) gbt.lambda = g.at("lambda").get<double>();
    }
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bad config file " + path.string() + ": " + e.what());
    }
    RunConfig cfg;
    cfg.apply_json(j);
    return cfg;
}

}  // namespace fseg
