#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "fseg/pipeline.hpp"
#include "fseg/version.hpp"

namespace {

using fseg::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& config_file) {
    cmd->add_option("--config", config_file, "JSON config file; flags override its values");
    cmd->add_option("--run-dir", config.run_dir, "run directory for artifacts/reports/cache");
    cmd->add_option("--prompts-dir", config.prompts_dir, "prompt template directory");
    cmd->add_option("--data-dir", config.data_dir, "data directory (keyword tables)");
}

void add_llm_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--backend", config.backend, "LLM backend: mock or live")
        ->check(CLI::IsMember({"mock", "live"}));
    cmd->add_option("--model", config.model_id, "model id sent to the backend");
    cmd->add_option("--endpoint", config.endpoint, "chat-completion endpoint URL");
    cmd->add_option("--mock-fixtures", config.mock_fixtures, "canned-completion fixture file");
    cmd->add_option("--concurrency", config.concurrency, "maximum in-flight completions");
    cmd->add_option("--temperature", config.temperature, "sampling temperature");
}

// config file first, then flag overrides on top
RunConfig resolve_config(const std::string& config_file, const RunConfig& flags, const CLI::App* cmd) {
    RunConfig config;
    if (!config_file.empty()) config = RunConfig::from_file(config_file);

    auto overridden = [&](const std::string& name) {
        auto* opt = cmd->get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (overridden("--run-dir")) config.run_dir = flags.run_dir;
    if (overridden("--prompts-dir")) config.prompts_dir = flags.prompts_dir;
    if (overridden("--data-dir")) config.data_dir = flags.data_dir;
    if (overridden("--successful")) config.successful_csv = flags.successful_csv;
    if (overridden("--unsuccessful")) config.unsuccessful_csv = flags.unsuccessful_csv;
    if (overridden("--n")) config.n_per_class = flags.n_per_class;
    if (overridden("--seed")) config.seed_sample = flags.seed_sample;
    if (overridden("--seed-split")) config.seed_split = flags.seed_split;
    if (overridden("--seed-models")) config.seed_models = flags.seed_models;
    if (overridden("--backend")) config.backend = flags.backend;
    if (overridden("--model")) config.model_id = flags.model_id;
    if (overridden("--endpoint")) config.endpoint = flags.endpoint;
    if (overridden("--mock-fixtures")) config.mock_fixtures = flags.mock_fixtures;
    if (overridden("--concurrency")) config.concurrency = flags.concurrency;
    if (overridden("--temperature")) config.temperature = flags.temperature;
    if (overridden("--min-flag-gap")) config.min_flag_gap_pp = flags.min_flag_gap_pp;
    if (overridden("--all-flags")) config.all_flags = flags.all_flags;
    if (overridden("--failure-tolerance")) config.failure_tolerance = flags.failure_tolerance;

    if (const char* key = std::getenv("FS_LLM_API_KEY")) config.api_key = key;
    if (const char* endpoint = std::getenv("FS_LLM_ENDPOINT")) {
        if (!overridden("--endpoint")) config.endpoint = endpoint;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fseg: founder segmentation and success-prediction pipeline"};
    app.set_version_flag("--version", fseg::kVersion);
    app.require_subcommand(1);

    RunConfig flags;
    std::string config_file;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "load founder tables, filter, draw the working sample");
    add_common_options(ingest, flags, config_file);
    ingest->add_option("--successful", flags.successful_csv, "CSV of successful founders");
    ingest->add_option("--unsuccessful", flags.unsuccessful_csv, "CSV of unsuccessful founders");
    ingest->add_option("--n", flags.n_per_class, "sample size per class");
    ingest->add_option("--seed", flags.seed_sample, "sampling seed");

    // segment
    auto* segment = app.add_subcommand("segment", "run the LLM chain over the sample");
    add_common_options(segment, flags, config_file);
    add_llm_options(segment, flags);
    segment->add_option("--failure-tolerance", flags.failure_tolerance,
                        "fraction of founders allowed to fail hard");

    // propose-taxonomy
    auto* propose = app.add_subcommand("propose-taxonomy", "ask the model for a new category list");
    add_common_options(propose, flags, config_file);
    add_llm_options(propose, flags);
    std::string kind = "level";
    int target_count = 10;
    std::string base_file;
    std::size_t num_summaries = 50;
    propose->add_option("--kind", kind, "level or persona")->check(CLI::IsMember({"level", "persona"}));
    propose->add_option("--count", target_count, "number of categories to request");
    propose->add_option("--base", base_file, "file with the starting categories");
    propose->add_option("--num-summaries", num_summaries, "summaries to feed the proposal prompt");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "build features and the success-rate tables");
    add_common_options(analyze, flags, config_file);
    analyze->add_option("--min-flag-gap", flags.min_flag_gap_pp,
                        "display filter: minimum |yes-no| gap in percentage points");
    analyze->add_flag("--all-flags", flags.all_flags, "also write the unfiltered flag table");

    // train-eval
    auto* train = app.add_subcommand("train-eval", "split, train the three models, evaluate");
    add_common_options(train, flags, config_file);
    train->add_option("--seed-split", flags.seed_split, "train/test split seed");
    train->add_option("--seed-models", flags.seed_models, "model training seed");

    // report
    auto* report = app.add_subcommand("report", "print the run's tables to stdout");
    add_common_options(report, flags, config_file);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            RunConfig config = resolve_config(config_file, flags, ingest);
            if (config.n_per_class < 1) {
                std::cerr << "fseg ingest: --n must be >= 1\n";
                return 2;
            }
            if (config.successful_csv.empty() || config.unsuccessful_csv.empty()) {
                std::cerr << "fseg ingest: --successful and --unsuccessful are required\n";
                return 2;
            }
            auto out = fseg::pipeline::cmd_ingest(config);
            std::cout << "ingest: loaded " << out.loaded_successful << "+" << out.loaded_unsuccessful
                      << " records, skipped " << out.skipped_rows << " rows, dropped "
                      << out.dropped_invalid << " invalid, sampled " << out.sampled << " -> "
                      << config.sample_file().string() << '\n';
            return 0;
        }
        if (segment->parsed()) {
            RunConfig config = resolve_config(config_file, flags, segment);
            auto out = fseg::pipeline::cmd_segment(config);
            std::cout << "segment: " << out.complete << "/" << out.founders << " founders complete, "
                      << out.failed << " with errors -> " << config.labels_file().string() << '\n';
            double failed_frac =
                out.founders == 0 ? 0.0 : static_cast<double>(out.failed) / static_cast<double>(out.founders);
            return failed_frac > config.failure_tolerance ? 1 : 0;
        }
        if (propose->parsed()) {
            RunConfig config = resolve_config(config_file, flags, propose);
            auto text = fseg::pipeline::cmd_propose_taxonomy(config, kind, target_count, base_file,
                                                             num_summaries);
            std::cout << text << '\n';
            return 0;
        }
        if (analyze->parsed()) {
            RunConfig config = resolve_config(config_file, flags, analyze);
            auto out = fseg::pipeline::cmd_analyze(config);
            std::cout << "analyze: " << out.rows << " rows (" << out.excluded << " excluded), reports in "
                      << config.reports_dir().string() << '\n';
            return 0;
        }
        if (train->parsed()) {
            RunConfig config = resolve_config(config_file, flags, train);
            auto out = fseg::pipeline::cmd_train_eval(config);
            std::cout << "train-eval: wrote " << out.rows.size() << " metric rows -> "
                      << (config.reports_dir() / "model_metrics.csv").string() << '\n';
            return 0;
        }
        if (report->parsed()) {
            RunConfig config = resolve_config(config_file, flags, report);
            fseg::pipeline::cmd_report(config, std::cout);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "fseg: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
