#include "fseg/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fseg/analytics.hpp"
#include "fseg/hash.hpp"
#include "fseg/resources.hpp"
#include "fseg/version.hpp"

namespace fseg::pipeline {

using nlohmann::json;

namespace {

std::filesystem::path prompts_dir(const RunConfig& config) {
    return locate_resource_dir("prompts", config.prompts_dir);
}

std::filesystem::path data_dir(const RunConfig& config) {
    return locate_resource_dir("data", config.data_dir);
}

seg::SegmenterOptions segmenter_options(const RunConfig& config) {
    seg::SegmenterOptions opt;
    opt.model_id = config.model_id;
    opt.temperature = config.temperature;
    opt.max_output_tokens = config.max_output_tokens;
    return opt;
}

std::string relative_to_run(const RunConfig& config, const std::filesystem::path& p) {
    return std::filesystem::relative(p, config.run_dir).generic_string();
}

}  // namespace

std::unique_ptr<llm::LlmGateway> make_gateway(const RunConfig& config) {
    llm::RetryPolicy retry;
    retry.max_attempts = config.retry_attempts;
    retry.initial_backoff = std::chrono::milliseconds(config.retry_backoff_ms);

    std::unique_ptr<llm::Backend> backend;
    if (config.backend == "mock") {
        auto mock = std::make_unique<llm::MockBackend>();
        if (!config.mock_fixtures.empty()) mock->load_fixture_file(config.mock_fixtures);
        backend = std::move(mock);
    } else {
        llm::HttpBackendConfig http;
        http.endpoint_url = config.endpoint;
        http.api_key = config.api_key;
        backend = llm::make_http_backend(std::move(http));
    }
    return std::make_unique<llm::LlmGateway>(std::move(backend), retry, config.concurrency);
}

void update_manifest(const RunConfig& config, const std::string& step,
                     const std::map<std::string, std::uint64_t>& stats) {
    json manifest;
    {
        std::ifstream in(config.manifest_file());
        if (in) {
            manifest = json::parse(in, nullptr, false);
            if (manifest.is_discarded()) manifest = json::object();
        }
    }
    manifest["app"] = "fseg";
    manifest["version"] = kVersion;
    manifest["config_hash"] = config.config_hash();
    manifest["config"] = config.semantic_json();

    json step_stats = json::object();
    for (const auto& [k, v] : stats) step_stats[k] = v;
    manifest["steps"][step] = step_stats;

    json artifacts = json::object();
    for (const auto& p : {config.sample_file(), config.labels_file(), config.features_file()}) {
        if (std::filesystem::exists(p)) artifacts[relative_to_run(config, p)] = sha256_file_hex(p);
    }
    if (std::filesystem::is_directory(config.reports_dir())) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(config.reports_dir())) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& p : files) artifacts[relative_to_run(config, p)] = sha256_file_hex(p);
    }
    if (std::filesystem::is_directory(config.artifacts_dir() / "models")) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(config.artifacts_dir() / "models")) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& p : files) artifacts[relative_to_run(config, p)] = sha256_file_hex(p);
    }
    manifest["artifacts"] = artifacts;

    std::filesystem::create_directories(config.run_dir);
    std::ofstream out(config.manifest_file(), std::ios::binary);
    out << manifest.dump(2) << '\n';
}

// ------------------------------------------------------------------ ingest

IngestOutcome cmd_ingest(const RunConfig& config) {
    config.validate();

    LoadReport successful = load_founder_table(config.successful_csv, true);
    LoadReport unsuccessful = load_founder_table(config.unsuccessful_csv, false);
    for (const auto& skip : successful.skipped) {
        std::cerr << "[fseg] ingest: skipped " << skip.source << " row " << skip.record << ": "
                  << skip.reason << '\n';
    }
    for (const auto& skip : unsuccessful.skipped) {
        std::cerr << "[fseg] ingest: skipped " << skip.source << " row " << skip.record << ": "
                  << skip.reason << '\n';
    }

    Dataset merged = merge_and_flag(successful.dataset, unsuccessful.dataset);
    FilterReport filtered = filter_valid(merged);
    for (const auto& drop : filtered.dropped) {
        std::cerr << "[fseg] ingest: dropped " << drop.source << ": " << drop.reason << '\n';
    }

    Dataset sample = stratified_sample(filtered.dataset, config.n_per_class, config.seed_sample);
    save_jsonl(sample, config.sample_file());

    IngestOutcome out;
    out.loaded_successful = successful.dataset.size();
    out.loaded_unsuccessful = unsuccessful.dataset.size();
    out.skipped_rows = successful.skipped.size() + unsuccessful.skipped.size();
    out.dropped_invalid = filtered.dropped.size();
    out.sampled = sample.size();

    update_manifest(config, "ingest",
                    {{"loaded_successful", out.loaded_successful},
                     {"loaded_unsuccessful", out.loaded_unsuccessful},
                     {"skipped_rows", out.skipped_rows},
                     {"dropped_invalid", out.dropped_invalid},
                     {"sampled", out.sampled},
                     {"seed", config.seed_sample}});
    return out;
}

// ------------------------------------------------------------------ labels

void save_labels(const std::vector<LabelRecord>& labels, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& rec : labels) {
        json errors = json::array();
        for (const auto& e : rec.errors) errors.push_back({{"stage", e.stage}, {"message", e.message}});
        json j{{"founder_id", rec.founder_id},
               {"summary", rec.summary_text},
               {"level", rec.level ? json(*rec.level) : json(nullptr)},
               {"personas", rec.personas},
               {"flags", rec.flags},
               {"errors", errors}};
        out << j.dump() << '\n';
    }
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<LabelRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        LabelRecord rec;
        rec.founder_id = j.at("founder_id").get<std::string>();
        rec.summary_text = j.value("summary", "");
        if (j.contains("level") && !j.at("level").is_null()) rec.level = j.at("level").get<int>();
        if (j.contains("personas")) rec.personas = j.at("personas").get<std::vector<std::string>>();
        if (j.contains("flags")) rec.flags = j.at("flags").get<std::vector<int>>();
        if (j.contains("errors")) {
            for (const auto& e : j.at("errors")) {
                rec.errors.push_back({e.value("stage", ""), e.value("message", "")});
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

SegmentOutcome cmd_segment(const RunConfig& config) {
    config.validate();

    Dataset sample = load_jsonl(config.sample_file());
    auto library = prompts::PromptLibrary::load(prompts_dir(config));
    auto gateway = make_gateway(config);
    llm::CacheStore cache(config.cache_file());
    seg::Segmenter segmenter(library, *gateway, &cache, segmenter_options(config));

    std::vector<seg::ChainResult> results(sample.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    int workers = std::min<int>(config.concurrency, static_cast<int>(sample.size()));
    workers = std::max(workers, 1);

    auto run_worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < sample.size(); i = next.fetch_add(1)) {
            results[i] = segmenter.run_chain(sample.records[i]);
            std::size_t d = done.fetch_add(1) + 1;
            if (d % 50 == 0 || d == sample.size()) {
                std::cerr << "[fseg] segment: " << d << "/" << sample.size() << " founders\n";
            }
        }
    };
    if (workers == 1) {
        run_worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker);
        for (auto& t : pool) t.join();
    }

    std::vector<LabelRecord> labels;
    labels.reserve(results.size());
    SegmentOutcome out;
    out.founders = results.size();
    for (const auto& r : results) {
        LabelRecord rec;
        rec.founder_id = r.founder_id;
        if (r.summary) rec.summary_text = r.summary->full_text;
        if (r.level) rec.level = r.level->level;
        if (r.personas) {
            for (char c : r.personas->personas) rec.personas.emplace_back(1, c);
        }
        if (r.flags) {
            for (bool b : r.flags->flags) rec.flags.push_back(b ? 1 : 0);
        }
        for (const auto& e : r.errors) rec.errors.push_back(e);
        out.stage_errors += r.errors.size();
        if (r.complete()) ++out.complete;
        else ++out.failed;
        labels.push_back(std::move(rec));
    }
    save_labels(labels, config.labels_file());

    update_manifest(config, "segment",
                    {{"founders", out.founders},
                     {"complete", out.complete},
                     {"failed", out.failed},
                     {"stage_errors", out.stage_errors},
                     {"cache_entries", cache.size()}});
    return out;
}

// ------------------------------------------------------------------ features + analytics

feat::MatrixBuild build_features(const RunConfig& config, const Dataset& sample,
                                 const std::vector<LabelRecord>& labels) {
    auto classifier = edu::EduClassifier::load(data_dir(config) / "edu_keywords.txt");

    std::unordered_map<std::string, feat::FeatureVector> features;
    std::unordered_map<std::string, std::string> errors;
    std::unordered_map<std::string, const LabelRecord*> by_id;
    for (const auto& l : labels) by_id[l.founder_id] = &l;

    for (const auto& rec : sample.records) {
        auto it = by_id.find(rec.founder_id);
        if (it == by_id.end()) {
            errors[rec.founder_id] = "no labels for founder";
            continue;
        }
        const LabelRecord& l = *it->second;
        if (!l.level || l.personas.empty() || l.flags.size() != seg::kFlagCount) {
            std::string reason = "incomplete labels";
            if (!l.errors.empty()) {
                reason += ":";
                for (const auto& e : l.errors) reason += " [" + e.stage + "] " + e.message;
            }
            errors[rec.founder_id] = reason;
            continue;
        }
        seg::SegmentLabels sl;
        sl.founder_id = rec.founder_id;
        sl.level.level = *l.level;
        for (const auto& p : l.personas) {
            if (!p.empty()) sl.personas.personas.insert(p[0]);
        }
        for (std::size_t i = 0; i < seg::kFlagCount; ++i) sl.flags.flags[i] = l.flags[i] != 0;

        auto entries = edu::extract_education(rec.linkedin_doc);
        auto degree = classifier.highest_education(entries);
        auto fields = classifier.fields_of_study(entries);
        features[rec.founder_id] = feat::build_feature_vector(degree, fields, sl);
    }
    return feat::build_matrix(sample, features, errors);
}

AnalyzeOutcome cmd_analyze(const RunConfig& config) {
    config.validate();

    Dataset sample = load_jsonl(config.sample_file());
    auto labels = load_labels(config.labels_file());
    feat::MatrixBuild build = build_features(config, sample, labels);
    for (const auto& ex : build.excluded) {
        std::cerr << "[fseg] analyze: excluded " << ex.founder_id << ": " << ex.reason << '\n';
    }
    feat::save_csv(build.matrix, config.features_file());

    auto level_rows = analytics::success_by_level(build.matrix);
    auto persona_rows = analytics::success_by_persona(build.matrix);
    auto flag_pairs = analytics::success_by_flag(build.matrix, config.min_flag_gap_pp);

    std::filesystem::create_directories(config.reports_dir());
    AnalyzeOutcome out;
    out.rows = build.matrix.rows.size();
    out.excluded = build.excluded.size();

    auto write_text = [&](const std::filesystem::path& p, const std::string& body) {
        std::ofstream f(p, std::ios::binary);
        f << body;
        out.report_files.push_back(p.string());
    };
    write_text(config.reports_dir() / "success_by_level.txt", analytics::render_level_table(level_rows));
    analytics::write_rate_csv(level_rows, config.reports_dir() / "success_by_level.csv", 1);
    out.report_files.push_back((config.reports_dir() / "success_by_level.csv").string());

    write_text(config.reports_dir() / "success_by_persona.txt",
               analytics::render_persona_table(persona_rows));
    analytics::write_rate_csv(persona_rows, config.reports_dir() / "success_by_persona.csv", 1);
    out.report_files.push_back((config.reports_dir() / "success_by_persona.csv").string());

    write_text(config.reports_dir() / "success_by_flag.txt", analytics::render_flag_table(flag_pairs));
    analytics::write_flag_csv(flag_pairs, config.reports_dir() / "success_by_flag.csv");
    out.report_files.push_back((config.reports_dir() / "success_by_flag.csv").string());

    if (config.all_flags) {
        auto all_pairs = analytics::success_by_flag_all(build.matrix);
        write_text(config.reports_dir() / "success_by_flag_full.txt",
                   analytics::render_flag_table(all_pairs));
        analytics::write_flag_csv(all_pairs, config.reports_dir() / "success_by_flag_full.csv");
        out.report_files.push_back((config.reports_dir() / "success_by_flag_full.csv").string());
    }

    update_manifest(config, "analyze", {{"rows", out.rows}, {"excluded", out.excluded}});
    return out;
}

// ------------------------------------------------------------------ train/eval

namespace {

std::string format_metric(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return buf;
}

std::string format_metric(double v) { return format_metric(std::optional<double>(v)); }

}  // namespace

TrainEvalOutcome cmd_train_eval(const RunConfig& config) {
    config.validate();

    feat::LabeledMatrix matrix = feat::load_csv(config.features_file());
    ml::Split split = ml::make_split(matrix, config.seed_split);

    ml::ForestParams forest_params = config.forest;
    forest_params.seed = config.seed_models;
    ml::GbtParams gbt_params = config.gbt;
    gbt_params.seed = config.seed_models;

    ml::LinearModel linear = ml::LinearModel::train(split.train, 1e-6, config.decision_threshold);
    ml::ForestModel forest = ml::ForestModel::train(split.train, forest_params);
    forest.threshold = config.decision_threshold;
    ml::GbtModel gbt = ml::GbtModel::train(split.train, gbt_params);
    gbt.threshold = config.decision_threshold;

    auto models_dir = config.artifacts_dir() / "models";
    ml::save_model(linear, models_dir / "linear.model");
    ml::save_model(forest, models_dir / "forest.model");
    ml::save_model(gbt, models_dir / "gbt.model");

    TrainEvalOutcome out;
    auto add_rows = [&](const std::string& name, const ml::Classifier& model) {
        auto [r1, c1] = ml::evaluate(model, split.test1);
        auto [r2, c2] = ml::evaluate(model, split.test2);
        out.rows.push_back({name, 1, r1, c1});
        out.rows.push_back({name, 2, r2, c2});
    };
    add_rows("linear_regression", linear);
    add_rows("random_forest", forest);
    add_rows("gbt", gbt);

    std::filesystem::create_directories(config.reports_dir());
    {
        std::ofstream csv_out(config.reports_dir() / "model_metrics.csv", std::ios::binary);
        csv_out << "model,test_set,accuracy,precision,f1,tpr\n";
        for (const auto& row : out.rows) {
            csv_out << row.model << ',' << row.test_set << ',' << format_metric(row.report.accuracy)
                    << ',' << format_metric(row.report.precision) << ',' << format_metric(row.report.f1)
                    << ',' << format_metric(row.report.tpr) << '\n';
        }
    }
    {
        std::ofstream txt(config.reports_dir() / "model_metrics.txt", std::ios::binary);
        txt << "Model                 Test set  Accuracy  Precision  F1     TPR     (tp,fp,tn,fn)\n";
        for (const auto& row : out.rows) {
            char line[256];
            std::snprintf(line, sizeof line, "%-21s %-9d %-9s %-10s %-6s %-7s (%ld,%ld,%ld,%ld)\n",
                          row.model.c_str(), row.test_set, format_metric(row.report.accuracy).c_str(),
                          format_metric(row.report.precision).c_str(), format_metric(row.report.f1).c_str(),
                          format_metric(row.report.tpr).c_str(), row.confusion.tp, row.confusion.fp,
                          row.confusion.tn, row.confusion.fn);
            txt << line;
        }
    }

    update_manifest(config, "train_eval",
                    {{"train_rows", split.train.size()},
                     {"test1_rows", split.test1.size()},
                     {"test2_rows", split.test2.size()},
                     {"seed_split", config.seed_split},
                     {"seed_models", config.seed_models}});
    return out;
}

// ------------------------------------------------------------------ taxonomy + report

std::string cmd_propose_taxonomy(const RunConfig& config, const std::string& kind, int target_count,
                                 const std::filesystem::path& base_file, std::size_t num_summaries) {
    config.validate();

    auto library = prompts::PromptLibrary::load(prompts_dir(config));
    auto gateway = make_gateway(config);
    llm::CacheStore cache(config.cache_file());
    seg::Segmenter segmenter(library, *gateway, &cache, segmenter_options(config));

    auto labels = load_labels(config.labels_file());
    std::vector<std::string> summaries;
    for (const auto& l : labels) {
        if (!l.summary_text.empty()) summaries.push_back(l.summary_text);
        if (summaries.size() >= num_summaries) break;
    }
    if (summaries.empty()) {
        throw std::runtime_error("no summaries available; run `fseg segment` first");
    }

    std::string base;
    if (!base_file.empty()) {
        std::ifstream in(base_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open base taxonomy file " + base_file.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        base = ss.str();
    } else if (kind == "level") {
        base = library.base_levels();
    } else {
        throw std::runtime_error("persona proposals need --base <file> with the starting categories");
    }

    std::string proposal = segmenter.propose_taxonomy(summaries, base, target_count);

    std::filesystem::create_directories(config.reports_dir());
    auto out_path = config.reports_dir() / ("taxonomy_proposal_" + kind + ".txt");
    std::ofstream out(out_path, std::ios::binary);
    out << proposal;
    if (!proposal.empty() && proposal.back() != '\n') out << '\n';

    update_manifest(config, "propose_taxonomy(" + kind + ")",
                    {{"summaries", summaries.size()}, {"target_count", static_cast<std::uint64_t>(target_count)}});
    return proposal;
}

void cmd_report(const RunConfig& config, std::ostream& out) {
    auto echo = [&](const std::filesystem::path& p, const std::string& title) {
        if (!std::filesystem::exists(p)) return;
        std::ifstream in(p, std::ios::binary);
        out << "== " << title << " ==\n";
        out << in.rdbuf() << '\n';
    };
    echo(config.reports_dir() / "success_by_level.txt", "Success rates by level");
    echo(config.reports_dir() / "success_by_persona.txt", "Success rates by persona");
    echo(config.reports_dir() / "success_by_flag.txt", "Success rates by flag (gap filter applied)");
    echo(config.reports_dir() / "model_metrics.txt", "Model performance");
}

}  // namespace pipeline
