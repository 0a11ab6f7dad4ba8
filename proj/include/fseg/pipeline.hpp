#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fseg/config.hpp"
#include "fseg/features.hpp"
#include "fseg/ingest.hpp"
#include "fseg/ml.hpp"
#include "fseg/segmentation.hpp"

namespace fseg::pipeline {

struct IngestOutcome {
    std::size_t loaded_successful = 0;
    std::size_t loaded_unsuccessful = 0;
    std::size_t skipped_rows = 0;
    std::size_t dropped_invalid = 0;
    std::size_t sampled = 0;
};

struct SegmentOutcome {
    std::size_t founders = 0;
    std::size_t complete = 0;
    std::size_t failed = 0;  // founders with at least one stage error
    std::size_t stage_errors = 0;
};

struct AnalyzeOutcome {
    std::size_t rows = 0;
    std::size_t excluded = 0;
    std::vector<std::string> report_files;
};

struct TrainEvalOutcome {
    // six rows: model x test set, in Table order
    struct Row {
        std::string model;
        int test_set = 1;
        ml::EvalReport report;
        ml::ConfusionMatrix confusion;
    };
    std::vector<Row> rows;
};

// Pipeline stages behind the CLI subcommands. Each writes its artifacts under
// config.run_dir and refreshes the manifest.
IngestOutcome cmd_ingest(const RunConfig& config);
SegmentOutcome cmd_segment(const RunConfig& config);
AnalyzeOutcome cmd_analyze(const RunConfig& config);
TrainEvalOutcome cmd_train_eval(const RunConfig& config);
std::string cmd_propose_taxonomy(const RunConfig& config, const std::string& kind, int target_count,
                                 const std::filesystem::path& base_file, std::size_t num_summaries);
void cmd_report(const RunConfig& config, std::ostream& out);

// ---- shared plumbing, exposed for tests ----

// labels.jsonl rows: founder_id, summary text, level, personas, flags, errors
struct LabelRecord {
    std::string founder_id;
    std::string summary_text;
    std::optional<int> level;
    std::vector<std::string> personas;
    std::vector<int> flags;
    std::vector<seg::StageError> errors;
};

void save_labels(const std::vector<LabelRecord>& labels, const std::filesystem::path& path);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);

// Builds the labeled matrix for a sample + label set; exclusions carry the
// per-founder failure reasons.
feat::MatrixBuild build_features(const RunConfig& config, const Dataset& sample,
                                 const std::vector<LabelRecord>& labels);

std::unique_ptr<llm::LlmGateway> make_gateway(const RunConfig& config);

void update_manifest(const RunConfig& config, const std::string& step,
                     const std::map<std::string, std::uint64_t>& stats);

}  // namespace fseg::pipeline
