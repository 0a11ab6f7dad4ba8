#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fseg {

struct FounderRecord {
    std::string founder_id;
    std::string linkedin_doc;  // raw profile JSON, kept verbatim
    std::string org_name;
    bool success = false;
};

struct Provenance {
    std::vector<std::string> sources;
    std::optional<std::uint64_t> sample_seed;
};

struct Dataset {
    std::vector<FounderRecord> records;
    Provenance provenance;

    std::size_t size() const { return records.size(); }
    std::size_t count_success(bool flag) const;
};

struct RowIssue {
    std::string source;
    std::size_t record = 0;  // 1-based data-record ordinal; 0 when not row-specific
    std::string reason;
};

struct LoadReport {
    Dataset dataset;
    std::vector<RowIssue> skipped;
};

struct FilterReport {
    Dataset dataset;
    std::vector<RowIssue> dropped;
};

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reads one founder CSV (columns: linkedin_json, org_name, optional
// founder_id) and stamps every record with the given success flag. Rows that
// cannot be read are skipped and reported. Missing file or missing required
// column throws IngestError.
LoadReport load_founder_table(const std::filesystem::path& path, bool success);

// Concatenation, `successful` first. Throws IngestError on founder_id
// collisions across the inputs.
Dataset merge_and_flag(const Dataset& successful, const Dataset& unsuccessful);

// Keeps records whose linkedin_doc parses as a JSON object or array.
FilterReport filter_valid(const Dataset& d);

// Seeded per-class shuffle, then an n-record prefix of each class; the result
// lists the successful sample first. Throws IngestError when either class has
// fewer than n records.
Dataset stratified_sample(const Dataset& d, std::size_t n_per_class, std::uint64_t seed);

// Canonical serialization: one JSON object per line, UTF-8, sorted keys.
void save_jsonl(const Dataset& d, const std::filesystem::path& path);
Dataset load_jsonl(const std::filesystem::path& path);

}  // namespace fseg
