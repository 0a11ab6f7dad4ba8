#include "fseg/ingest.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <unordered_set>

#include "fseg/csv.hpp"
#include "fseg/hash.hpp"
#include "fseg/rng.hpp"

namespace fseg {

using nlohmann::json;

std::size_t Dataset::count_success(bool flag) const {
    std::size_t n = 0;
    for (const auto& r : records)
        if (r.success == flag) ++n;
    return n;
}

LoadReport load_founder_table(const std::filesystem::path& path, bool success) {
    if (!std::filesystem::exists(path)) {
        throw IngestError("input file does not exist: " + path.string());
    }
    csv::Table table = csv::read_file(path);

    int col_doc = table.column("linkedin_json");
    int col_org = table.column("org_name");
    int col_id = table.column("founder_id");
    if (col_doc < 0) throw IngestError(path.string() + ": missing required column 'linkedin_json'");
    if (col_org < 0) throw IngestError(path.string() + ": missing required column 'org_name'");

    std::string source = path.filename().string();

    LoadReport report;
    report.dataset.provenance.sources.push_back(path.string());
    for (const auto& err : table.errors) {
        report.skipped.push_back({source, err.record, err.reason});
    }

    std::unordered_set<std::string> seen;
    std::size_t record_no = 0;
    for (const auto& row : table.rows) {
        ++record_no;
        FounderRecord rec;
        rec.linkedin_doc = row[static_cast<std::size_t>(col_doc)];
        rec.org_name = row[static_cast<std::size_t>(col_org)];
        rec.success = success;
        rec.founder_id = col_id >= 0 ? row[static_cast<std::size_t>(col_id)]
                                     : source + ":" + std::to_string(record_no);
        if (rec.founder_id.empty()) {
            rec.founder_id = source + ":" + std::to_string(record_no);
        }
        if (!seen.insert(rec.founder_id).second) {
            report.skipped.push_back({source, record_no, "duplicate founder_id '" + rec.founder_id + "'"});
            continue;
        }
        report.dataset.records.push_back(std::move(rec));
    }
    return report;
}

Dataset merge_and_flag(const Dataset& successful, const Dataset& unsuccessful) {
    std::unordered_set<std::string> ids;
    ids.reserve(successful.size());
    for (const auto& r : successful.records) ids.insert(r.founder_id);
    for (const auto& r : unsuccessful.records) {
        if (ids.count(r.founder_id)) {
            throw IngestError("duplicate founder_id across inputs: " + r.founder_id);
        }
    }
    Dataset out;
    out.records.reserve(successful.size() + unsuccessful.size());
    out.records.insert(out.records.end(), successful.records.begin(), successful.records.end());
    out.records.insert(out.records.end(), unsuccessful.records.begin(), unsuccessful.records.end());
    for (const auto& s : successful.provenance.sources) out.provenance.sources.push_back(s);
    for (const auto& s : unsuccessful.provenance.sources) out.provenance.sources.push_back(s);
    return out;
}

FilterReport filter_valid(const Dataset& d) {
    FilterReport report;
    report.dataset.provenance = d.provenance;
    for (const auto& r : d.records) {
        if (r.linkedin_doc.empty()) {
            report.dropped.push_back({r.founder_id, 0, "empty linkedin profile"});
            continue;
        }
        json doc = json::parse(r.linkedin_doc, nullptr, false);
        if (doc.is_discarded()) {
            report.dropped.push_back({r.founder_id, 0, "malformed profile document"});
            continue;
        }
        if (!doc.is_object() && !doc.is_array()) {
            report.dropped.push_back({r.founder_id, 0, "profile document is not structured"});
            continue;
        }
        report.dataset.records.push_back(r);
    }
    return report;
}

Dataset stratified_sample(const Dataset& d, std::size_t n_per_class, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        (d.records[i].success ? pos : neg).push_back(i);
    }
    if (pos.size() < n_per_class) {
        throw IngestError("insufficient successful records: have " + std::to_string(pos.size()) +
                          ", need " + std::to_string(n_per_class));
    }
    if (neg.size() < n_per_class) {
        throw IngestError("insufficient unsuccessful records: have " + std::to_string(neg.size()) +
                          ", need " + std::to_string(n_per_class));
    }

    Rng rng_pos(mix64(seed ^ 0x5uLL));
    Rng rng_neg(mix64(seed ^ 0x6uLL));
    fisher_yates(pos, rng_pos);
    fisher_yates(neg, rng_neg);

    Dataset out;
    out.provenance = d.provenance;
    out.provenance.sample_seed = seed;
    out.records.reserve(2 * n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) out.records.push_back(d.records[pos[i]]);
    for (std::size_t i = 0; i < n_per_class; ++i) out.records.push_back(d.records[neg[i]]);
    return out;
}

void save_jsonl(const Dataset& d, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    for (const auto& r : d.records) {
        json j{{"founder_id", r.founder_id},
               {"linkedin_json", r.linkedin_doc},
               {"org_name", r.org_name},
               {"success", r.success}};
        out << j.dump() << '\n';
    }
}

Dataset load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot read " + path.string());
    Dataset d;
    d.provenance.sources.push_back(path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw IngestError(path.string() + ":" + std::to_string(line_no) + ": bad record");
        }
        FounderRecord r;
        r.founder_id = j.value("founder_id", "");
        r.linkedin_doc = j.value("linkedin_json", "");
        r.org_name = j.value("org_name", "");
        r.success = j.value("success", false);
        d.records.push_back(std::move(r));
    }
    return d;
}

}  // namespace fseg
