#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace fseg::synth {

struct CorpusSpec {
    std::size_t successful = 160;
    std::size_t unsuccessful = 160;
    std::size_t invalid_json = 3;  // per file: rows whose profile is malformed
    std::size_t short_rows = 1;    // per file: rows missing a trailing cell
    std::uint64_t seed = 11;
};

// Writes successful.csv / unsuccessful.csv under out_dir: deterministic fake
// founder tables with quoted multi-line JSON profiles, for demos and tests.
void write_corpus(const std::filesystem::path& out_dir, const CorpusSpec& spec);

// One synthetic profile document (JSON text).
std::string make_profile(std::uint64_t seed, const std::string& founder_name);

}  // namespace fseg::synth
