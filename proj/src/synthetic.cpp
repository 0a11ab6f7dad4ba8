#include "fseg/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "fseg/csv.hpp"
#include "fseg/hash.hpp"
#include "fseg/rng.hpp"

namespace fseg::synth {

using nlohmann::json;

namespace {

const char* kSchools[] = {
    "Stanford University", "Duke University", "University of Michigan", "Carnegie Mellon University",
    "University of Texas at Austin", "Georgia Institute of Technology", "University of Washington",
    "Boston University", "Purdue University", "ETH Zurich", "University of Cambridge",
};

const char* kDegrees[] = {"BS", "BA", "BSc", "MS", "MBA", "PhD", "BSE", "MEng", ""};

const char* kFields[] = {
    "Computer Science", "Economics", "Mechanical Engineering", "Biology", "Mathematics",
    "Business Administration", "Marketing", "Political Science", "Design", "History",
    "Electrical and Computer Engineering, Economics", "Machine Learning", "Finance",
};

const char* kCompanies[] = {
    "Globex", "Initech", "Umbrella Labs", "Hooli", "Stark Industries", "Wayne Enterprises",
    "Acme Systems", "Vandelay Industries", "Pied Piper", "Wonka Works",
};

const char* kTitles[] = {
    "Software Engineer", "Product Manager", "Research Scientist", "Consultant",
    "VP of Engineering", "Marketing Lead", "Data Scientist", "CTO",
};

const char* kCities[] = {
    "San Francisco, California", "New York, New York", "Austin, Texas", "Seattle, Washington",
    "Boston, Massachusetts", "Denver, Colorado",
};

}  // namespace

std::string make_profile(std::uint64_t seed, const std::string& founder_name) {
    Rng rng(mix64(seed));

    json edu = json::array();
    std::size_t n_edu = 1 + bounded(rng, 3);
    int grad_year = 1995 + static_cast<int>(bounded(rng, 20));
    for (std::size_t i = 0; i < n_edu; ++i) {
        int start = grad_year - 4 + static_cast<int>(i) * 2;
        edu.push_back({{"school", kSchools[bounded(rng, std::size(kSchools))]},
                       {"degree", kDegrees[bounded(rng, std::size(kDegrees))]},
                       {"field_of_study", kFields[bounded(rng, std::size(kFields))]},
                       {"start_year", start},
                       {"end_year", start + 2 + static_cast<int>(bounded(rng, 4))}});
    }

    json exp = json::array();
    std::size_t n_jobs = 1 + bounded(rng, 4);
    int year = grad_year + 1;
    for (std::size_t i = 0; i < n_jobs; ++i) {
        int span = 1 + static_cast<int>(bounded(rng, 5));
        // multi-line description with quotes: the CSV layer has to cope
        std::string desc = "Shipped \"v" + std::to_string(1 + bounded(rng, 9)) + "\" platform.\nLed a team of " +
                           std::to_string(2 + bounded(rng, 30)) + ".";
        exp.push_back({{"company", kCompanies[bounded(rng, std::size(kCompanies))]},
                       {"title", kTitles[bounded(rng, std::size(kTitles))]},
                       {"start", std::to_string(year) + "-0" + std::to_string(1 + bounded(rng, 8))},
                       {"end", std::to_string(year + span) + "-0" + std::to_string(1 + bounded(rng, 8))},
                       {"description", desc}});
        year += span;
    }

    json profile{{"name", founder_name},
                 {"location", kCities[bounded(rng, std::size(kCities))]},
                 {"education", edu},
                 {"experience", exp}};
    return profile.dump();
}

namespace {

void write_table(const std::filesystem::path& path, const std::string& prefix, std::size_t rows,
                 std::size_t invalid_json, std::size_t short_rows, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("synth: cannot write " + path.string());
    csv::write_row(out, {"founder_id", "linkedin_json", "org_name"});

    Rng rng(mix64(seed));
    std::size_t total = rows + invalid_json + short_rows;
    for (std::size_t i = 0; i < total; ++i) {
        std::string id = prefix + std::to_string(i + 1);
        std::string name = "Alex " + prefix + std::to_string(i + 1);
        std::string org = "Startup-" + prefix + std::to_string(i + 1);

        if (i < short_rows) {
            // arity error: org_name cell missing entirely
            out << csv::escape_field(id) << ',' << csv::escape_field("{\"name\": \"" + name + "\"}")
                << '\n';
            continue;
        }
        if (i < short_rows + invalid_json) {
            std::string broken = i % 2 == 0 ? "" : "{\"name\": \"" + name + "\", \"education\": [";
            csv::write_row(out, {id, broken, org});
            continue;
        }
        csv::write_row(out, {id, make_profile(mix64(seed ^ (i * 2654435761ull)), name), org});
    }
}

}  // namespace

void write_corpus(const std::filesystem::path& out_dir, const CorpusSpec& spec) {
    std::filesystem::create_directories(out_dir);
    write_table(out_dir / "successful.csv", "S", spec.successful, spec.invalid_json, spec.short_rows,
                mix64(spec.seed ^ 1));
    write_table(out_dir / "unsuccessful.csv", "U", spec.unsuccessful, spec.invalid_json, spec.short_rows,
                mix64(spec.seed ^ 2));
}

}  // namespace fseg::synth
