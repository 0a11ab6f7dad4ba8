#include <CLI11.hpp>

#include <iostream>

#include "fseg/synthetic.hpp"

// Deterministic fake founder tables for demos and offline pipeline runs.
int main(int argc, char** argv) {
    CLI::App app{"fseg-synth: generate synthetic founder CSV fixtures"};

    fseg::synth::CorpusSpec spec;
    std::string out_dir = "fixtures";
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--successful", spec.successful, "valid rows in successful.csv");
    app.add_option("--unsuccessful", spec.unsuccessful, "valid rows in unsuccessful.csv");
    app.add_option("--invalid-json", spec.invalid_json, "malformed-profile rows per file");
    app.add_option("--short-rows", spec.short_rows, "rows with a missing cell per file");
    app.add_option("--seed", spec.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        fseg::synth::write_corpus(out_dir, spec);
    } catch (const std::exception& e) {
        std::cerr << "fseg-synth: " << e.what() << '\n';
        return 1;
    }
    std::cout << "wrote " << out_dir << "/successful.csv and " << out_dir << "/unsuccessful.csv\n";
    return 0;
}
