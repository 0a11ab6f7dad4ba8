#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fseg/ml.hpp"
#include "fseg/version.hpp"

namespace fseg::ml {

void save_model(const Classifier& model, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("model: cannot write " + path.string());
    nlohmann::json j{{"format", "fseg-model"}, {"format_version", 1}, {"app_version", kVersion}};
    j["model"] = model.to_json();
    out << j.dump(2) << '\n';
}

std::unique_ptr<Classifier> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("model: cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("model: bad file " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "fseg-model" || j.value("format_version", 0) != 1) {
        throw std::runtime_error("model: unsupported format in " + path.string());
    }
    const auto& m = j.at("model");
    std::string kind = m.at("kind").get<std::string>();
    if (kind == "linear") return std::make_unique<LinearModel>(LinearModel::from_json(m));
    if (kind == "forest") return std::make_unique<ForestModel>(ForestModel::from_json(m));
    if (kind == "gbt") return std::make_unique<GbtModel>(GbtModel::from_json(m));
    throw std::runtime_error("model: unknown kind '" + kind + "'");
}

}  // namespace fseg::ml
