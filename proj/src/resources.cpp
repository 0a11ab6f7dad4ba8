#include "fseg/resources.hpp"

#include <unistd.h>

#include <array>
#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace fseg {

namespace fs = std::filesystem;

fs::path executable_dir() {
    std::array<char, 4096> buf{};
    ssize_t n = ::readlink("/proc/self/exe", buf.data(), buf.size() - 1);
    if (n <= 0) return fs::current_path();
    return fs::path(std::string(buf.data(), static_cast<std::size_t>(n))).parent_path();
}

fs::path locate_resource_dir(const std::string& name, const fs::path& override_path) {
    if (!override_path.empty()) {
        if (fs::is_directory(override_path)) return override_path;
        throw std::runtime_error("resource directory not found: " + override_path.string());
    }

    std::string env_name = "FSEG_";
    for (char c : name) env_name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    env_name += "_DIR";
    if (const char* env = std::getenv(env_name.c_str())) {
        if (fs::is_directory(env)) return env;
    }

    fs::path exe = executable_dir();
    for (const fs::path& candidate : {fs::current_path() / name, exe / name, exe.parent_path() / name,
#ifdef FSEG_SOURCE_DIR
                                      fs::path(FSEG_SOURCE_DIR) / name,
#endif
                                      fs::path()}) {
        if (!candidate.empty() && fs::is_directory(candidate)) return candidate;
    }
    throw std::runtime_error("cannot locate resource directory '" + name +
                             "'; set " + env_name + " or pass an explicit path");
}

}  // namespace fseg
