#pragma once

#include <filesystem>
#include <string>

namespace fseg {

// Locates a bundled resource directory ("prompts", "data"). Search order:
// explicit override, $FSEG_<NAME>_DIR, ./<name>, <exe dir>/<name>,
// <exe dir>/../<name>, then the source tree this binary was built from.
// Throws std::runtime_error when nothing matches.
std::filesystem::path locate_resource_dir(const std::string& name,
                                          const std::filesystem::path& override_path = {});

std::filesystem::path executable_dir();

}  // namespace fseg
