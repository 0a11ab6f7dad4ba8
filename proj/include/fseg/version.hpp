#pragma once

namespace fseg {

inline constexpr const char* kVersion = "0.1.0";

}
