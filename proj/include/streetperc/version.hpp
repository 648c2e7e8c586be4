#pragma once

namespace streetperc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace streetperc
