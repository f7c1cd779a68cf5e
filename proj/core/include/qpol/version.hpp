#pragma once

namespace qpol {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qpol
