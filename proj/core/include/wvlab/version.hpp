#pragma once

namespace wvlab {

inline constexpr const char* kVersion = "wvlab 0.1.0";

} // namespace wvlab
