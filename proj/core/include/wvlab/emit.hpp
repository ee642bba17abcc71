#pragma once

// Deterministic emission: CSV with 17 significant digits (exact double
// round-trip) and stable-order JSON. Byte-identical across reruns of the
// same config.

#include <string>
#include <utility>
#include <vector>

#include "wvlab/scenario.hpp"

namespace wvlab {

/// "%.17g" with the C locale, regardless of the global locale.
std::string format_double(double value);

/// Header row plus comma-separated 17-digit rows, newline-terminated.
std::string to_csv(const Table& table);

/// Flat {"key": number} object in insertion order, one line per key.
std::string to_flat_json(const std::vector<std::pair<std::string, double>>& entries);

void write_file(const std::string& path, const std::string& content);

} // namespace wvlab
