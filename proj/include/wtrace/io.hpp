#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace wtrace::io {

/// Writes to `path` through a sibling temporary file and a rename, so readers
/// never see a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

/// Shortest round-trip-safe form with 17 significant digits, '.' separator.
std::string format_double(double v);

}  // namespace wtrace::io
