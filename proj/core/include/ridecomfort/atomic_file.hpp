#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ridecomfort {

/// Writes `content` to a temp file next to `path`, then renames it into
/// place. Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file; throws IoError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace ridecomfort
