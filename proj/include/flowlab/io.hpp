#pragma once

#include <string>

namespace flowlab::io {

/// Writes `content` to a temporary sibling of `path` and renames it into
/// place. Throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Whole-file read. Throws std::runtime_error when the file cannot be opened.
std::string read_file(const std::string& path);

/// Shortest round-trip decimal form with 17 significant digits.
std::string format_g17(double x);

}  // namespace flowlab::io
