#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace purcell::io {

/// Shortest round-trip decimal representation; identical bits give identical text.
std::string format_double(double v);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::string_view data);

/// Writes to `<path>.tmp` then renames over `path`. Throws IoError.
void write_atomic(const std::string& path, const std::string& contents);

/// Throws IoError if the file cannot be opened.
std::string read_file(const std::string& path);

/// Splits on `sep` without trimming.
std::vector<std::string> split(std::string_view line, char sep);

std::string trim(std::string_view s);

} // namespace purcell::io
