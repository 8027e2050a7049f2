#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qpf/series.hpp"

namespace qpf {

/// Where and how to read a value column out of a delimited text file.
/// `value_column` is a 0-based index or, with a header row, a column name.
struct DatasetSpec {
    std::filesystem::path path;
    std::string value_column = "0";
    bool has_header = false;
    char delimiter = ',';
};

/// Loads the chosen column; samples keep file order, labels come from the
/// first column when the file has more than one and it is not the value
/// column itself. Errors name the offending row and cell.
Series load_csv(const DatasetSpec& spec);

/// FNV-1a 64-bit over the raw file bytes; the manifest's dataset fingerprint.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips the exact double.
std::string format_double(double value);

/// Writes content to `path` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace qpf
