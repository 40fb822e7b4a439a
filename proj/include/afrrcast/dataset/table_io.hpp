#pragma once

#include <filesystem>
#include <string>

#include "afrrcast/dataset/manifest.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

/// Loads a 15-minute-resolution CSV: first column an ISO-8601 UTC timestamp,
/// header row with column names, empty cell = missing. Only columns declared
/// in the manifest are loaded, in manifest order; a declared column missing
/// from the file is an error. Targets are sign-flipped when the manifest
/// says so. Timestamps off the grid or out of order fail with the row number.
TimeTable load_table(const std::filesystem::path& path, const Manifest& manifest);

/// Writes the table in the same format; a written table re-loads equal
/// (index, values, missing pattern).
void save_table(const TimeTable& table, const std::filesystem::path& path);

/// The CSV text save_table would write.
std::string table_to_csv(const TimeTable& table);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

/// Splits one CSV record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest round-trip decimal rendering; -0 is normalized to 0 so that
/// artifacts are byte-stable.
std::string format_double(double v);

}  // namespace afrrcast
