#pragma once

#include "squeeze/husimi.hpp"
#include "squeeze/scaling.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace squeeze::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

std::string read_file(const std::filesystem::path &path);

std::string sweep_csv(const SweepTable &table);
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow &row);

/// Rows of a CSV written by sweep_csv; throws InvalidArgument on malformed input.
std::vector<SweepRow> parse_sweep_csv(const std::string &text);

/// theta, phi, weight, value; one row per node.
std::string husimi_csv(const HusimiGrid &grid);

nlohmann::json to_json(const SweepRow &row);
nlohmann::json to_json(const SweepTable &table);
nlohmann::json to_json(const PowerLawFit &fit);
nlohmann::json to_json(const PulseSequence &sequence);

} // namespace squeeze::io
