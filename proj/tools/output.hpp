#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lognl::cli {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// Column table rendered as comma-separated text with a header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

/// Pretty-printed with sorted keys and a trailing newline.
std::string render_json(const nlohmann::json& j);

/// Fails with a ConfigError unless a file can be created at `path`.
void ensure_writable(const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace lognl::cli
