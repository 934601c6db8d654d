#include "output.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "config.hpp"

namespace lognl::cli {

namespace fs = std::filesystem;

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_real(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

namespace {

fs::path temp_sibling(const fs::path& target) {
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

}  // namespace

void ensure_writable(const std::string& path) {
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw ConfigError("output directory '" + dir.string() + "' does not exist");
  const fs::path probe = temp_sibling(target);
  {
    std::ofstream f(probe, std::ios::binary);
    if (!f) throw ConfigError("cannot write output '" + path + "'");
  }
  fs::remove(probe, ec);
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = temp_sibling(target);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw ConfigError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace lognl::cli
