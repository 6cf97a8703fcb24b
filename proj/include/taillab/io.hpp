#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace taillab::io {

using Json = nlohmann::ordered_json;

/// Column-major numeric table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  void add_column(std::string name, std::vector<double> values);
  /// Column by name; throws InvalidArgument when absent.
  const std::vector<double> &column(const std::string &name) const;
};

/// Values in %.12e, comma separated, one header line.
std::string format_csv(const Table &table);
Table parse_csv(const std::string &text);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path &path, const std::string &content);
std::string read_file(const std::filesystem::path &path);

void write_csv(const std::filesystem::path &path, const Table &table);
Table read_csv(const std::filesystem::path &path);
void write_json(const std::filesystem::path &path, const Json &json);

} // namespace taillab::io
