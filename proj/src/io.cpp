#include "taillab/io.hpp"

#include "taillab/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace taillab::io {

void Table::add_column(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != rows())
    throw Error(ErrorKind::InvalidArgument, "column '" + name + "' has the wrong length");
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

const std::vector<double> &Table::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return columns[i];
  throw Error(ErrorKind::InvalidArgument, "no column named '" + name + "'");
}

std::string format_csv(const Table &table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.12e", table.columns[c][r]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

} // namespace

Table parse_csv(const std::string &text) {
  std::stringstream in(text);
  std::string line;
  Table table;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidArgument, "CSV is empty");
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw Error(ErrorKind::InvalidArgument,
                  "CSV line " + std::to_string(line_no) + " has the wrong number of fields");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char *end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || *end != '\0')
        throw Error(ErrorKind::InvalidArgument,
                    "CSV line " + std::to_string(line_no) + ": '" + cells[c] + "' is not a number");
      table.columns[c].push_back(v);
    }
  }
  return table;
}

void write_atomic(const std::filesystem::path &path, const std::string &content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::InvalidArgument, "cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::filesystem::path &path, const Table &table) {
  write_atomic(path, format_csv(table));
}

Table read_csv(const std::filesystem::path &path) { return parse_csv(read_file(path)); }

void write_json(const std::filesystem::path &path, const Json &json) {
  write_atomic(path, json.dump(2) + "\n");
}

} // namespace taillab::io
