#include "accd/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "accd/error.hpp"

namespace accd::data {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

}  // namespace

Dataset parse_csv(std::istream& in, StorageType type) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      cols = cells.size();
      bool numeric = true;
      for (auto c : cells) numeric = numeric && parse_number(c).has_value();
      if (!numeric) continue;  // header row
    }
    if (cells.size() != cols) {
      throw FormatError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(cols) + " columns, found " + std::to_string(cells.size()),
                        line_no, cells.size() > cols ? cols + 1 : cells.size() + 1);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw FormatError("csv line " + std::to_string(line_no) + ", column " +
                              std::to_string(c + 1) + ": not a number: '" + std::string(cells[c]) + "'",
                          line_no, c + 1);
      }
      double x = type == StorageType::Float32 ? static_cast<double>(static_cast<float>(*v)) : *v;
      if (!std::isfinite(x)) {
        throw FormatError("csv line " + std::to_string(line_no) + ", column " +
                              std::to_string(c + 1) + ": NaN/Inf not allowed",
                          line_no, c + 1);
      }
      values.push_back(x);
    }
    ++rows;
  }
  return Dataset(rows, cols, std::move(values));
}

Dataset load_csv(const std::filesystem::path& path, StorageType type) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, type);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  char buf[32];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = ds.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, row[j]);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace accd::data
