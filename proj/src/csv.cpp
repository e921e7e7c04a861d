#include "betaplane/csv.hpp"

#include <charconv>
#include <sstream>

#include "betaplane/errors.hpp"

namespace betaplane::csv {

std::string format(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format(long long v) { return std::to_string(v); }

Writer::Writer(const std::filesystem::path& path, std::vector<std::string> header)
    : os_(path, std::ios::binary), ncols_(header.size()) {
  if (!os_) throw PreconditionError("csv: cannot open " + path.string() + " for writing");
  write_row(header);
}

void Writer::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw PreconditionError("csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
  if (!os_) throw PreconditionError("csv: write failed");
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("csv: missing column " + std::string(name));
}

double Table::number(std::size_t row, std::string_view name) const {
  const std::string& cell = rows.at(row).at(column(name));
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw ParseError("csv: not a number: " + cell);
  }
  return v;
}

Table read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("csv: cannot open " + path.string());
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw ParseError("csv: ragged row in " + path.string());
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ParseError("csv: empty file " + path.string());
  return t;
}

}  // namespace betaplane::csv
