#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace betaplane::csv {

/// Shortest round-trip decimal representation ('.' decimal point).
std::string format(double v);
std::string format(long long v);
inline std::string format(int v) { return format(static_cast<long long>(v)); }
inline std::string format(std::string_view s) { return std::string(s); }
inline std::string format(const char* s) { return s; }
inline std::string format(bool b) { return b ? "1" : "0"; }

/// Comma-separated, LF line endings, header first.
class Writer {
 public:
  Writer(const std::filesystem::path& path, std::vector<std::string> header);

  template <class... Ts>
  void row(const Ts&... values) {
    write_row({format(values)...});
  }
  void write_row(const std::vector<std::string>& cells);
  std::size_t columns() const { return ncols_; }

 private:
  std::ofstream os_;
  std::size_t ncols_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws ParseError if missing.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

Table read(const std::filesystem::path& path);

}  // namespace betaplane::csv
