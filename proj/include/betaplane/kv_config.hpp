#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace betaplane {

/// Flat "key = value" configuration with '#' comments.
///
/// Readers pull values with get(); every key fetched is marked consumed and
/// finish() rejects whatever is left, so a mistyped key is a ParseError
/// rather than a silently ignored setting.
class KvConfig {
 public:
  KvConfig() = default;
  static KvConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KvConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double get(const std::string& key, double fallback);
  int get(const std::string& key, int fallback);
  std::uint64_t get(const std::string& key, std::uint64_t fallback);
  bool get(const std::string& key, bool fallback);
  std::string get(const std::string& key, const std::string& fallback);
  std::string get(const std::string& key, const char* fallback) { return get(key, std::string(fallback)); }
  /// Comma- or whitespace-separated list of numbers.
  std::vector<double> get(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> get(const std::string& key, const std::vector<int>& fallback);

  /// Throws ParseError naming every key that was never requested.
  void finish() const;

  /// Every parsed key and its raw text, sorted by key.
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  const std::string* raw(const std::string& key);
  std::string origin_;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::set<std::string> used_;
};

}  // namespace betaplane
