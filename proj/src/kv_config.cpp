#include "betaplane/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "betaplane/errors.hpp"

namespace betaplane {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text[0] == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError("config: key '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

KvConfig KvConfig::parse(const std::string& text, const std::string& origin) {
  KvConfig cfg;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path.string());
}

const std::string* KvConfig::raw(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

double KvConfig::get(const std::string& key, double fallback) {
  const std::string* s = raw(key);
  return s ? parse_number<double>(key, *s) : fallback;
}

int KvConfig::get(const std::string& key, int fallback) {
  const std::string* s = raw(key);
  return s ? parse_number<int>(key, *s) : fallback;
}

std::uint64_t KvConfig::get(const std::string& key, std::uint64_t fallback) {
  const std::string* s = raw(key);
  return s ? parse_number<std::uint64_t>(key, *s) : fallback;
}

bool KvConfig::get(const std::string& key, bool fallback) {
  const std::string* s = raw(key);
  if (!s) return fallback;
  if (*s == "true" || *s == "1" || *s == "yes") return true;
  if (*s == "false" || *s == "0" || *s == "no") return false;
  throw ParseError("config: key '" + key + "' expects a boolean, got '" + *s + "'");
}

std::string KvConfig::get(const std::string& key, const std::string& fallback) {
  const std::string* s = raw(key);
  return s ? *s : fallback;
}

std::vector<double> KvConfig::get(const std::string& key, const std::vector<double>& fallback) {
  const std::string* s = raw(key);
  if (!s) return fallback;
  std::vector<double> out;
  for (const auto& tok : split_list(*s)) out.push_back(parse_number<double>(key, tok));
  return out;
}

std::vector<int> KvConfig::get(const std::string& key, const std::vector<int>& fallback) {
  const std::string* s = raw(key);
  if (!s) return fallback;
  std::vector<int> out;
  for (const auto& tok : split_list(*s)) out.push_back(parse_number<int>(key, tok));
  return out;
}

void KvConfig::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (used_.count(key)) continue;
    if (!unknown.empty()) unknown += ", ";
    unknown += key + " (line " + std::to_string(lines_.at(key)) + ")";
  }
  if (!unknown.empty()) throw ParseError(origin_ + ": unknown key(s): " + unknown);
}

}  // namespace betaplane
