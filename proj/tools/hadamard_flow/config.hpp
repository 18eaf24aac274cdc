#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hadamard/error.hpp"
#include "hadamard/spaces/coords_text.hpp"

namespace flow {

using hadamard::Errc;
using hadamard::raise;

struct Entry {
  std::string value;
  std::size_t line = 0;
};

/// Flat key=value config with [space], [field] and [run] sections.
class Config {
 public:
  static Config parse(std::string_view text, std::string origin = "<config>") {
    Config cfg;
    cfg.origin_ = std::move(origin);
    cfg.text_ = std::string(text);
    std::istringstream in(cfg.text_);
    std::string line, section;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
      const auto body = hadamard::detail::trim(line);
      if (body.empty()) continue;
      if (body.front() == '[') {
        if (body.back() != ']') cfg.fail(no, "unterminated section header");
        section = std::string(hadamard::detail::trim(body.substr(1, body.size() - 2)));
        if (!known_sections().count(section)) cfg.fail(no, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) cfg.fail(no, "expected key = value");
      if (section.empty()) cfg.fail(no, "key outside of a section");
      const std::string key(hadamard::detail::trim(body.substr(0, eq)));
      const std::string value(hadamard::detail::trim(body.substr(eq + 1)));
      if (key.empty()) cfg.fail(no, "empty key");
      auto& sec = cfg.sections_[section];
      if (sec.count(key)) cfg.fail(no, "duplicate key '" + key + "' in [" + section + "]");
      sec[key] = {value, no};
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::config_error, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  const std::string& origin() const noexcept { return origin_; }
  const std::string& text() const noexcept { return text_; }

  /// Directory of the config file, for resolving relative paths.
  std::string base_dir() const {
    const auto slash = origin_.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : origin_.substr(0, slash);
  }

  bool has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return std::nullopt;
    auto kt = it->second.find(key);
    if (kt == it->second.end()) return std::nullopt;
    return kt->second.value;
  }

  std::string require(const std::string& section, const std::string& key) const {
    auto v = get(section, key);
    if (!v) raise(Errc::config_error, origin_ + ": missing [" + section + "] " + key);
    return *v;
  }

  std::string get_or(const std::string& section, const std::string& key, std::string fallback) const {
    auto v = get(section, key);
    return v ? *v : fallback;
  }

  double number(const std::string& section, const std::string& key, std::optional<double> fallback = {}) const {
    auto v = get(section, key);
    if (!v) {
      if (fallback) return *fallback;
      raise(Errc::config_error, origin_ + ": missing [" + section + "] " + key);
    }
    try {
      return hadamard::detail::parse_double(*v);
    } catch (const hadamard::Error&) {
      fail(line_of(section, key), "[" + section + "] " + key + " is not a number: '" + *v + "'");
    }
  }

  std::uint64_t integer(const std::string& section, const std::string& key, std::optional<std::uint64_t> fallback = {}) const {
    auto v = get(section, key);
    if (!v) {
      if (fallback) return *fallback;
      raise(Errc::config_error, origin_ + ": missing [" + section + "] " + key);
    }
    std::uint64_t out = 0;
    const auto* first = v->data();
    const auto* last = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
      fail(line_of(section, key), "[" + section + "] " + key + " is not a nonnegative integer: '" + *v + "'");
    }
    return out;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key,
                              std::optional<std::vector<double>> fallback = {}) const {
    auto v = get(section, key);
    if (!v) {
      if (fallback) return *fallback;
      raise(Errc::config_error, origin_ + ": missing [" + section + "] " + key);
    }
    try {
      return hadamard::detail::parse_double_list(*v);
    } catch (const hadamard::Error&) {
      fail(line_of(section, key), "[" + section + "] " + key + " is not a number list: '" + *v + "'");
    }
  }

  /// Rejects keys outside the allowed list, reporting the offending line.
  void allow_keys(const std::string& section, const std::set<std::string>& allowed) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return;
    for (const auto& [key, entry] : it->second) {
      if (allowed.count(key)) continue;
      // Factor-set keys of product sets carry a "left." / "right." prefix.
      const auto dot = key.find('.');
      if (dot != std::string::npos && allowed.count("*" + key.substr(dot + 1))) continue;
      fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
    }
  }

  std::size_t line_of(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return 0;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? 0 : kt->second.line;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    raise(Errc::config_error, origin_ + ":" + std::to_string(line) + ": " + what);
  }

 private:
  static const std::set<std::string>& known_sections() {
    static const std::set<std::string> s{"space", "field", "run"};
    return s;
  }

  std::string origin_;
  std::string text_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// FNV-1a over the config bytes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace flow
