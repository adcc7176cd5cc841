#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim {

/// One `key = value` entry of a flat or sectioned text file.
struct KvEntry {
  std::string value;
  std::size_t line = 0;
  mutable bool consumed = false;
};

/// A set of key/value pairs with consumption tracking. Readers mark every
/// key they understand; anything left over is reported as an unknown key,
/// which keeps config files typo-proof.
class KvSection {
 public:
  void insert(const std::string& key, const std::string& value, std::size_t line) {
    if (entries_.count(key) > 0) {
      throw ParseError("duplicate key '" + key + "'", line);
    }
    entries_[key] = KvEntry{value, line, false};
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  /// Inserts or replaces a key, e.g. for in-memory overrides.
  void set(const std::string& key, const std::string& value) {
    entries_[key] = KvEntry{value, 0, false};
  }

  std::optional<std::string> get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return it->second.value;
  }

  std::string require_string(const std::string& key) const {
    auto v = get_string(key);
    if (!v) throw ConfigError(context_ + "missing required key '" + key + "'");
    return *v;
  }

  double require_double(const std::string& key) const {
    return to_double(key, require_string(key));
  }

  double get_double(const std::string& key, double fallback) const {
    const auto v = get_string(key);
    return v ? to_double(key, *v) : fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get_string(key);
    if (!v) return fallback;
    try {
      return parse_u64(trim(*v));
    } catch (const ParseError&) {
      throw ConfigError(context_ + "key '" + key + "' is not an unsigned integer");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto v = get_string(key);
    if (!v) return fallback;
    const auto t = trim(*v);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(context_ + "key '" + key + "' is not a boolean");
  }

  std::vector<double> get_list(const std::string& key) const {
    const auto v = get_string(key);
    if (!v) return {};
    std::vector<double> out;
    for (const auto& tok : split_tokens(*v)) out.push_back(to_double(key, tok));
    return out;
  }

  /// Keys never read by any consumer, in file order.
  std::vector<std::string> unconsumed() const {
    std::vector<std::pair<std::size_t, std::string>> pending;
    for (const auto& [key, entry] : entries_) {
      if (!entry.consumed) pending.emplace_back(entry.line, key);
    }
    std::sort(pending.begin(), pending.end());
    std::vector<std::string> out;
    for (auto& [line, key] : pending) out.push_back(key);
    return out;
  }

  void set_context(std::string context) { context_ = std::move(context); }
  const std::string& context() const { return context_; }

 private:
  double to_double(const std::string& key, std::string_view raw) const {
    try {
      return parse_double(trim(raw));
    } catch (const ParseError&) {
      throw ConfigError(context_ + "key '" + key + "' is not a number");
    }
  }

  std::map<std::string, KvEntry> entries_;
  std::string context_;
};

namespace detail {

inline bool parse_kv_line(std::string_view line, std::string& key, std::string& value) {
  const auto stripped = strip_comment(line);
  if (stripped.empty()) return false;
  const auto eq = stripped.find('=');
  if (eq == std::string_view::npos) {
    throw ParseError("expected 'key = value'", 0);
  }
  key = std::string(trim(stripped.substr(0, eq)));
  value = std::string(trim(stripped.substr(eq + 1)));
  if (key.empty()) throw ParseError("empty key", 0);
  return true;
}

}  // namespace detail

/// Flat key-value file: `key = value`, '#' comments.
inline KvSection load_kv_file(std::istream& in, const std::string& name = {}) {
  KvSection section;
  section.set_context(name.empty() ? "" : name + ": ");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string key, value;
    try {
      if (!detail::parse_kv_line(line, key, value)) continue;
    } catch (const ParseError& e) {
      throw ParseError(name + ": " + e.what(), lineno);
    }
    section.insert(key, value, lineno);
  }
  return section;
}

inline KvSection load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  return load_kv_file(in, path);
}

/// Sectioned key-value file: `[section]` headers over flat entries.
class IniFile {
 public:
  static IniFile load(std::istream& in, const std::string& name = {}) {
    IniFile ini;
    ini.name_ = name;
    std::string line;
    std::size_t lineno = 0;
    std::string current;
    while (std::getline(in, line)) {
      ++lineno;
      const auto stripped = strip_comment(line);
      if (stripped.empty()) continue;
      if (stripped.front() == '[') {
        if (stripped.back() != ']') throw ParseError(name + ": unterminated section header", lineno);
        current = std::string(trim(stripped.substr(1, stripped.size() - 2)));
        if (current.empty()) throw ParseError(name + ": empty section name", lineno);
        if (ini.sections_.count(current) == 0) {
          ini.sections_[current].set_context(name + " [" + current + "]: ");
          ini.order_.push_back(current);
        }
        continue;
      }
      if (current.empty()) throw ParseError(name + ": key outside any [section]", lineno);
      std::string key, value;
      try {
        detail::parse_kv_line(stripped, key, value);
      } catch (const ParseError& e) {
        throw ParseError(name + ": " + e.what(), lineno);
      }
      ini.sections_[current].insert(key, value, lineno);
    }
    return ini;
  }

  static IniFile load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    return load(in, path);
  }

  bool has_section(const std::string& section) const {
    return sections_.count(section) > 0;
  }

  /// Inserts or replaces one key, creating the section when needed. Used by
  /// parameter sweeps to override scenario values without touching the file.
  void set(const std::string& section, const std::string& key,
           const std::string& value) {
    if (sections_.count(section) == 0) {
      sections_[section].set_context(name_ + " [" + section + "]: ");
      order_.push_back(section);
    }
    sections_[section].set(key, value);
  }

  /// Returns the section (an empty one if absent) and marks it visited.
  const KvSection& section(const std::string& section) const {
    visited_.insert(section);
    const auto it = sections_.find(section);
    if (it != sections_.end()) return it->second;
    static const KvSection empty;
    return empty;
  }

  /// Throws if any section or key was never consumed.
  void ensure_fully_consumed() const {
    for (const auto& sec : order_) {
      if (visited_.count(sec) == 0) {
        throw ConfigError(name_ + ": unknown section [" + sec + "]");
      }
      const auto leftover = sections_.at(sec).unconsumed();
      if (!leftover.empty()) {
        throw ConfigError(name_ + ": unknown key '" + leftover.front() + "' in [" + sec + "]");
      }
    }
  }

 private:
  std::string name_;
  std::map<std::string, KvSection> sections_;
  std::vector<std::string> order_;
  mutable std::set<std::string> visited_;
};

}  // namespace lcvsim
