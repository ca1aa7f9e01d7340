#pragma once

// Flat `key = value` configuration text. A `[section]` header prefixes the
// keys that follow it ("section.key"); `#` starts a comment; list values are
// comma separated. Every key remembers its source line for diagnostics.

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "dpdo/common.hpp"

namespace dpdo {

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& source() const { return source_; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  /// Accessors throw InvalidConfiguration naming the key (and line) when the
  /// key is missing or its value does not parse.
  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;

  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;

  /// "source:line: key: message"
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const Entry& entry(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace dpdo
