#include "dpdo/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dpdo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_real(const std::string& text, double& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::string raw;
  int line_no = 0;
  auto error = [&](const std::string& msg) {
    throw InvalidConfiguration(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) error("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) error("missing key before '='");
    if (value.empty()) error("missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.has(full)) {
      error("duplicate key '" + full + "' (first set on line " + std::to_string(cfg.entries_.at(full).line) + ")");
    }
    cfg.entries_[full] = Entry{value, line_no};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfiguration(path + ": cannot open config file");
  return parse(in, path);
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidConfiguration(source_ + ": " + key + ": " + message);
  throw InvalidConfiguration(source_ + ":" + std::to_string(it->second.line) + ": " + key + ": " + message);
}

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidConfiguration(source_ + ": missing required field '" + key + "'");
  return it->second;
}

std::string Config::text(const std::string& key) const { return entry(key).value; }

double Config::real(const std::string& key) const {
  double v = 0.0;
  if (!parse_real(entry(key).value, v)) fail(key, "expected a real number, got '" + entry(key).value + "'");
  return v;
}

int Config::integer(const std::string& key) const {
  const std::string& value = entry(key).value;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) fail(key, "expected an integer, got '" + value + "'");
  return v;
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(entry(key).value)) {
    double v = 0.0;
    if (!parse_real(item, v)) fail(key, "expected a list of real numbers, bad item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::texts(const std::string& key) const {
  auto items = split_list(entry(key).value);
  for (const auto& item : items) {
    if (item.empty()) fail(key, "empty list item");
  }
  return items;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double Config::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

int Config::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

}  // namespace dpdo
