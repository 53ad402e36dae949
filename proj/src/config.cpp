#include "cvr/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": empty key");
    out.values_[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  consumed_[key] = true;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  const auto v = get(key);
  if (!v || v->empty()) return fallback;
  std::size_t used = 0;
  double parsed = 0;
  try {
    parsed = std::stod(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v->size())
    throw std::runtime_error("config key '" + key + "': bad number '" + *v + "'");
  return parsed;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
  const auto v = get(key);
  if (!v || v->empty()) return fallback;
  std::size_t used = 0;
  long parsed = 0;
  try {
    parsed = std::stol(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v->size())
    throw std::runtime_error("config key '" + key + "': bad integer '" + *v + "'");
  return parsed;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  const auto v = get(key);
  if (!v || v->empty()) return fallback;
  std::size_t used = 0;
  unsigned long long parsed = 0;
  try {
    parsed = std::stoull(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v->size())
    throw std::runtime_error("config key '" + key + "': bad integer '" + *v + "'");
  return parsed;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v || v->empty()) return fallback;
  if (*v == "true" || *v == "on" || *v == "1") return true;
  if (*v == "false" || *v == "off" || *v == "0") return false;
  throw std::runtime_error("config key '" + key + "': bad boolean '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key) const {
  std::vector<double> out;
  const auto v = get(key);
  if (!v || v->empty()) return out;
  std::istringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double parsed = 0;
    try {
      parsed = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw std::runtime_error("config key '" + key + "': bad list entry '" +
                               item + "'");
    out.push_back(parsed);
  }
  return out;
}

std::vector<std::string> KeyValueConfig::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!consumed_.count(k)) out.push_back(k);
  return out;
}

}  // namespace cvr
