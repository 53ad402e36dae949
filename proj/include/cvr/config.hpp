#ifndef CVR_CONFIG_HPP
#define CVR_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cvr {

// Flat `key = value` text config. `[section]` headers prefix later keys as
// "section.key", `#` starts a comment, blank lines are ignored. Values keep
// inner whitespace; surrounding whitespace is trimmed.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  // `--set section.key=value` style override; replaces or inserts.
  void set(const std::string& key, const std::string& value);

  std::optional<std::string> get(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  // Typed accessors; throw std::runtime_error naming the key on bad input.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  // Keys never read through the accessors above; used to reject typos.
  std::vector<std::string> unconsumed() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
};

}  // namespace cvr

#endif  // CVR_CONFIG_HPP
