#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nagumo {

/// Flat key/value configuration: one `key = value` pair per line, `#` starts
/// a comment, keys are dotted lowercase words. Values are numbers, words,
/// number lists `[1, 2, 3]` or pair lists `[(0.8, 20), (1.0, 1)]`.
/// Serialization is canonical (sorted keys, shortest round-trip numbers), so
/// parse -> serialize -> parse is the identity.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  /// All keys in sorted order.
  std::vector<std::string> keys() const;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  std::string word(const std::string& key) const;
  std::string word_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> list(const std::string& key) const;
  std::vector<std::pair<double, double>> pair_list(const std::string& key) const;

  void set_number(const std::string& key, double v);
  void set_integer(const std::string& key, int v);
  void set_word(const std::string& key, const std::string& v);
  void set_list(const std::string& key, const std::vector<double>& v);
  void set_pair_list(const std::string& key,
                     const std::vector<std::pair<double, double>>& v);
  void erase(const std::string& key);

  std::string serialize() const;

  friend bool operator==(const Config& a, const Config& b) {
    return a.values_ == b.values_;
  }

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

/// Canonical shortest text form of a double that parses back exactly.
std::string format_number(double v);

}  // namespace nagumo
