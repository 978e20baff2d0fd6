#include "nagumo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nagumo/errors.hpp"

namespace nagumo {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
          c == '-'))
      return false;
  }
  return true;
}

double parse_number(const std::string& key, const std::string& v) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError("config: field '" + key + "' is not a number: '" + v + "'");
  return x;
}

// splits "[a, b, (c, d)]" at top-level commas
std::vector<std::string> split_bracket_list(const std::string& key,
                                            const std::string& v) {
  const std::string t = trim(v);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ConfigError("config: field '" + key + "' is not a list: '" + v + "'");
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const char c = t[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::string best;
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      if (best.empty() || std::strlen(buf) < best.size()) best = buf;
      if (prec >= 17) break;
    }
  }
  if (best.empty()) best = buf;
  return best;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("config: invalid key '" + key + "' on line " +
                        std::to_string(lineno));
    if (val.empty())
      throw ConfigError("config: empty value for '" + key + "' on line " +
                        std::to_string(lineno));
    if (cfg.values_.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    cfg.values_[key] = val;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

const std::string& Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("config: missing required field '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  return parse_number(key, raw(key));
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("config: field '" + key + "' must be an integer");
  return i;
}

int Config::integer_or(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Config::word(const std::string& key) const { return raw(key); }

std::string Config::word_or(const std::string& key,
                            const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

std::vector<double> Config::list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_bracket_list(key, raw(key)))
    out.push_back(parse_number(key, item));
  return out;
}

std::vector<std::pair<double, double>> Config::pair_list(
    const std::string& key) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split_bracket_list(key, raw(key))) {
    if (item.size() < 2 || item.front() != '(' || item.back() != ')')
      throw ConfigError("config: field '" + key + "' must hold (a, b) pairs");
    const std::string body = item.substr(1, item.size() - 2);
    const size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw ConfigError("config: field '" + key + "' must hold (a, b) pairs");
    out.emplace_back(parse_number(key, trim(body.substr(0, comma))),
                     parse_number(key, trim(body.substr(comma + 1))));
  }
  return out;
}

void Config::set_number(const std::string& key, double v) {
  values_[key] = format_number(v);
}

void Config::set_integer(const std::string& key, int v) {
  values_[key] = std::to_string(v);
}

void Config::set_word(const std::string& key, const std::string& v) {
  values_[key] = v;
}

void Config::set_list(const std::string& key, const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  values_[key] = s + "]";
}

void Config::set_pair_list(const std::string& key,
                           const std::vector<std::pair<double, double>>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += "(" + format_number(v[i].first) + ", " + format_number(v[i].second) + ")";
  }
  values_[key] = s + "]";
}

void Config::erase(const std::string& key) { values_.erase(key); }

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

}  // namespace nagumo
