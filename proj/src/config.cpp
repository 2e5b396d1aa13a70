#include "mapode/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mapode/errors.hpp"

namespace mapode {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_number(std::string_view text) {
  text = strip(text);
  if (text.find('/') != std::string_view::npos) return parse_rational_text(text).to_double();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("bad number '" + std::string(text) + "'");
  return v;
}

Rational parse_rational_text(std::string_view text) {
  text = strip(text);
  if (text.find('/') != std::string_view::npos || text.find('.') == std::string_view::npos) {
    // "a/b" or plain integer: exact.
    try {
      return Rational::from_string(text);
    } catch (const ParseError&) {
      // fall through to the decimal path (e.g. "1e-3")
    }
  }
  return Rational::from_double(parse_number(text));
}

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  text = strip(text);
  while (!text.empty()) {
    size_t comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

const std::vector<std::string>& RunConfig::valid_keys() {
  static const std::vector<std::string> keys = {
      "method",        "h",           "rel_tol",      "abs_tol",     "t_end",
      "divergence_bound", "sample_stride", "t_transient", "t_measure",
      "renorm_interval", "peak_tol",   "fp_tol",       "chaos_tol",   "max_period",
      "threads",       "order",       "alpha",        "map",         "at",
      "t",             "x0",          "xi0",          "nu",          "lambda",
      "p",             "lo",          "hi",           "steps",       "nu_lo",
      "nu_hi",         "nu_steps",    "lambda_lo",    "lambda_hi",   "lambda_steps",
      "continuation",  "system",      "output",       "format",      "seed"};
  return keys;
}

RunConfig RunConfig::parse(std::string_view text, const std::string& origin) {
  RunConfig cfg;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;

    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key{strip(line.substr(0, eq))};
    std::string value{strip(line.substr(eq + 1))};
    if (key.empty() || value.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");

    const auto& keys = valid_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string known;
      for (const auto& k : keys) {
        if (!known.empty()) known += ", ";
        known += k;
      }
      throw ParseError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                       "'; valid keys: " + known);
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

const std::string& RunConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("config key '" + key + "' not set");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(raw(key)); }

Rational RunConfig::rational(const std::string& key) const { return parse_rational_text(raw(key)); }

long RunConfig::integer(const std::string& key) const {
  const std::string& s = raw(key);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad integer '" + s + "'");
  return v;
}

}  // namespace mapode
