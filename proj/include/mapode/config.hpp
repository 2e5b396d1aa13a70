#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mapode/rational.hpp"

namespace mapode {

// Flat "key = value" config file; '#' starts a comment; blank lines ignored.
// Unknown keys and malformed lines are rejected at load time.
class RunConfig {
public:
  static RunConfig load(const std::string& path);
  static RunConfig parse(std::string_view text, const std::string& origin = "<config>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  // Decimal real or rational "a/b".
  double number(const std::string& key) const;
  // Exact: "a/b" stays rational, decimals go through the binary fraction.
  Rational rational(const std::string& key) const;
  long integer(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::vector<std::string>& valid_keys();

private:
  std::map<std::string, std::string> values_;
};

// Shared numeric-text parsing ("a/b" or decimal).
double parse_number(std::string_view text);
Rational parse_rational_text(std::string_view text);
std::vector<double> parse_vector(std::string_view text);  // comma-separated

}  // namespace mapode
