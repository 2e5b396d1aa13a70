#include "mapode/maps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "mapode/errors.hpp"
#include "mapode/stability.hpp"

namespace mapode {

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad real number '" + std::string(s) + "'");
  return v;
}

}  // namespace

MapSpec::MapSpec(MapKind kind, double p, std::vector<double> coeffs)
    : kind_(kind), p_(p), coeffs_(std::move(coeffs)) {}

MapSpec MapSpec::logistic(double p) {
  if (!std::isfinite(p)) throw DomainError("logistic map: p must be finite");
  return MapSpec(MapKind::Logistic, p, {0.0, p, -p});
}

MapSpec MapSpec::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("polynomial map: empty coefficient list");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw DomainError("polynomial map: non-finite coefficient");
  if (coeffs.size() > 1 && coeffs.back() == 0.0)
    throw DomainError("polynomial map: leading coefficient is zero");
  return MapSpec(MapKind::Polynomial, 0.0, std::move(coeffs));
}

MapSpec MapSpec::parse(std::string_view text) {
  if (text.starts_with("logistic:")) return logistic(parse_real(text.substr(9)));
  if (text.starts_with("poly:")) {
    std::vector<double> coeffs;
    std::string_view rest = text.substr(5);
    while (!rest.empty()) {
      size_t comma = rest.find(',');
      coeffs.push_back(parse_real(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return polynomial(std::move(coeffs));
  }
  throw ParseError("map spec must be 'logistic:<p>' or 'poly:<c0>,<c1>,...', got '" +
                   std::string(text) + "'");
}

double MapSpec::eval(double x) const {
  if (!std::isfinite(x)) throw DomainError("MapSpec::eval: non-finite input");
  double acc = 0.0;
  for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

double MapSpec::deriv(double x) const {
  if (!std::isfinite(x)) throw DomainError("MapSpec::deriv: non-finite input");
  double acc = 0.0;
  for (size_t i = coeffs_.size(); i-- > 1;) acc = acc * x + coeffs_[i] * static_cast<double>(i);
  return acc;
}

std::vector<double> MapSpec::fixed_points() const {
  // Roots of g(x) = f(x) - x.
  std::vector<double> g = coeffs_;
  if (g.size() < 2) g.resize(2, 0.0);
  g[1] -= 1.0;
  while (g.size() > 1 && g.back() == 0.0) g.pop_back();
  if (g.size() == 1) {
    if (g[0] == 0.0) throw DomainError("fixed_points: degenerate: f(x)-x == 0 identically");
    return {};
  }

  auto eval_g = [&](double x) {
    double acc = 0.0;
    for (size_t i = g.size(); i-- > 0;) acc = acc * x + g[i];
    return acc;
  };
  auto eval_dg = [&](double x) {
    double acc = 0.0;
    for (size_t i = g.size(); i-- > 1;) acc = acc * x + g[i] * static_cast<double>(i);
    return acc;
  };

  std::vector<double> out;
  for (const auto& z : poly_roots(g)) {
    if (std::abs(z.imag()) >= 1e-9) continue;
    double x = z.real();
    for (int it = 0; it < 3; ++it) {
      double d = eval_dg(x);
      if (d == 0.0) break;
      x -= eval_g(x) / d;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  // Collapse numerically coincident roots (multiple fixed points).
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)); }),
            out.end());

  std::vector<double> residuals;
  bool ok = true;
  for (double x : out) {
    residuals.push_back(std::abs(eval_g(x)));
    ok = ok && residuals.back() < 1e-10;
  }
  if (!ok) throw NumericError("fixed_points: residual above 1e-10", residuals);
  return out;
}

std::string MapSpec::to_string() const {
  char buf[64];
  if (kind_ == MapKind::Logistic) {
    std::snprintf(buf, sizeof buf, "logistic:%.17g", p_);
    return buf;
  }
  std::string s = "poly:";
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", coeffs_[i]);
    if (i) s += ',';
    s += buf;
  }
  return s;
}

}  // namespace mapode
