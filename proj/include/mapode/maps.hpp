#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mapode {

enum class MapKind { Logistic, Polynomial };

// A smooth 1-D map f(x), restricted to polynomials. Logistic(p) is stored as
// the coefficient list [0, p, -p], so logistic and polynomial evaluation
// share one code path (Horner) and agree bit for bit.
class MapSpec {
public:
  static MapSpec logistic(double p);
  // Coefficients lowest degree first; nonempty, last entry nonzero.
  static MapSpec polynomial(std::vector<double> coeffs);
  // "logistic:<p>" or "poly:<c0>,<c1>,..."
  static MapSpec parse(std::string_view text);

  MapKind kind() const { return kind_; }
  double logistic_p() const { return p_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double eval(double x) const;
  double deriv(double x) const;  // analytic term-by-term derivative
  // All real roots of f(x) - x, ascending, each with |f(x)-x| < 1e-10.
  std::vector<double> fixed_points() const;

  std::string to_string() const;

private:
  MapSpec(MapKind kind, double p, std::vector<double> coeffs);

  MapKind kind_;
  double p_ = 0.0;  // only meaningful for Logistic
  std::vector<double> coeffs_;
};

}  // namespace mapode
