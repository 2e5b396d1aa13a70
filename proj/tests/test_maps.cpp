#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mapode/errors.hpp"
#include "mapode/maps.hpp"

using mapode::MapSpec;

TEST_CASE("eval") {
  CHECK(MapSpec::logistic(4.0).eval(0.5) == 1.0);
  CHECK(MapSpec::logistic(3.5).eval(0.0) == 0.0);
  CHECK(MapSpec::polynomial({1, 2, 3}).eval(2.0) == 17.0);
  CHECK_THROWS_AS(MapSpec::logistic(4.0).eval(std::numeric_limits<double>::infinity()),
                  mapode::DomainError);
}

TEST_CASE("deriv is analytic") {
  CHECK(MapSpec::logistic(4.0).deriv(0.5) == 0.0);
  CHECK(MapSpec::logistic(3.5).deriv(0.0) == 3.5);
  // f'(1 - 1/p) = 2 - p
  CHECK(MapSpec::logistic(3.5).deriv(1.0 - 1.0 / 3.5) == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK(MapSpec::polynomial({0, 0, 0, 2}).deriv(3.0) == 54.0);
}

TEST_CASE("deriv agrees with central differences on a grid") {
  const double h = 1e-5;
  std::vector<MapSpec> maps = {MapSpec::logistic(4.0), MapSpec::logistic(2.2),
                               MapSpec::polynomial({1, -2, 0.5, 3}),
                               MapSpec::polynomial({0.3, 1.7})};
  for (const auto& m : maps) {
    for (double x = -1.7; x < 1.8; x += 0.37) {
      double numeric = (m.eval(x + h) - m.eval(x - h)) / (2 * h);
      double analytic = m.deriv(x);
      CHECK(std::abs(numeric - analytic) < 1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("fixed points of the logistic map") {
  auto fp = MapSpec::logistic(4.0).fixed_points();
  REQUIRE(fp.size() == 2);
  CHECK(fp[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fp[1] == doctest::Approx(0.75).epsilon(1e-12));

  fp = MapSpec::logistic(2.0).fixed_points();
  REQUIRE(fp.size() == 2);
  CHECK(fp[1] == doctest::Approx(0.5).epsilon(1e-12));

  for (double p : {1.3, 2.7, 3.99}) {
    for (double x : MapSpec::logistic(p).fixed_points()) {
      MapSpec m = MapSpec::logistic(p);
      CHECK(std::abs(m.eval(x) - x) < 1e-10);
    }
  }
}

TEST_CASE("identity map is degenerate") {
  CHECK_THROWS_AS(MapSpec::polynomial({0, 1}).fixed_points(), mapode::DomainError);
  // f(x) = x + 2 never intersects the diagonal.
  CHECK(MapSpec::polynomial({2, 1}).fixed_points().empty());
}

TEST_CASE("logistic and its polynomial form are bit-identical") {
  for (double p : {0.5, 2.0, 3.5, 4.0, 5.25}) {
    MapSpec a = MapSpec::logistic(p);
    MapSpec b = MapSpec::polynomial({0.0, p, -p});
    for (double x = -2.0; x < 2.0; x += 0.173) {
      CHECK(a.eval(x) == b.eval(x));
      CHECK(a.deriv(x) == b.deriv(x));
    }
    CHECK(a.fixed_points() == b.fixed_points());
  }
}

TEST_CASE("parsing") {
  MapSpec m = MapSpec::parse("logistic:3.7");
  CHECK(m.kind() == mapode::MapKind::Logistic);
  CHECK(m.logistic_p() == 3.7);
  MapSpec q = MapSpec::parse("poly:1,0,-2.5");
  CHECK(q.coeffs() == std::vector<double>{1, 0, -2.5});
  CHECK(MapSpec::parse(m.to_string()).coeffs() == m.coeffs());
  CHECK_THROWS_AS(MapSpec::parse("henon:1.4"), mapode::ParseError);
  CHECK_THROWS_AS(MapSpec::parse("poly:1,,2"), mapode::ParseError);
  CHECK_THROWS_AS(MapSpec::polynomial({}), mapode::DomainError);
  CHECK_THROWS_AS(MapSpec::polynomial({1, 2, 0}), mapode::DomainError);
}
