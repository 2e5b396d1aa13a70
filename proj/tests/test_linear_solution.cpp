#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mapode/errors.hpp"
#include "mapode/linear_solution.hpp"
#include "mapode/stability.hpp"

using namespace mapode;

namespace {

LinearizedSystem logistic_system(double p, double x_star, int order) {
  return linearize(truncate(MapSpec::logistic(p), order), x_star);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("eigendecompose recovers the factored spectrum at p = 4") {
  auto ls = logistic_system(4.0, 0.75, 3);
  auto eig = eigendecompose(ls);
  REQUIRE(eig.eigenvalues.size() == 3);
  const double s6 = std::sqrt(6.0);
  CHECK(std::abs(eig.eigenvalues[0] - std::complex<double>(-3, 0)) < 1e-8);
  CHECK(std::abs(eig.eigenvalues[1] - std::complex<double>(0, -s6)) < 1e-8);
  CHECK(std::abs(eig.eigenvalues[2] - std::complex<double>(0, s6)) < 1e-8);
}

TEST_CASE("M S = S D within tolerance and eigenvalues match Durand-Kerner") {
  for (double p : {2.0, 3.3, 4.4}) {
    for (int order : {2, 3, 4, 6}) {
      auto sys = truncate(MapSpec::logistic(p), order);
      auto ls = linearize(sys, 0.37);
      auto eig = eigendecompose(ls);
      const auto n = static_cast<size_t>(order);

      double norm_m = 0.0;
      for (double v : ls.companion) norm_m = std::max(norm_m, std::abs(v));
      for (size_t col = 0; col < n; ++col) {
        for (size_t i = 0; i < n; ++i) {
          std::complex<double> acc = 0.0;
          for (size_t j = 0; j < n; ++j) acc += ls.companion[i * n + j] * eig.similarity.at(j, col);
          std::complex<double> rhs = eig.eigenvalues[col] * eig.similarity.at(i, col);
          CHECK(std::abs(acc - rhs) < 1e-8 * norm_m);
        }
      }

      auto dk = roots(char_poly(order, Rational::from_double(ls.alpha)));
      REQUIRE(dk.size() == n);
      for (size_t k = 0; k < n; ++k) {
        double best = 1e300;
        for (const auto& z : dk) best = std::min(best, std::abs(z - eig.eigenvalues[k]));
        CHECK(best < 1e-7);
      }
      CHECK(eig.condition >= 1.0);
      CHECK(std::isfinite(eig.condition));
    }
  }
}

TEST_CASE("order 1 decomposition is trivial") {
  auto ls = logistic_system(3.0, 0.4, 1);
  auto eig = eigendecompose(ls);
  REQUIRE(eig.eigenvalues.size() == 1);
  CHECK(std::abs(eig.eigenvalues[0] - std::complex<double>(-ls.alpha, 0)) < 1e-12);
  CHECK(std::abs(eig.similarity.at(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("exact double root raises DegenerateSpectrum") {
  // alpha = 1/2, order 2: (mu + 1)^2 / 2.
  auto sys = truncate(MapSpec::polynomial({0.0, 0.5}), 2);  // f(x) = x/2, f' = 1/2
  auto ls = linearize(sys, 0.0);
  REQUIRE(ls.alpha == 0.5);
  CHECK_THROWS_AS(eigendecompose(ls), DegenerateSpectrum);
  CHECK_THROWS_AS(propagate_closed(ls, {1.0, 0.0}, 1.0), DegenerateSpectrum);
}

TEST_CASE("propagate at t = 0 returns the initial state exactly") {
  auto ls = logistic_system(3.5, 0.2, 3);
  std::vector<double> xi0 = {0.3, -0.1, 0.7};
  CHECK(propagate_closed(ls, xi0, 0.0) == xi0);
  CHECK(propagate_series(ls, xi0, 0.0) == xi0);
}

TEST_CASE("homogeneous zero solution stays at zero from a fixed point") {
  auto ls = logistic_system(3.5, 1.0 - 1.0 / 3.5, 3);
  std::vector<double> zero(3, 0.0);
  for (double t : {0.5, 2.0, 7.0}) {
    auto out = propagate_closed(ls, zero, t);
    for (double v : out) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("scalar case integrates to e^{-alpha t}") {
  // order 1, alpha = 2, beta = 0: xi(1) = e^-2.
  auto sys = truncate(MapSpec::polynomial({0.0, -1.0}), 1);  // f' = -1 -> alpha = 2
  auto ls = linearize(sys, 0.0);
  REQUIRE(ls.alpha == 2.0);
  REQUIRE(ls.beta == 0.0);
  auto out = propagate_closed(ls, {1.0}, 1.0);
  CHECK(out[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  auto ser = propagate_series(ls, {1.0}, 1.0);
  CHECK(ser[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("Jordan-block case via the series propagator") {
  // order 2, alpha = 1/2: solution (1 + t) e^{-t} from xi0 = (1, 0).
  auto sys = truncate(MapSpec::polynomial({0.0, 0.5}), 2);
  auto ls = linearize(sys, 0.0);
  auto out = propagate_series(ls, {1.0, 0.0}, 1.0);
  CHECK(out[0] == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(out[1] == doctest::Approx(-std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("closed form and series agree on random cases") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int cases = 0;
  while (cases < 24) {
    int order = 1 + static_cast<int>(rng() % 6);
    double p = 1.0 + 3.0 * unit(rng);
    double x_star = unit(rng);
    auto ls = logistic_system(p, x_star, order);
    std::vector<double> xi0(static_cast<size_t>(order));
    for (auto& v : xi0) v = 2.0 * unit(rng) - 1.0;
    for (double t : {0.1, 1.0, 5.0}) {
      std::vector<double> closed;
      try {
        closed = propagate_closed(ls, xi0, t);
      } catch (const DegenerateSpectrum&) {
        break;
      }
      auto series = propagate_series(ls, xi0, t);
      double scale = 1.0;
      for (double v : closed) scale = std::max(scale, std::abs(v));
      CHECK(max_abs_diff(closed, series) < 1e-8 * scale);
    }
    ++cases;
  }
}

TEST_CASE("semigroup property of the affine flow") {
  auto ls = logistic_system(3.8, 0.3, 4);
  std::vector<double> xi0 = {0.4, -0.2, 0.05, 0.6};
  for (auto [t1, t2] : {std::pair{0.3, 0.9}, std::pair{1.1, 0.5}}) {
    auto two_step = propagate_closed(ls, propagate_closed(ls, xi0, t1), t2);
    auto one_step = propagate_closed(ls, xi0, t1 + t2);
    double scale = 1.0;
    for (double v : one_step) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(two_step, one_step) < 1e-8 * scale);
  }
}

TEST_CASE("a right-half-plane eigenvalue makes the flow grow without bound") {
  // Order 5 is linearly unstable at any reference point.
  auto ls = logistic_system(3.5, 1.0 - 1.0 / 3.5, 5);
  auto eig = eigendecompose(ls);
  double max_re = -1e300;
  for (const auto& mu : eig.eigenvalues) max_re = std::max(max_re, mu.real());
  REQUIRE(max_re > 1e-6);
  std::vector<double> xi0 = {1e-3, 0, 0, 0, 0};
  double prev = 0.0;
  for (double t : {10.0, 20.0, 40.0}) {
    auto out = propagate_series(ls, xi0, t);
    double norm = 0.0;
    for (double v : out) norm = std::max(norm, std::abs(v));
    CHECK(norm > 4.0 * prev);
    prev = norm;
  }
  CHECK(prev > 1e3);
}

TEST_CASE("zero eigenvalue (alpha = 0) keeps the drive term finite") {
  // alpha = 0 at a reference point where f'(x*) = 1; beta != 0 exercises the
  // (e^{mu t} - 1)/mu -> t limit against the series route.
  double p = 3.1;
  double x_star = (1.0 - 1.0 / p) / 2.0;
  auto ls = logistic_system(p, x_star, 3);
  REQUIRE(std::abs(ls.alpha) < 1e-12);
  REQUIRE(std::abs(ls.beta) > 1e-3);
  std::vector<double> xi0 = {0.01, 0.0, 0.02};
  for (double t : {0.5, 2.0}) {
    auto closed = propagate_closed(ls, xi0, t);
    auto series = propagate_series(ls, xi0, t);
    double scale = 1.0;
    for (double v : closed) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(closed, series) < 1e-8 * scale);
  }
}
