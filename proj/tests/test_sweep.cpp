#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "mapode/errors.hpp"
#include "mapode/stability.hpp"
#include "mapode/sweep.hpp"

using namespace mapode;

namespace {

SweepPlan quick_plan() {
  SweepPlan plan;
  plan.classifier.t_transient = 250.0;
  plan.classifier.t_measure = 600.0;
  return plan;
}

PlaneScanResult synthetic(size_t rows, size_t cols,
                          const std::function<AttractorClass(size_t, size_t)>& label) {
  PlaneScanResult g;
  g.rows = rows;
  g.cols = cols;
  g.records.resize(rows * cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) g.records[r * cols + c].cls = label(r, c);
  return g;
}

AttractorClass fixed_point_label() {
  AttractorClass c;
  c.label = AttractorLabel::FixedPoint;
  return c;
}

AttractorClass periodic_label(int k) {
  AttractorClass c;
  c.label = AttractorLabel::Periodic;
  c.period = k;
  return c;
}

}  // namespace

TEST_CASE("logistic truncation sweep in the stable window is all fixed points") {
  SweepPlan plan = quick_plan();
  plan.system = SystemKind::TruncatedLogistic;
  plan.order = 3;
  plan.axis1 = {"p", 1.0, 3.9, 24};
  auto records = bifurcation_sweep(plan);
  REQUIRE(records.size() == 24);
  for (const auto& rec : records) {
    CHECK(rec.cls.label == AttractorLabel::FixedPoint);
    // The attractor is the map's nonzero fixed point 1 - 1/p.
    double p = rec.params.at("p");
    REQUIRE(rec.cls.peak_values.size() == 1);
    CHECK(rec.cls.peak_values[0] == doctest::Approx(1.0 - 1.0 / p).epsilon(2e-3));
  }
}

TEST_CASE("FollowAttractor and ColdStart agree on an all-fixed-point sweep") {
  SweepPlan plan = quick_plan();
  plan.system = SystemKind::ScaledCubic;
  plan.base_params["nu"] = 2.0 / 3.0;
  plan.axis1 = {"lambda", 0.25, 0.6, 12};
  plan.continuation = Continuation::FollowAttractor;
  auto follow = bifurcation_sweep(plan);
  plan.continuation = Continuation::ColdStart;
  auto cold = bifurcation_sweep(plan);
  REQUIRE(follow.size() == cold.size());
  for (size_t i = 0; i < follow.size(); ++i) {
    CHECK(follow[i].cls.label == AttractorLabel::FixedPoint);
    CHECK(same_class(follow[i].cls, cold[i].cls));
  }
}

TEST_CASE("doubling cascade appears in order along lambda") {
  SweepPlan plan = quick_plan();
  plan.classifier.t_transient = 400.0;
  plan.classifier.t_measure = 900.0;
  plan.base_params["nu"] = 2.0 / 3.0;
  plan.axis1 = {"lambda", 0.5, 1.26, 39};
  auto records = bifurcation_sweep(plan);
  int first_p1 = -1, first_p2 = -1, first_p4 = -1;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    const auto& cls = records[static_cast<size_t>(i)].cls;
    if (cls.label != AttractorLabel::Periodic) continue;
    if (cls.period == 1 && first_p1 < 0) first_p1 = i;
    if (cls.period == 2 && first_p2 < 0) first_p2 = i;
    if (cls.period == 4 && first_p4 < 0) first_p4 = i;
  }
  CHECK(records.front().cls.label == AttractorLabel::FixedPoint);
  REQUIRE(first_p1 >= 0);
  REQUIRE(first_p2 >= 0);
  REQUIRE(first_p4 >= 0);
  CHECK(first_p1 < first_p2);
  CHECK(first_p2 < first_p4);
}

TEST_CASE("degenerate 2x2 grid in the stable region") {
  SweepPlan plan = quick_plan();
  plan.continuation = Continuation::ColdStart;
  plan.axis1 = {"nu", 0.6, 0.7, 2};
  plan.axis2 = AxisSpec{"lambda", 0.3, 0.4, 2};
  auto grid = plane_scan(plan, 2);
  REQUIRE(grid.records.size() == 4);
  for (const auto& rec : grid.records) CHECK(rec.cls.label == AttractorLabel::FixedPoint);
}

TEST_CASE("grid points whose stable equilibrium sits next to the cold start are fixed points") {
  // X = lambda equilibrium; characteristic polynomial mu^3 + mu^2 + nu mu + lambda.
  SweepPlan plan = quick_plan();
  plan.continuation = Continuation::ColdStart;
  plan.axis1 = {"nu", 0.5, 0.6, 3};
  plan.axis2 = AxisSpec{"lambda", 0.095, 0.105, 3};
  auto grid = plane_scan(plan, 2);
  for (const auto& rec : grid.records) {
    auto rep = hurwitz_sequence_coeffs({Rational{1}, Rational{1},
                                        Rational::from_double(rec.params.at("nu")),
                                        Rational::from_double(rec.params.at("lambda"))});
    REQUIRE(rep.verdict == Verdict::Stable);
    double max_re = -1e300;
    for (const auto& mu :
         poly_roots({rec.params.at("lambda"), rec.params.at("nu"), 1.0, 1.0}))
      max_re = std::max(max_re, mu.real());
    REQUIRE(max_re < -1e-3);
    CHECK(rec.cls.label == AttractorLabel::FixedPoint);
  }
}

TEST_CASE("divergent corner is recorded, not raised") {
  SweepPlan plan = quick_plan();
  plan.continuation = Continuation::ColdStart;
  plan.axis1 = {"nu", 0.3, 0.35, 2};
  plan.axis2 = AxisSpec{"lambda", 1.3, 1.4, 2};
  auto grid = plane_scan(plan, 1);
  int unstable = 0;
  for (const auto& rec : grid.records) {
    if (rec.cls.label == AttractorLabel::Unstable) {
      ++unstable;
      REQUIRE(rec.escape_time.has_value());
      CHECK(*rec.escape_time > 0.0);
      CHECK(*rec.escape_time < plan.classifier.t_transient + plan.classifier.t_measure);
    }
  }
  CHECK(unstable == 4);
}

TEST_CASE("plane scan is independent of thread count") {
  SweepPlan plan = quick_plan();
  plan.classifier.t_transient = 150.0;
  plan.classifier.t_measure = 350.0;
  plan.continuation = Continuation::ColdStart;
  plan.axis1 = {"nu", 0.5, 0.9, 7};
  plan.axis2 = AxisSpec{"lambda", 0.4, 1.3, 7};
  auto a = plane_scan(plan, 1);
  auto b = plane_scan(plan, 2);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(same_class(a.records[i].cls, b.records[i].cls));
    CHECK(a.records[i].peaks == b.records[i].peaks);
    CHECK(a.records[i].lyapunov == b.records[i].lyapunov);
    CHECK(a.records[i].escape_time == b.records[i].escape_time);
  }
}

TEST_CASE("boundary density on synthetic grids") {
  SUBCASE("uniform grid has zero boundary fraction") {
    auto g = synthetic(65, 65, [](size_t, size_t) { return fixed_point_label(); });
    for (double f : boundary_density(g, 4)) CHECK(f == 0.0);
  }
  SUBCASE("straight diagonal boundary halves per refinement level") {
    auto g = synthetic(201, 201, [](size_t r, size_t c) {
      return r + c < 200 ? fixed_point_label() : periodic_label(1);
    });
    auto fracs = boundary_density(g, 5);
    REQUIRE(fracs.size() == 5);
    for (size_t l = 0; l + 1 < fracs.size(); ++l) {
      double ratio = fracs[l] / fracs[l + 1];
      CHECK(ratio > 1.7);
      CHECK(ratio < 2.3);
    }
  }
  SUBCASE("period labels are part of the class identity") {
    auto g = synthetic(65, 65, [](size_t r, size_t) {
      return r < 32 ? periodic_label(2) : periodic_label(4);
    });
    auto fracs = boundary_density(g, 3);
    for (double f : fracs) CHECK(f > 0.0);
  }
  SUBCASE("hash-random labels keep the boundary fraction high at every level") {
    auto g = synthetic(129, 129, [](size_t r, size_t c) {
      uint64_t h = r * 0x9E3779B97F4A7C15ull + (c + 1) * 0xBF58476D1CE4E5B9ull;
      h ^= h >> 31;
      h *= 0x94D049BB133111EBull;
      h ^= h >> 29;
      return (h & 1) != 0 ? fixed_point_label() : periodic_label(1);
    });
    auto fracs = boundary_density(g, 4);
    for (double f : fracs) CHECK(f > 0.6);
    for (size_t l = 0; l + 1 < fracs.size(); ++l) CHECK(fracs[l] / fracs[l + 1] < 1.3);
  }
  SUBCASE("window too small for the level count") {
    auto g = synthetic(17, 17, [](size_t, size_t) { return fixed_point_label(); });
    CHECK_THROWS_AS(boundary_density(g, 5), DomainError);
  }
}

TEST_CASE("plan validation") {
  SweepPlan plan = quick_plan();
  plan.axis1 = {"lambda", 0.5, 0.4, 10};
  CHECK_THROWS_AS(bifurcation_sweep(plan), DomainError);
  plan.axis1 = {"lambda", 0.3, 0.4, 1};
  CHECK_THROWS_AS(bifurcation_sweep(plan), DomainError);
  plan.axis1 = {"p", 0.3, 0.4, 4};
  CHECK_THROWS_AS(bifurcation_sweep(plan), DomainError);  // wrong axis for scaled cubic
  plan.axis1 = {"nu", 0.3, 0.4, 4};
  plan.axis2 = AxisSpec{"nu", 0.3, 0.4, 4};
  CHECK_THROWS_AS(plane_scan(plan, 1), DomainError);  // duplicate axes
  plan.axis2 = AxisSpec{"lambda", 0.3, 0.4, 4};
  plan.continuation = Continuation::FollowAttractor;
  CHECK_THROWS_AS(plane_scan(plan, 1), DomainError);  // plane scans are cold-start
}
