#include <doctest.h>

#include <json.hpp>

#include "mapode/config.hpp"
#include "mapode/errors.hpp"
#include "mapode/io.hpp"
#include "mapode/sweep.hpp"

using namespace mapode;
using nlohmann::json;

TEST_CASE("config parsing") {
  SUBCASE("empty text gives no values") {
    auto cfg = RunConfig::parse("");
    CHECK(cfg.values().empty());
  }
  SUBCASE("values, comments, blanks") {
    auto cfg = RunConfig::parse(
        "# integrator\n"
        "divergence_bound = 1e6\n"
        "\n"
        "alpha = 5/3   # exact rational\n"
        "t_end = 50\n");
    CHECK(cfg.number("divergence_bound") == 1e6);
    CHECK(cfg.rational("alpha") == Rational{5, 3});
    CHECK(cfg.number("t_end") == 50.0);
    CHECK_FALSE(cfg.has("h"));
  }
  SUBCASE("malformed line reports its number") {
    try {
      RunConfig::parse("t_end = 10\nnot a key value pair\n", "test.cfg");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
  }
  SUBCASE("unknown keys are rejected with the valid list") {
    try {
      RunConfig::parse("banana = 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      std::string msg = e.what();
      CHECK(msg.find("banana") != std::string::npos);
      CHECK(msg.find("divergence_bound") != std::string::npos);
    }
  }
}

TEST_CASE("numeric text parsing") {
  CHECK(parse_number("2.5") == 2.5);
  CHECK(parse_number("1/4") == 0.25);
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK(parse_rational_text("5/3") == Rational{5, 3});
  CHECK(parse_rational_text("-7") == Rational{-7});
  CHECK(parse_rational_text("0.5") == Rational{1, 2});
  CHECK(parse_vector("1,2.5,-3") == std::vector<double>{1, 2.5, -3});
  CHECK_THROWS_AS(parse_number("abc"), ParseError);
}

TEST_CASE("hurwitz report JSON round trip") {
  auto rep = hurwitz_sequence(char_poly(5, Rational{17, 7}));
  json j = rep;
  auto back = j.get<HurwitzReport>();
  CHECK(back.u_sequence == rep.u_sequence);
  CHECK(back.sign_changes == rep.sign_changes);
  CHECK(back.verdict == rep.verdict);
}

TEST_CASE("attractor class and sweep record JSON round trip") {
  SweepRecord rec;
  rec.params = {{"nu", 2.0 / 3.0}, {"lambda", 0.123456789012345678}};
  rec.cls.label = AttractorLabel::Chaotic;
  rec.cls.period = 0;
  rec.cls.lyapunov = 0.015063;
  rec.cls.peak_values = {0.31, 0.72};
  rec.peaks = {0.31, 0.72, 0.7123456789};
  rec.lyapunov = rec.cls.lyapunov;
  rec.escape_time = std::nullopt;

  json j = rec;
  auto back = j.get<SweepRecord>();
  CHECK(back.params == rec.params);  // exact double equality: lossless round trip
  CHECK(back.cls.label == rec.cls.label);
  CHECK(back.cls.lyapunov == rec.cls.lyapunov);
  CHECK(back.cls.peak_values == rec.cls.peak_values);
  CHECK(back.peaks == rec.peaks);
  CHECK(back.escape_time == rec.escape_time);
}

TEST_CASE("trajectory JSON round trip and CSV") {
  Trajectory traj;
  traj.times = {0.0, 0.25, 0.5};
  traj.states = {{0.1, 0.2}, {0.11, 0.19}, {0.12345678901234567, -0.5}};
  traj.status = RunStatus::Diverged;
  traj.event_time = 0.625;
  traj.final_state = {1e9, -2e9};

  json j = traj;
  auto back = j.get<Trajectory>();
  CHECK(back.times == traj.times);
  CHECK(back.states == traj.states);
  CHECK(back.status == traj.status);
  CHECK(back.event_time == traj.event_time);

  std::string csv = trajectory_csv(traj);
  CHECK(csv.find("t,xi1,xi2\n") == 0);
  CHECK(csv.find("0.12345678901234566") != std::string::npos);
  CHECK(csv.find("# status = Diverged at t = 0.625") != std::string::npos);
}

TEST_CASE("plane CSV layout and class codes") {
  PlaneScanResult grid;
  grid.rows = 1;
  grid.cols = 2;
  grid.records.resize(2);
  grid.records[0].params = {{"nu", 0.5}, {"lambda", 0.25}};
  grid.records[0].cls.label = AttractorLabel::FixedPoint;
  grid.records[1].params = {{"nu", 0.5}, {"lambda", 0.75}};
  grid.records[1].cls.label = AttractorLabel::Periodic;
  grid.records[1].cls.period = 2;
  grid.records[1].lyapunov = -0.001;
  grid.records[1].escape_time = std::nullopt;

  std::string csv = plane_csv("nu", "lambda", grid);
  CHECK(csv == "nu,lambda,class,period,lyapunov,escape_time\n"
               "0.5,0.25,0,0,,\n"
               "0.5,0.75,1,2,-0.001,\n");
  CHECK(class_code(AttractorLabel::Chaotic) == 2);
  CHECK(class_code(AttractorLabel::Unstable) == 3);
}

TEST_CASE("bifurcation CSV has one row per retained peak") {
  std::vector<SweepRecord> records(2);
  records[0].params = {{"lambda", 0.8}};
  records[0].peaks = {0.5, 0.51};
  records[1].params = {{"lambda", 0.9}};
  records[1].peaks = {};
  std::string csv = bifurcation_csv("lambda", records);
  CHECK(csv == "lambda,peak\n"
               "0.80000000000000004,0.5\n"
               "0.80000000000000004,0.51000000000000001\n");
  std::string svg = bifurcation_svg("lambda", records);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("circle") != std::string::npos);
}

TEST_CASE("17-digit formatting is value-preserving") {
  for (double v : {1.0 / 3.0, 0.1234567890123456789, 2e-300, 1.7976931348623157e308}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
