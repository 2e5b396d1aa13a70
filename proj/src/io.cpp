#include "mapode/io.hpp"

#include <cstdio>
#include <fstream>

#include "mapode/errors.hpp"

namespace mapode {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void to_json(json& j, const Rational& r) { j = r.to_string(); }

void from_json(const json& j, Rational& r) { r = Rational::from_string(j.get<std::string>()); }

void to_json(json& j, const HurwitzReport& rep) {
  j = json{{"u_sequence", rep.u_sequence},
           {"sign_changes", rep.sign_changes},
           {"n_unstable_roots", rep.n_unstable_roots},
           {"verdict", to_string(rep.verdict)}};
}

namespace {

Verdict verdict_from_string(const std::string& s) {
  if (s == "Stable") return Verdict::Stable;
  if (s == "Unstable") return Verdict::Unstable;
  if (s == "Marginal") return Verdict::Marginal;
  throw ParseError("unknown verdict '" + s + "'");
}

AttractorLabel label_from_string(const std::string& s) {
  if (s == "FixedPoint") return AttractorLabel::FixedPoint;
  if (s == "Periodic") return AttractorLabel::Periodic;
  if (s == "Chaotic") return AttractorLabel::Chaotic;
  if (s == "Unstable") return AttractorLabel::Unstable;
  throw ParseError("unknown attractor label '" + s + "'");
}

RunStatus status_from_string(const std::string& s) {
  if (s == "Completed") return RunStatus::Completed;
  if (s == "Diverged") return RunStatus::Diverged;
  if (s == "StepFailure") return RunStatus::StepFailure;
  throw ParseError("unknown run status '" + s + "'");
}

}  // namespace

void from_json(const json& j, HurwitzReport& rep) {
  rep.u_sequence = j.at("u_sequence").get<std::vector<Rational>>();
  rep.sign_changes = j.at("sign_changes").get<int>();
  rep.n_unstable_roots = j.at("n_unstable_roots").get<int>();
  rep.verdict = verdict_from_string(j.at("verdict").get<std::string>());
}

void to_json(json& j, const AttractorClass& cls) {
  j = json{{"label", to_string(cls.label)},
           {"period", cls.period},
           {"lyapunov", cls.lyapunov ? json(*cls.lyapunov) : json(nullptr)},
           {"peak_values", cls.peak_values}};
}

void from_json(const json& j, AttractorClass& cls) {
  cls.label = label_from_string(j.at("label").get<std::string>());
  cls.period = j.at("period").get<int>();
  cls.lyapunov = j.at("lyapunov").is_null()
                     ? std::nullopt
                     : std::optional<double>(j.at("lyapunov").get<double>());
  cls.peak_values = j.at("peak_values").get<std::vector<double>>();
}

void to_json(json& j, const SweepRecord& rec) {
  j = json{{"params", rec.params},
           {"class", rec.cls},
           {"peaks", rec.peaks},
           {"lyapunov", rec.lyapunov ? json(*rec.lyapunov) : json(nullptr)},
           {"escape_time", rec.escape_time ? json(*rec.escape_time) : json(nullptr)}};
}

void from_json(const json& j, SweepRecord& rec) {
  rec.params = j.at("params").get<std::map<std::string, double>>();
  rec.cls = j.at("class").get<AttractorClass>();
  rec.peaks = j.at("peaks").get<std::vector<double>>();
  rec.lyapunov = j.at("lyapunov").is_null()
                     ? std::nullopt
                     : std::optional<double>(j.at("lyapunov").get<double>());
  rec.escape_time = j.at("escape_time").is_null()
                        ? std::nullopt
                        : std::optional<double>(j.at("escape_time").get<double>());
}

void to_json(json& j, const Trajectory& traj) {
  j = json{{"times", traj.times},
           {"states", traj.states},
           {"status", to_string(traj.status)},
           {"event_time", traj.event_time},
           {"final_state", traj.final_state}};
}

void from_json(const json& j, Trajectory& traj) {
  traj.times = j.at("times").get<std::vector<double>>();
  traj.states = j.at("states").get<std::vector<std::vector<double>>>();
  traj.status = status_from_string(j.at("status").get<std::string>());
  traj.event_time = j.at("event_time").get<double>();
  traj.final_state = j.at("final_state").get<std::vector<double>>();
}

int class_code(AttractorLabel label) {
  switch (label) {
    case AttractorLabel::FixedPoint: return 0;
    case AttractorLabel::Periodic: return 1;
    case AttractorLabel::Chaotic: return 2;
    case AttractorLabel::Unstable: return 3;
  }
  return -1;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const size_t dim = traj.states.empty() ? 0 : traj.states[0].size();
  for (size_t i = 1; i <= dim; ++i) out += ",xi" + std::to_string(i);
  out += '\n';
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out += format_double(traj.times[k]);
    for (double v : traj.states[k]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  out += "# status = ";
  out += to_string(traj.status);
  if (traj.status != RunStatus::Completed) {
    out += " at t = ";
    out += format_double(traj.event_time);
  }
  out += '\n';
  return out;
}

std::string bifurcation_csv(const std::string& axis_name,
                            const std::vector<SweepRecord>& records) {
  std::string out = axis_name + ",peak\n";
  for (const auto& rec : records) {
    const double param = rec.params.at(axis_name);
    for (double peak : rec.peaks) {
      out += format_double(param);
      out += ',';
      out += format_double(peak);
      out += '\n';
    }
  }
  return out;
}

std::string bifurcation_sidecar_json(const std::string& axis_name,
                                     const std::vector<SweepRecord>& records) {
  json points = json::array();
  for (const auto& rec : records) {
    points.push_back(json{{"param", rec.params.at(axis_name)},
                          {"class", rec.cls},
                          {"lyapunov", rec.lyapunov ? json(*rec.lyapunov) : json(nullptr)},
                          {"escape_time", rec.escape_time ? json(*rec.escape_time) : json(nullptr)}});
  }
  return json{{"axis", axis_name}, {"points", points}}.dump(2) + "\n";
}

std::string plane_csv(const std::string& axis1_name, const std::string& axis2_name,
                      const PlaneScanResult& grid) {
  std::string out = axis1_name + "," + axis2_name + ",class,period,lyapunov,escape_time\n";
  for (size_t r = 0; r < grid.rows; ++r) {
    for (size_t c = 0; c < grid.cols; ++c) {
      const SweepRecord& rec = grid.at(r, c);
      out += format_double(rec.params.at(axis1_name));
      out += ',';
      out += format_double(rec.params.at(axis2_name));
      out += ',';
      out += std::to_string(class_code(rec.cls.label));
      out += ',';
      out += std::to_string(rec.cls.label == AttractorLabel::Periodic ? rec.cls.period : 0);
      out += ',';
      if (rec.lyapunov) out += format_double(*rec.lyapunov);
      out += ',';
      if (rec.escape_time) out += format_double(*rec.escape_time);
      out += '\n';
    }
  }
  return out;
}

std::string bifurcation_svg(const std::string& axis_name,
                            const std::vector<SweepRecord>& records) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& rec : records) {
    const double x = rec.params.at(axis_name);
    for (double y : rec.peaks) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;

  const double w = 900, h = 600, margin = 40;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
  auto py = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };

  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\">\n",
                w, h, w, h);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"white\" "
                "stroke=\"black\"/>\n",
                margin, margin, w - 2 * margin, h - 2 * margin);
  out += buf;
  for (const auto& rec : records) {
    const double x = rec.params.at(axis_name);
    for (double y : rec.peaks) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.6g\" cy=\"%.6g\" r=\"0.6\"/>\n", px(x),
                    py(y));
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  f << content;
  if (!f.good()) throw DomainError("write failed for '" + path + "'");
}

}  // namespace mapode
