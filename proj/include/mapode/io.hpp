#pragma once

#include <string>

#include <json.hpp>

#include "mapode/dynamics.hpp"
#include "mapode/stability.hpp"
#include "mapode/sweep.hpp"

// nlohmann expects the hooks in the value types' namespace.
namespace mapode {

std::string format_double(double v);  // %.17g

void to_json(nlohmann::json& j, const Rational& r);
void from_json(const nlohmann::json& j, Rational& r);

void to_json(nlohmann::json& j, const HurwitzReport& rep);
void from_json(const nlohmann::json& j, HurwitzReport& rep);

void to_json(nlohmann::json& j, const AttractorClass& cls);
void from_json(const nlohmann::json& j, AttractorClass& cls);

void to_json(nlohmann::json& j, const SweepRecord& rec);
void from_json(const nlohmann::json& j, SweepRecord& rec);

void to_json(nlohmann::json& j, const Trajectory& traj);
void from_json(const nlohmann::json& j, Trajectory& traj);

// Integer class codes used in the plane CSV: 0 FixedPoint, 1 Periodic,
// 2 Chaotic, 3 Unstable.
int class_code(AttractorLabel label);

// "t,xi1,...,xiN" rows plus a "# status = ..." footer.
std::string trajectory_csv(const Trajectory& traj);

// "param,peak" with one row per retained peak.
std::string bifurcation_csv(const std::string& axis_name, const std::vector<SweepRecord>& records);
// Sidecar JSON with per-point class/lyapunov/escape data.
std::string bifurcation_sidecar_json(const std::string& axis_name,
                                     const std::vector<SweepRecord>& records);

// "nu,lambda,class,period,lyapunov,escape_time", row-major.
std::string plane_csv(const std::string& axis1_name, const std::string& axis2_name,
                      const PlaneScanResult& grid);

// Dot scatter of peak value vs parameter.
std::string bifurcation_svg(const std::string& axis_name, const std::vector<SweepRecord>& records);

void write_file(const std::string& path, const std::string& content);

}  // namespace mapode
