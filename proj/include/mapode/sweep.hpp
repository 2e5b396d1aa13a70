#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapode/dynamics.hpp"

namespace mapode {

enum class SystemKind { ScaledCubic, TruncatedLogistic };

enum class Continuation { ColdStart, FollowAttractor };

struct AxisSpec {
  std::string name;  // "p", "nu" or "lambda"
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
};

struct SweepPlan {
  SystemKind system = SystemKind::ScaledCubic;
  int order = 3;  // logistic truncation order (3 or 4)
  std::map<std::string, double> base_params;  // fixed values for axes not swept
  AxisSpec axis1;
  std::optional<AxisSpec> axis2;
  Continuation continuation = Continuation::FollowAttractor;
  std::vector<double> x0;  // cold-start state; empty = system default
  IntegratorConfig integrator;
  ClassifierConfig classifier;
};

struct SweepRecord {
  std::map<std::string, double> params;
  AttractorClass cls;
  std::vector<double> peaks;  // post-transient, at most 64
  std::optional<double> lyapunov;
  std::optional<double> escape_time;
};

// One-parameter scan, records in ascending axis order. FollowAttractor seeds
// each point with the previous point's final state and falls back to the
// cold start after a divergent point.
std::vector<SweepRecord> bifurcation_sweep(const SweepPlan& plan);

struct PlaneScanResult {
  size_t rows = 0;  // axis1 count
  size_t cols = 0;  // axis2 count
  std::vector<SweepRecord> records;  // row-major

  const SweepRecord& at(size_t r, size_t c) const { return records[r * cols + c]; }
};

// Two-parameter scan; every grid point independent (ColdStart enforced),
// computed in parallel over row bands. Output ordering is deterministic
// regardless of thread count.
PlaneScanResult plane_scan(const SweepPlan& plan, int threads);

// Box-counting proxy for boundary fatness: for each level l = 1..levels the
// fraction of 2^l x 2^l cells (corners subsampled from the grid) whose four
// corner labels disagree. A fraction that refuses to halve under refinement
// is the quantitative face of parameter-space riddling.
std::vector<double> boundary_density(const PlaneScanResult& grid, int refinement_levels);
// Same on the sub-window [r0, r0+rows) x [c0, c0+cols).
std::vector<double> boundary_density_window(const PlaneScanResult& grid, size_t r0, size_t c0,
                                            size_t rows, size_t cols, int refinement_levels);

// Label identity used by boundary_density: label kind plus period.
bool same_class(const AttractorClass& a, const AttractorClass& b);

}  // namespace mapode
