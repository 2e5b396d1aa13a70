#include "mapode/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "mapode/errors.hpp"

namespace mapode {

namespace {

struct PointSystem {
  VectorField field;
  JacobianField jacobian;
  std::vector<double> default_x0;
};

PointSystem build_system(const SweepPlan& plan, const std::map<std::string, double>& params) {
  if (plan.system == SystemKind::ScaledCubic) {
    ScaledCubic c{params.at("nu"), params.at("lambda")};
    PointSystem ps{make_field(c), make_jacobian(c), {0.1, 0.0, 0.0}};
    if (!plan.x0.empty()) ps.default_x0 = plan.x0;
    return ps;
  }
  auto sys = truncate(MapSpec::logistic(params.at("p")), plan.order);
  std::vector<double> x0(static_cast<size_t>(plan.order), 0.0);
  x0[0] = 0.3;
  PointSystem ps{make_field(sys), make_jacobian(sys), std::move(x0)};
  if (!plan.x0.empty()) ps.default_x0 = plan.x0;
  return ps;
}

void validate_axis(const SweepPlan& plan, const AxisSpec& axis) {
  if (axis.steps < 2) throw DomainError("sweep: axis needs at least 2 steps");
  if (!(axis.lo < axis.hi)) throw DomainError("sweep: axis lo must be below hi");
  const bool scaled = plan.system == SystemKind::ScaledCubic;
  if (scaled && axis.name != "nu" && axis.name != "lambda")
    throw DomainError("sweep: scaled-cubic axes are 'nu' and 'lambda'");
  if (!scaled && axis.name != "p")
    throw DomainError("sweep: logistic-truncation axis is 'p'");
}

double axis_value(const AxisSpec& axis, int i) {
  return axis.lo + (axis.hi - axis.lo) * static_cast<double>(i) /
                       static_cast<double>(axis.steps - 1);
}

std::map<std::string, double> point_params(const SweepPlan& plan) {
  std::map<std::string, double> params = plan.base_params;
  if (plan.system == SystemKind::ScaledCubic) {
    params.try_emplace("nu", 2.0 / 3.0);
    params.try_emplace("lambda", 0.5);
  } else {
    params.try_emplace("p", 3.0);
  }
  return params;
}

// Classification with the retry ladder: double the measurement window on an
// inconclusive orbit, then fall back to a tangent-rate label.
SweepRecord classify_point(const PointSystem& ps, const SweepPlan& plan,
                           const std::map<std::string, double>& params,
                           const std::vector<double>& x0, std::vector<double>* final_state) {
  SweepRecord rec;
  rec.params = params;
  ClassifierConfig ccfg = plan.classifier;
  for (int attempt = 0;; ++attempt) {
    try {
      OrbitAnalysis a = analyze_orbit(ps.field, ps.jacobian, x0, plan.integrator, ccfg);
      rec.cls = a.cls;
      rec.peaks = a.peaks;
      rec.lyapunov = a.cls.lyapunov;
      rec.escape_time = a.escape_time;
      if (final_state) *final_state = a.final_state;
      return rec;
    } catch (const InconclusiveWindow&) {
      if (attempt >= 2) break;
      ccfg.t_measure *= 2.0;
    }
  }
  // Still inconclusive after three windows: label by the tangent rate alone.
  try {
    double lyap = largest_lyapunov(ps.field, ps.jacobian, x0, plan.integrator,
                                   ccfg.t_transient, ccfg.t_measure, ccfg.renorm_interval);
    rec.lyapunov = lyap;
    rec.cls.lyapunov = lyap;
    if (lyap > ccfg.chaos_tol) {
      rec.cls.label = AttractorLabel::Chaotic;
    } else if (lyap < -ccfg.chaos_tol) {
      rec.cls.label = AttractorLabel::FixedPoint;
    } else {
      rec.cls.label = AttractorLabel::Periodic;
      rec.cls.period = 1;
    }
  } catch (const TrajectoryDiverged& diverged) {
    rec.cls.label = AttractorLabel::Unstable;
    rec.escape_time = diverged.at_time();
  }
  if (final_state) final_state->clear();
  return rec;
}

}  // namespace

std::vector<SweepRecord> bifurcation_sweep(const SweepPlan& plan) {
  if (plan.axis2.has_value()) throw DomainError("bifurcation_sweep: plan has two axes");
  validate_axis(plan, plan.axis1);

  std::vector<SweepRecord> out;
  out.reserve(static_cast<size_t>(plan.axis1.steps));
  std::vector<double> follow_state;  // empty = cold start
  for (int i = 0; i < plan.axis1.steps; ++i) {
    auto params = point_params(plan);
    params[plan.axis1.name] = axis_value(plan.axis1, i);
    PointSystem ps = build_system(plan, params);
    std::vector<double> x0 = ps.default_x0;
    if (plan.continuation == Continuation::FollowAttractor && !follow_state.empty())
      x0 = follow_state;
    std::vector<double> final_state;
    SweepRecord rec = classify_point(ps, plan, params, x0, &final_state);
    if (plan.continuation == Continuation::FollowAttractor) {
      // A divergent point poisons its endpoint; restart cold after it.
      follow_state = rec.cls.label == AttractorLabel::Unstable ? std::vector<double>{}
                                                               : final_state;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

PlaneScanResult plane_scan(const SweepPlan& plan, int threads) {
  if (!plan.axis2.has_value()) throw DomainError("plane_scan: plan needs two axes");
  if (plan.continuation != Continuation::ColdStart)
    throw DomainError("plane_scan: grid points must be independent (ColdStart)");
  validate_axis(plan, plan.axis1);
  validate_axis(plan, *plan.axis2);
  if (plan.axis1.name == plan.axis2->name) throw DomainError("plane_scan: axes must differ");

  PlaneScanResult grid;
  grid.rows = static_cast<size_t>(plan.axis1.steps);
  grid.cols = static_cast<size_t>(plan.axis2->steps);
  grid.records.resize(grid.rows * grid.cols);

  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.rows)));
  // Contiguous row bands; a shared counter hands them out so uneven rows
  // (divergent points finish early) balance across workers.
  const size_t band = std::max<size_t>(1, grid.rows / (8 * static_cast<size_t>(n_workers)));
  std::atomic<size_t> next_row{0};

  auto worker = [&] {
    for (;;) {
      size_t r0 = next_row.fetch_add(band);
      if (r0 >= grid.rows) return;
      size_t r1 = std::min(grid.rows, r0 + band);
      for (size_t r = r0; r < r1; ++r) {
        for (size_t c = 0; c < grid.cols; ++c) {
          auto params = point_params(plan);
          params[plan.axis1.name] = axis_value(plan.axis1, static_cast<int>(r));
          params[plan.axis2->name] = axis_value(*plan.axis2, static_cast<int>(c));
          PointSystem ps = build_system(plan, params);
          grid.records[r * grid.cols + c] =
              classify_point(ps, plan, params, ps.default_x0, nullptr);
        }
      }
    }
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

bool same_class(const AttractorClass& a, const AttractorClass& b) {
  if (a.label != b.label) return false;
  if (a.label == AttractorLabel::Periodic) return a.period == b.period;
  return true;
}

std::vector<double> boundary_density_window(const PlaneScanResult& grid, size_t r0, size_t c0,
                                            size_t rows, size_t cols, int refinement_levels) {
  if (refinement_levels < 2) throw DomainError("boundary_density: need at least 2 levels");
  if (r0 + rows > grid.rows || c0 + cols > grid.cols)
    throw DomainError("boundary_density: window exceeds grid");
  const size_t cells_max = size_t{1} << refinement_levels;
  if (cells_max >= rows || cells_max >= cols)
    throw DomainError("boundary_density: grid too small for requested levels");

  std::vector<double> fractions;
  for (int level = 1; level <= refinement_levels; ++level) {
    const size_t m = size_t{1} << level;
    auto corner_r = [&](size_t k) {
      return r0 + (k * (rows - 1) + m / 2) / m;  // round(k (rows-1) / m)
    };
    auto corner_c = [&](size_t k) { return c0 + (k * (cols - 1) + m / 2) / m; };
    size_t mixed = 0;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        const AttractorClass& a = grid.at(corner_r(i), corner_c(j)).cls;
        const AttractorClass& b = grid.at(corner_r(i + 1), corner_c(j)).cls;
        const AttractorClass& c = grid.at(corner_r(i), corner_c(j + 1)).cls;
        const AttractorClass& d = grid.at(corner_r(i + 1), corner_c(j + 1)).cls;
        if (!(same_class(a, b) && same_class(a, c) && same_class(a, d))) ++mixed;
      }
    }
    fractions.push_back(static_cast<double>(mixed) / static_cast<double>(m * m));
  }
  return fractions;
}

std::vector<double> boundary_density(const PlaneScanResult& grid, int refinement_levels) {
  return boundary_density_window(grid, 0, 0, grid.rows, grid.cols, refinement_levels);
}

}  // namespace mapode
