#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mapode/embedding.hpp"

namespace mapode {

// Autonomous vector field: out = f(state).
using VectorField = std::function<void(std::span<const double>, std::span<double>)>;
// Row-major n x n Jacobian at `state`.
using JacobianField = std::function<void(std::span<const double>, std::span<double>)>;

VectorField make_field(const TruncatedSystem& s);
JacobianField make_jacobian(const TruncatedSystem& s);
VectorField make_field(const ScaledCubic& c);
JacobianField make_jacobian(const ScaledCubic& c);
VectorField make_field(const LinearizedSystem& ls);
JacobianField make_jacobian(const LinearizedSystem& ls);

struct RK4Fixed {
  double h = 1e-2;
};
struct RK45Adaptive {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};
using Method = std::variant<RK4Fixed, RK45Adaptive>;

struct IntegratorConfig {
  Method method = RK4Fixed{};
  double t_end = 100.0;
  double divergence_bound = 1e8;
  double sample_stride = 0.05;
};

enum class RunStatus { Completed, Diverged, StepFailure };

const char* to_string(RunStatus s);

struct Trajectory {
  std::vector<double> times;                // multiples of sample_stride
  std::vector<std::vector<double>> states;  // same length as times
  RunStatus status = RunStatus::Completed;
  double event_time = 0.0;     // divergence/failure time; t_end when Completed
  std::vector<double> final_state;  // last accepted state (finite unless Diverged)
};

// Dense-sampled solve of dx/dt = field(x). Sampling interpolates accepted
// steps with a cubic Hermite (4th-order accurate). Stops early when any
// component leaves [-divergence_bound, divergence_bound] or goes non-finite.
Trajectory integrate(const VectorField& field, const std::vector<double>& x0,
                     const IntegratorConfig& cfg);

// Endpoint-only variant: evolves `state` in place from t = 0 to t_span.
// Returns the status; on Diverged/StepFailure, `state` holds the last
// accepted state and `*event_time` the stop time.
RunStatus advance(const VectorField& field, std::vector<double>& state, double t_span,
                  const IntegratorConfig& cfg, double* event_time = nullptr);

// Largest Lyapunov exponent, Benettin method: co-integrate one tangent
// vector under the analytic Jacobian, renormalize every renorm_interval,
// average the log stretching over t_measure after discarding t_transient.
// Nats per unit time. Throws TrajectoryDiverged if the orbit escapes.
double largest_lyapunov(const VectorField& field, const JacobianField& jacobian,
                        const std::vector<double>& x0, const IntegratorConfig& cfg,
                        double t_transient, double t_measure,
                        double renorm_interval = 1.0);

struct ClassifierConfig {
  double t_transient = 500.0;
  double t_measure = 2000.0;
  double renorm_interval = 1.0;
  double peak_tol = 1e-3;   // relative peak-cluster tolerance
  double fp_tol = 1e-6;     // velocity norm below which the orbit is at rest
  double chaos_tol = 5e-3;  // Lyapunov exponent above which the orbit is chaotic
  int max_period = 16;
};

enum class AttractorLabel { FixedPoint, Periodic, Chaotic, Unstable };

const char* to_string(AttractorLabel label);

struct AttractorClass {
  AttractorLabel label = AttractorLabel::FixedPoint;
  int period = 0;  // cluster count for Periodic
  std::optional<double> lyapunov;
  std::vector<double> peak_values;  // sorted cluster representatives
};

// Full orbit diagnostics; classify() is the spec-facing projection.
struct OrbitAnalysis {
  AttractorClass cls;
  std::vector<double> peaks;  // post-transient peak values, time order, last <= 64
  std::optional<double> escape_time;
  std::vector<double> final_state;
};

// Integrates over t_transient + t_measure, extracts local maxima of the
// first component (quadratic interpolation of samples), clusters them and
// labels the orbit. Throws InconclusiveWindow when fewer than 8 maxima were
// seen and the orbit is not at rest; the caller should lengthen the window.
OrbitAnalysis analyze_orbit(const VectorField& field, const JacobianField& jacobian,
                            const std::vector<double>& x0, const IntegratorConfig& cfg,
                            const ClassifierConfig& ccfg);

AttractorClass classify(const VectorField& field, const JacobianField& jacobian,
                        const std::vector<double>& x0, const IntegratorConfig& cfg,
                        const ClassifierConfig& ccfg);

}  // namespace mapode
