#include "mapode/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "mapode/errors.hpp"

namespace mapode {

VectorField make_field(const TruncatedSystem& s) {
  return [s](std::span<const double> x, std::span<double> out) { vector_field(s, x, out); };
}

JacobianField make_jacobian(const TruncatedSystem& s) {
  return [s](std::span<const double> x, std::span<double> out) {
    vector_field_jacobian(s, x, out);
  };
}

VectorField make_field(const ScaledCubic& c) {
  return [c](std::span<const double> x, std::span<double> out) { scaled_vector_field(c, x, out); };
}

JacobianField make_jacobian(const ScaledCubic& c) {
  return [c](std::span<const double> x, std::span<double> out) {
    scaled_vector_field_jacobian(c, x, out);
  };
}

VectorField make_field(const LinearizedSystem& ls) {
  return [ls](std::span<const double> x, std::span<double> out) { linear_field(ls, x, out); };
}

JacobianField make_jacobian(const LinearizedSystem& ls) {
  return [ls](std::span<const double>, std::span<double> out) {
    std::copy(ls.companion.begin(), ls.companion.end(), out.begin());
  };
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::Diverged: return "Diverged";
    case RunStatus::StepFailure: return "StepFailure";
  }
  return "?";
}

const char* to_string(AttractorLabel label) {
  switch (label) {
    case AttractorLabel::FixedPoint: return "FixedPoint";
    case AttractorLabel::Periodic: return "Periodic";
    case AttractorLabel::Chaotic: return "Chaotic";
    case AttractorLabel::Unstable: return "Unstable";
  }
  return "?";
}

namespace {

bool out_of_bounds(std::span<const double> y, double bound) {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > bound) return true;
  }
  return false;
}

// Cubic Hermite over one accepted step; 4th-order accurate in the step size.
void hermite(double t0, std::span<const double> y0, std::span<const double> f0, double t1,
             std::span<const double> y1, std::span<const double> f1, double t,
             std::span<double> out) {
  const double h = t1 - t0;
  const double th = (t - t0) / h;
  const double u = 1.0 - th;
  const double h00 = (1.0 + 2.0 * th) * u * u;
  const double h10 = th * u * u;
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);
  for (size_t i = 0; i < y0.size(); ++i)
    out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
}

// Per accepted step the driver calls sink(t0, y0, f0, t1, y1, f1); return
// false from the sink to stop early.
using StepSink = std::function<bool(double, std::span<const double>, std::span<const double>,
                                    double, std::span<const double>, std::span<const double>)>;

struct DriveResult {
  RunStatus status = RunStatus::Completed;
  double event_time = 0.0;
};

DriveResult drive_rk4(const VectorField& f, std::vector<double>& y, double t_span, double h_step,
                      double bound, const StepSink& sink) {
  const size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), ytmp(n), ynew(n), fnew(n), f0(n);
  double t = 0.0;
  f(y, f0);
  long step_index = 0;
  while (t < t_span - 1e-12 * std::max(1.0, t_span)) {
    if (out_of_bounds(y, bound)) return {RunStatus::Diverged, t};
    double h = std::min(h_step, t_span - t);
    // k1 = f0 (first-same-as-last across steps)
    for (size_t i = 0; i < n; ++i) k1[i] = f0[i];
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    f(ytmp, k2);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    f(ytmp, k3);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
    f(ytmp, k4);
    for (size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    ++step_index;
    double t_new = h == h_step ? static_cast<double>(step_index) * h_step : t_span;
    if (out_of_bounds(ynew, bound)) {
      y = ynew;
      return {RunStatus::Diverged, t_new};
    }
    f(ynew, fnew);
    if (sink && !sink(t, y, k1, t_new, ynew, fnew)) {
      y = ynew;
      return {RunStatus::Completed, t_new};
    }
    y.swap(ynew);
    f0.swap(fnew);
    t = t_new;
  }
  return {RunStatus::Completed, t_span};
}

// Dormand-Prince 5(4) with PI step-size control and FSAL.
DriveResult drive_dp45(const VectorField& f, std::vector<double>& y, double t_span,
                       double rel_tol, double abs_tol, double bound, const StepSink& sink) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  double t = 0.0;
  double h = std::min(1e-2, t_span * 0.1);
  double err_prev = 1e-4;
  f(y, k1);
  while (t < t_span - 1e-12 * std::max(1.0, t_span)) {
    if (out_of_bounds(y, bound)) return {RunStatus::Diverged, t};
    if (h < 1e-12) return {RunStatus::StepFailure, t};
    h = std::min(h, t_span - t);

    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(ytmp, k2);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(ytmp, k3);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(ytmp, k4);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(ytmp, k5);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(ytmp, k6);
    for (size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(ynew, k7);

    double err_sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_sq += (e / sc) * (e / sc);
    }
    double err = std::sqrt(err_sq / static_cast<double>(n));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      double t_new = t + h;
      if (out_of_bounds(ynew, bound)) {
        y = ynew;
        return {RunStatus::Diverged, t_new};
      }
      if (sink && !sink(t, y, k1, t_new, ynew, k7)) {
        y = ynew;
        return {RunStatus::Completed, t_new};
      }
      y.swap(ynew);
      k1.swap(k7);
      t = t_new;
      double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(err, 1e-4);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return {RunStatus::Completed, t_span};
}

DriveResult drive(const VectorField& f, std::vector<double>& y, double t_span,
                  const IntegratorConfig& cfg, const StepSink& sink) {
  if (t_span <= 0.0) return {RunStatus::Completed, 0.0};
  if (const auto* rk4 = std::get_if<RK4Fixed>(&cfg.method)) {
    if (rk4->h <= 0) throw DomainError("integrate: step size must be positive");
    return drive_rk4(f, y, t_span, rk4->h, cfg.divergence_bound, sink);
  }
  const auto& ad = std::get<RK45Adaptive>(cfg.method);
  if (ad.rel_tol <= 0 || ad.abs_tol <= 0)
    throw DomainError("integrate: tolerances must be positive");
  return drive_dp45(f, y, t_span, ad.rel_tol, ad.abs_tol, cfg.divergence_bound, sink);
}

}  // namespace

Trajectory integrate(const VectorField& field, const std::vector<double>& x0,
                     const IntegratorConfig& cfg) {
  for (double v : x0)
    if (!std::isfinite(v)) throw DomainError("integrate: non-finite initial state");
  if (cfg.sample_stride <= 0) throw DomainError("integrate: sample_stride must be positive");
  if (cfg.divergence_bound <= 0) throw DomainError("integrate: divergence_bound must be positive");

  Trajectory traj;
  std::vector<double> y = x0;
  long sample_index = 0;
  const double stride = cfg.sample_stride;
  auto emit_upto = [&](double t0, std::span<const double> y0, std::span<const double> f0,
                       double t1, std::span<const double> y1, std::span<const double> f1) {
    double next = static_cast<double>(sample_index) * stride;
    std::vector<double> buf(y0.size());
    while (next <= t1 + 1e-12 * std::max(1.0, t1)) {
      if (next <= t0) {
        traj.times.push_back(next);
        traj.states.emplace_back(y0.begin(), y0.end());
      } else {
        hermite(t0, y0, f0, t1, y1, f1, next, buf);
        traj.times.push_back(next);
        traj.states.push_back(buf);
      }
      ++sample_index;
      next = static_cast<double>(sample_index) * stride;
    }
    return true;
  };

  // Sample t = 0 up front so a divergent first step still leaves the state.
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  sample_index = 1;

  DriveResult res = drive(field, y, cfg.t_end, cfg, emit_upto);
  traj.status = res.status;
  traj.event_time = res.event_time;
  traj.final_state = y;
  return traj;
}

RunStatus advance(const VectorField& field, std::vector<double>& state, double t_span,
                  const IntegratorConfig& cfg, double* event_time) {
  DriveResult res = drive(field, state, t_span, cfg, nullptr);
  if (event_time) *event_time = res.event_time;
  return res.status;
}

double largest_lyapunov(const VectorField& field, const JacobianField& jacobian,
                        const std::vector<double>& x0, const IntegratorConfig& cfg,
                        double t_transient, double t_measure, double renorm_interval) {
  const size_t n = x0.size();
  if (renorm_interval <= 0) throw DomainError("largest_lyapunov: renorm interval must be positive");

  std::vector<double> y = x0;
  double event = 0.0;
  if (advance(field, y, t_transient, cfg, &event) != RunStatus::Completed)
    throw TrajectoryDiverged("largest_lyapunov: orbit diverged during transient", event);

  // Augmented flow: state then tangent, du/dt = J(x) u.
  std::vector<double> jac(n * n);
  VectorField augmented = [&, n](std::span<const double> z, std::span<double> out) {
    field(z.first(n), out.first(n));
    jacobian(z.first(n), jac);
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = jac.data() + i * n;
      for (size_t j = 0; j < n; ++j) acc += row[j] * z[n + j];
      out[n + i] = acc;
    }
  };

  std::vector<double> z(2 * n, 0.0);
  std::copy(y.begin(), y.end(), z.begin());
  z[n] = 1.0;  // deterministic initial tangent

  double log_sum = 0.0;
  double measured = 0.0;
  while (measured < t_measure - 1e-9) {
    double seg = std::min(renorm_interval, t_measure - measured);
    if (advance(augmented, z, seg, cfg, &event) != RunStatus::Completed)
      throw TrajectoryDiverged("largest_lyapunov: orbit diverged during measurement",
                               t_transient + measured + event);
    measured += seg;
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) norm += z[n + i] * z[n + i];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw NumericError("largest_lyapunov: tangent vector vanished");
    log_sum += std::log(norm);
    for (size_t i = 0; i < n; ++i) z[n + i] /= norm;
  }
  return log_sum / t_measure;
}

namespace {

struct Peak {
  double time;
  double value;
};

// Local maxima of the first component by quadratic interpolation through
// each sample triple; half-open comparison so flat stretches yield nothing.
std::vector<Peak> find_peaks(const Trajectory& traj, double from_time) {
  std::vector<Peak> peaks;
  const auto& t = traj.times;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < from_time) continue;
    double y0 = traj.states[i - 1][0], y1 = traj.states[i][0], y2 = traj.states[i + 1][0];
    if (!(y1 >= y0 && y1 > y2)) continue;
    double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    double d1 = (y1 - y0) / (t1 - t0);
    double d2 = (y2 - y1) / (t2 - t1);
    double curv = (d2 - d1) / (t2 - t0);
    if (curv >= 0.0) {
      peaks.push_back({t1, y1});
      continue;
    }
    double tp = 0.5 * (t0 + t1) - d1 / (2.0 * curv);
    double yp = y0 + d1 * (tp - t0) + curv * (tp - t0) * (tp - t1);
    peaks.push_back({tp, yp});
  }
  return peaks;
}

struct Clustering {
  std::vector<double> representatives;  // ascending
  std::vector<int> labels;              // per peak, time order
};

Clustering cluster_peaks(const std::vector<Peak>& peaks, double rel_tol) {
  std::vector<double> values;
  values.reserve(peaks.size());
  for (const Peak& p : peaks) values.push_back(p.value);
  std::sort(values.begin(), values.end());

  std::vector<std::pair<double, int>> groups;  // (mean, count)
  for (double v : values) {
    if (!groups.empty()) {
      auto& [mean, count] = groups.back();
      if (std::abs(v - mean) <= rel_tol * std::max(1.0, std::abs(mean))) {
        mean = (mean * count + v) / (count + 1);
        ++count;
        continue;
      }
    }
    groups.emplace_back(v, 1);
  }

  Clustering out;
  for (auto& [mean, count] : groups) out.representatives.push_back(mean);
  out.labels.reserve(peaks.size());
  for (const Peak& p : peaks) {
    int best = 0;
    double best_d = 1e300;
    for (size_t g = 0; g < out.representatives.size(); ++g) {
      double d = std::abs(p.value - out.representatives[g]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(g);
      }
    }
    out.labels.push_back(best);
  }
  return out;
}

bool cyclically_recurrent(const std::vector<int>& labels, int k) {
  if (k < 1 || std::cmp_less(labels.size(), 2 * static_cast<size_t>(k))) return false;
  for (size_t i = 0; i + static_cast<size_t>(k) < labels.size(); ++i)
    if (labels[i] != labels[i + static_cast<size_t>(k)]) return false;
  return true;
}

// An orbit spiralling into a fixed point or cycle leaves a signed trend in
// each peak cluster's time series; a settled orbit leaves only sign-random
// integrator jitter. Catches ramps that cluster like spurious cycles.
bool drifting_clusters(const std::vector<Peak>& peaks, const Clustering& clusters) {
  const size_t k = clusters.representatives.size();
  for (size_t g = 0; g < k; ++g) {
    std::vector<double> series;
    for (size_t i = 0; i < peaks.size(); ++i)
      if (static_cast<size_t>(clusters.labels[i]) == g) series.push_back(peaks[i].value);
    if (series.size() < 6) continue;
    bool inc = true, dec = true;
    for (size_t i = 0; i + 1 < series.size(); ++i) {
      double d = series[i + 1] - series[i];
      if (d > 0) dec = false;
      if (d < 0) inc = false;
    }
    double total = std::abs(series.back() - series.front());
    if ((inc || dec) && total > 1e-7 * std::max(1.0, std::abs(series.front()))) return true;
  }
  return false;
}

// Transients spiralling into a cycle produce alternating peak amplitudes that
// cluster like a period-2k orbit while still drifting. A settled orbit has
// identical per-cluster means in the two halves of the window.
bool stationary_clusters(const std::vector<Peak>& peaks, const Clustering& clusters,
                         double rel_tol) {
  const size_t half = peaks.size() / 2;
  const size_t k = clusters.representatives.size();
  std::vector<double> sum1(k, 0.0), sum2(k, 0.0);
  std::vector<int> cnt1(k, 0), cnt2(k, 0);
  for (size_t i = 0; i < peaks.size(); ++i) {
    auto g = static_cast<size_t>(clusters.labels[i]);
    if (i < half) {
      sum1[g] += peaks[i].value;
      ++cnt1[g];
    } else {
      sum2[g] += peaks[i].value;
      ++cnt2[g];
    }
  }
  for (size_t g = 0; g < k; ++g) {
    if (cnt1[g] == 0 || cnt2[g] == 0) return false;
    double m1 = sum1[g] / cnt1[g], m2 = sum2[g] / cnt2[g];
    if (std::abs(m1 - m2) > rel_tol * std::max(1.0, std::abs(m1))) return false;
  }
  return true;
}

}  // namespace

OrbitAnalysis analyze_orbit(const VectorField& field, const JacobianField& jacobian,
                            const std::vector<double>& x0, const IntegratorConfig& cfg,
                            const ClassifierConfig& ccfg) {
  IntegratorConfig run_cfg = cfg;
  run_cfg.t_end = ccfg.t_transient + ccfg.t_measure;
  Trajectory traj = integrate(field, x0, run_cfg);

  OrbitAnalysis out;
  out.final_state = traj.final_state;

  if (traj.status != RunStatus::Completed) {
    out.cls.label = AttractorLabel::Unstable;
    out.escape_time = traj.event_time;
    return out;
  }

  std::vector<Peak> peaks = find_peaks(traj, ccfg.t_transient);
  if (peaks.size() > 64) peaks.erase(peaks.begin(), peaks.end() - 64);
  for (const Peak& p : peaks) out.peaks.push_back(p.value);

  std::vector<double> velocity(x0.size());
  field(traj.final_state, velocity);
  double vnorm = 0.0;
  for (double v : velocity) vnorm += v * v;
  vnorm = std::sqrt(vnorm);

  if (vnorm < ccfg.fp_tol) {
    out.cls.label = AttractorLabel::FixedPoint;
    out.cls.peak_values = {traj.final_state[0]};
    return out;
  }

  if (peaks.size() < 8)
    throw InconclusiveWindow("classify: fewer than 8 maxima in the measurement window");

  Clustering clusters = cluster_peaks(peaks, ccfg.peak_tol);
  const int k = static_cast<int>(clusters.representatives.size());

  if (drifting_clusters(peaks, clusters))
    throw InconclusiveWindow("classify: peak envelope still drifting");

  if (k <= ccfg.max_period && cyclically_recurrent(clusters.labels, k)) {
    if (!stationary_clusters(peaks, clusters, ccfg.peak_tol))
      throw InconclusiveWindow("classify: peak amplitudes still settling");
    out.cls.label = AttractorLabel::Periodic;
    out.cls.period = k;
    out.cls.peak_values = clusters.representatives;
    return out;
  }

  // Ambiguous peak structure: let the tangent dynamics decide. The orbit has
  // already settled, so measure from the endpoint with a short transient.
  try {
    double lyap = largest_lyapunov(field, jacobian, traj.final_state, cfg,
                                   /*t_transient=*/20.0, ccfg.t_measure, ccfg.renorm_interval);
    out.cls.lyapunov = lyap;
    if (lyap > ccfg.chaos_tol) {
      out.cls.label = AttractorLabel::Chaotic;
      out.cls.peak_values = clusters.representatives;
    } else if (lyap < -ccfg.chaos_tol) {
      // Contracting orbit that has not yet come to rest: a slow spiral.
      out.cls.label = AttractorLabel::FixedPoint;
      out.cls.peak_values = {traj.final_state[0]};
    } else {
      out.cls.label = AttractorLabel::Periodic;
      out.cls.period = k;
      out.cls.peak_values = clusters.representatives;
    }
  } catch (const TrajectoryDiverged& diverged) {
    out.cls.label = AttractorLabel::Unstable;
    out.escape_time = run_cfg.t_end + diverged.at_time();
  }
  return out;
}

AttractorClass classify(const VectorField& field, const JacobianField& jacobian,
                        const std::vector<double>& x0, const IntegratorConfig& cfg,
                        const ClassifierConfig& ccfg) {
  return analyze_orbit(field, jacobian, x0, cfg, ccfg).cls;
}

}  // namespace mapode
