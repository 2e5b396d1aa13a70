// mapode: embeds 1-D maps into order-N ODEs, checks their stability with
// exact Routh-Hurwitz analysis and explores the resulting dynamics.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "mapode/config.hpp"
#include "mapode/dynamics.hpp"
#include "mapode/errors.hpp"
#include "mapode/io.hpp"
#include "mapode/linear_solution.hpp"
#include "mapode/scenarios.hpp"
#include "mapode/stability.hpp"
#include "mapode/sweep.hpp"

namespace {

using namespace mapode;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitUsage = 64;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(output_path, text);
  }
}

// ---------------------------------------------------------------------------
// shared option blocks

struct CommonOpts {
  std::string config_path;
  std::string output;
  std::string format = "text";
};

struct SystemOpts {
  std::string system = "trunc";  // trunc | scaled
  std::string map_spec = "logistic:4";
  int order = 3;
  double nu = 2.0 / 3.0;
  double lambda = 0.5;
  double p = 0.0;  // scaled shortcut: nu, lambda from to_scaled(p)
  std::string x0_text;
};

struct IntegratorOpts {
  std::string method = "rk4";
  double h = 1e-2;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double t_end = 100.0;
  double stride = 0.05;
  double divergence_bound = 1e8;
};

struct ClassifierOpts {
  double t_transient = 500.0;
  double t_measure = 2000.0;
  double renorm = 1.0;
  double peak_tol = 1e-3;
  double fp_tol = 1e-6;
  double chaos_tol = 5e-3;
  int max_period = 16;
};

struct BuiltSystem {
  VectorField field;
  JacobianField jacobian;
  std::vector<double> x0;
  json descriptor;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
  cmd->add_option("--config", o.config_path, "key = value config file; flags win");
  cmd->add_option("--output", o.output, "write to file instead of stdout");
  if (with_format)
    cmd->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
}

struct SystemFlags {
  CLI::Option* system = nullptr;
  CLI::Option* map = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* nu = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* x0 = nullptr;
};

SystemFlags add_system(CLI::App* cmd, SystemOpts& o) {
  SystemFlags f;
  f.system = cmd->add_option("--system", o.system, "trunc (map truncation) or scaled (cubic form)")
                 ->check(CLI::IsMember({"trunc", "scaled"}));
  f.map = cmd->add_option("--map", o.map_spec, "logistic:<p> or poly:<c0>,<c1>,...");
  f.order = cmd->add_option("--order", o.order, "truncation order N")->check(CLI::Range(1, 20));
  f.nu = cmd->add_option("--nu", o.nu, "scaled-cubic damping");
  f.lambda = cmd->add_option("--lambda", o.lambda, "scaled-cubic forcing");
  f.p = cmd->add_option("--p", o.p, "scaled shortcut: nu = 2/3, lambda = 2(p-1)/9");
  f.x0 = cmd->add_option("--x0", o.x0_text, "initial state, comma separated");
  return f;
}

struct IntegratorFlags {
  CLI::Option* method = nullptr;
  CLI::Option* h = nullptr;
  CLI::Option* rel_tol = nullptr;
  CLI::Option* abs_tol = nullptr;
  CLI::Option* t_end = nullptr;
  CLI::Option* stride = nullptr;
  CLI::Option* bound = nullptr;
};

IntegratorFlags add_integrator(CLI::App* cmd, IntegratorOpts& o) {
  IntegratorFlags f;
  f.method = cmd->add_option("--method", o.method, "rk4 (fixed) or rk45 (adaptive)")
                 ->check(CLI::IsMember({"rk4", "rk45"}));
  f.h = cmd->add_option("--step", o.h, "fixed step size");
  f.rel_tol = cmd->add_option("--rel-tol", o.rel_tol, "adaptive relative tolerance");
  f.abs_tol = cmd->add_option("--abs-tol", o.abs_tol, "adaptive absolute tolerance");
  f.t_end = cmd->add_option("--t-end", o.t_end, "integration horizon");
  f.stride = cmd->add_option("--stride", o.stride, "sample stride");
  f.bound = cmd->add_option("--divergence-bound", o.divergence_bound,
                            "state bound past which the run counts as diverged");
  return f;
}

struct ClassifierFlags {
  CLI::Option* t_transient = nullptr;
  CLI::Option* t_measure = nullptr;
  CLI::Option* renorm = nullptr;
  CLI::Option* peak_tol = nullptr;
  CLI::Option* fp_tol = nullptr;
  CLI::Option* chaos_tol = nullptr;
  CLI::Option* max_period = nullptr;
};

ClassifierFlags add_classifier(CLI::App* cmd, ClassifierOpts& o) {
  ClassifierFlags f;
  f.t_transient = cmd->add_option("--t-transient", o.t_transient, "discarded settling time");
  f.t_measure = cmd->add_option("--t-measure", o.t_measure, "measurement window");
  f.renorm = cmd->add_option("--renorm", o.renorm, "tangent renormalization interval");
  f.peak_tol = cmd->add_option("--peak-tol", o.peak_tol, "relative peak-cluster tolerance");
  f.fp_tol = cmd->add_option("--fp-tol", o.fp_tol, "rest-velocity threshold");
  f.chaos_tol = cmd->add_option("--chaos-tol", o.chaos_tol, "Lyapunov chaos threshold");
  f.max_period = cmd->add_option("--max-period", o.max_period, "largest reported period");
  return f;
}

// Config-file values fill in every flag the command line left unset.
struct Overlay {
  const RunConfig* cfg;

  void num(CLI::Option* opt, const char* key, double& target) const {
    if (opt && opt->count() == 0 && cfg->has(key)) target = cfg->number(key);
  }
  void integer(CLI::Option* opt, const char* key, int& target) const {
    if (opt && opt->count() == 0 && cfg->has(key)) target = static_cast<int>(cfg->integer(key));
  }
  void text(CLI::Option* opt, const char* key, std::string& target) const {
    if (opt && opt->count() == 0 && cfg->has(key)) target = cfg->raw(key);
  }
};

RunConfig load_config_if_any(const CommonOpts& o) {
  if (o.config_path.empty()) return RunConfig{};
  return RunConfig::load(o.config_path);
}

void overlay_system(const Overlay& ov, const SystemFlags& f, SystemOpts& o) {
  ov.text(f.system, "system", o.system);
  ov.text(f.map, "map", o.map_spec);
  ov.integer(f.order, "order", o.order);
  ov.num(f.nu, "nu", o.nu);
  ov.num(f.lambda, "lambda", o.lambda);
  ov.num(f.p, "p", o.p);
  ov.text(f.x0, "x0", o.x0_text);
}

void overlay_integrator(const Overlay& ov, const IntegratorFlags& f, IntegratorOpts& o) {
  ov.text(f.method, "method", o.method);
  ov.num(f.h, "h", o.h);
  ov.num(f.rel_tol, "rel_tol", o.rel_tol);
  ov.num(f.abs_tol, "abs_tol", o.abs_tol);
  ov.num(f.t_end, "t_end", o.t_end);
  ov.num(f.stride, "sample_stride", o.stride);
  ov.num(f.bound, "divergence_bound", o.divergence_bound);
}

void overlay_classifier(const Overlay& ov, const ClassifierFlags& f, ClassifierOpts& o) {
  ov.num(f.t_transient, "t_transient", o.t_transient);
  ov.num(f.t_measure, "t_measure", o.t_measure);
  ov.num(f.renorm, "renorm_interval", o.renorm);
  ov.num(f.peak_tol, "peak_tol", o.peak_tol);
  ov.num(f.fp_tol, "fp_tol", o.fp_tol);
  ov.num(f.chaos_tol, "chaos_tol", o.chaos_tol);
  ov.integer(f.max_period, "max_period", o.max_period);
}

IntegratorConfig make_integrator(const IntegratorOpts& o) {
  IntegratorConfig cfg;
  if (o.method == "rk4") {
    cfg.method = RK4Fixed{o.h};
  } else {
    cfg.method = RK45Adaptive{o.rel_tol, o.abs_tol};
  }
  cfg.t_end = o.t_end;
  cfg.sample_stride = o.stride;
  cfg.divergence_bound = o.divergence_bound;
  return cfg;
}

ClassifierConfig make_classifier(const ClassifierOpts& o) {
  ClassifierConfig cfg;
  cfg.t_transient = o.t_transient;
  cfg.t_measure = o.t_measure;
  cfg.renorm_interval = o.renorm;
  cfg.peak_tol = o.peak_tol;
  cfg.fp_tol = o.fp_tol;
  cfg.chaos_tol = o.chaos_tol;
  cfg.max_period = o.max_period;
  return cfg;
}

BuiltSystem build_system(const SystemOpts& o) {
  BuiltSystem b;
  if (o.system == "scaled") {
    ScaledCubic c = o.p != 0.0 ? to_scaled(o.p) : ScaledCubic{o.nu, o.lambda};
    b.field = make_field(c);
    b.jacobian = make_jacobian(c);
    b.x0 = {0.1, 0.0, 0.0};
    b.descriptor = json{{"system", "scaled"}, {"nu", c.nu}, {"lambda", c.lambda}};
  } else {
    auto sys = truncate(MapSpec::parse(o.map_spec), o.order);
    b.field = make_field(sys);
    b.jacobian = make_jacobian(sys);
    b.x0.assign(static_cast<size_t>(o.order), 0.0);
    b.x0[0] = 0.3;
    b.descriptor = json{{"system", "trunc"}, {"map", sys.map.to_string()}, {"order", o.order}};
  }
  if (!o.x0_text.empty()) {
    b.x0 = parse_vector(o.x0_text);
    if (b.x0.size() != (o.system == "scaled" ? 3 : static_cast<size_t>(o.order)))
      throw DomainError("--x0 dimension does not match the system order");
  }
  return b;
}

Rational resolve_alpha(const std::string& alpha_text, const std::string& map_spec,
                       const std::string& at_text, bool have_alpha, bool have_at) {
  if (have_alpha) return parse_rational_text(alpha_text);
  if (!have_at) throw DomainError("provide --alpha, or --map with --at");
  MapSpec m = MapSpec::parse(map_spec);
  return Rational::from_double(1.0 - m.deriv(parse_number(at_text)));
}

json roots_to_json(const std::vector<std::complex<double>>& mu) {
  json arr = json::array();
  for (const auto& z : mu) arr.push_back(json::array({z.real(), z.imag()}));
  return arr;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int run_truncate(const CommonOpts& common, const SystemOpts& sys_opts) {
  auto sys = truncate(MapSpec::parse(sys_opts.map_spec), sys_opts.order);
  const int n = sys.order;

  std::vector<double> int_coeffs;  // N!/j!, highest derivative first
  for (int j = n; j >= 0; --j)
    int_coeffs.push_back(j == n ? 1.0 : sys.scaled_coeffs[static_cast<size_t>(j)]);

  std::vector<std::vector<double>> companion(static_cast<size_t>(n),
                                             std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int k = 0; k + 1 < n; ++k)
    companion[static_cast<size_t>(k)][static_cast<size_t>(k + 1)] = 1.0;
  for (int j = 0; j < n; ++j)
    companion[static_cast<size_t>(n - 1)][static_cast<size_t>(j)] =
        -sys.scaled_coeffs[static_cast<size_t>(j)];

  if (common.format == "json") {
    json j{{"map", sys.map.to_string()},
           {"order", n},
           {"integer_coeffs", int_coeffs},
           {"taylor_coeffs", sys.taylor_coeffs},
           {"companion", companion},
           {"forcing_scale", sys.n_factorial}};
    emit(j.dump(2) + "\n", common.output);
    return kExitOk;
  }

  std::string out;
  out += "map: " + sys.map.to_string() + "\norder: " + std::to_string(n) + "\n";
  out += "ode:";
  for (int j = n; j >= 1; --j)
    out += " " + format_double(int_coeffs[static_cast<size_t>(n - j)]) + "*x^(" +
           std::to_string(j) + ") +";
  out += " " + format_double(int_coeffs.back()) + "*x = " + format_double(sys.n_factorial) +
         "*f(x)\n";
  out += "companion (first-order form, forcing " + format_double(sys.n_factorial) + "*f(x1)):\n";
  for (const auto& row : companion) {
    out += " ";
    for (double v : row) out += " " + format_double(v);
    out += "\n";
  }
  emit(out, common.output);
  return kExitOk;
}

int run_stability(const CommonOpts& common, int order, const Rational& alpha, bool roots_only) {
  auto cp = char_poly(order, alpha);
  auto mu = roots(cp);

  if (roots_only) {
    if (common.format == "json") {
      json j{{"order", order}, {"alpha", alpha}, {"roots", roots_to_json(mu)}};
      emit(j.dump(2) + "\n", common.output);
    } else {
      std::string out;
      for (const auto& z : mu)
        out += format_double(z.real()) + " " + (z.imag() < 0 ? "- " : "+ ") +
               format_double(std::abs(z.imag())) + "i\n";
      emit(out, common.output);
    }
    return kExitOk;
  }

  auto rep = hurwitz_sequence(cp);
  if (common.format == "json") {
    json j{{"order", order}, {"alpha", alpha}, {"report", rep}, {"roots", roots_to_json(mu)}};
    emit(j.dump(2) + "\n", common.output);
    return kExitOk;
  }
  std::string out = "alpha = " + alpha.to_string() + "\n";
  for (size_t k = 0; k < rep.u_sequence.size(); ++k)
    out += "U_" + std::to_string(k) + " = " + rep.u_sequence[k].to_string() + "\n";
  out += "sign changes = " + std::to_string(rep.sign_changes) + "\n";
  out += "unstable roots = " + std::to_string(rep.n_unstable_roots) + "\n";
  out += "verdict = " + std::string(to_string(rep.verdict)) + "\n";
  out += "roots:\n";
  for (const auto& z : mu)
    out += "  " + format_double(z.real()) + " " + (z.imag() < 0 ? "- " : "+ ") +
           format_double(std::abs(z.imag())) + "i\n";
  emit(out, common.output);
  return kExitOk;
}

int run_linear(const CommonOpts& common, const SystemOpts& sys_opts, double at, double t,
               const std::string& xi0_text) {
  auto sys = truncate(MapSpec::parse(sys_opts.map_spec), sys_opts.order);
  auto ls = linearize(sys, at);
  std::vector<double> xi0(static_cast<size_t>(sys_opts.order), 0.0);
  if (!xi0_text.empty()) {
    xi0 = parse_vector(xi0_text);
    if (xi0.size() != static_cast<size_t>(sys_opts.order))
      throw DomainError("--xi0 dimension does not match --order");
  }

  auto series = propagate_series(ls, xi0, t);
  bool closed_ok = true;
  std::vector<double> closed;
  std::string closed_note;
  try {
    closed = propagate_closed(ls, xi0, t);
  } catch (const DegenerateSpectrum& e) {
    closed_ok = false;
    closed_note = e.what();
  }
  double diff = 0.0;
  if (closed_ok)
    for (size_t i = 0; i < series.size(); ++i)
      diff = std::max(diff, std::abs(series[i] - closed[i]));

  if (common.format == "json") {
    json j{{"order", sys_opts.order},
           {"alpha", ls.alpha},
           {"beta", ls.beta},
           {"t", t},
           {"series", series},
           {"closed", closed_ok ? json(closed) : json(nullptr)},
           {"max_difference", closed_ok ? json(diff) : json(nullptr)}};
    if (!closed_ok) j["degenerate"] = closed_note;
    emit(j.dump(2) + "\n", common.output);
    return kExitOk;
  }
  std::string out = "alpha = " + format_double(ls.alpha) + ", beta = " + format_double(ls.beta) +
                    ", t = " + format_double(t) + "\n";
  out += "series:";
  for (double v : series) out += " " + format_double(v);
  out += "\n";
  if (closed_ok) {
    out += "closed:";
    for (double v : closed) out += " " + format_double(v);
    out += "\nmax difference = " + format_double(diff) + "\n";
  } else {
    out += "closed: unavailable (" + closed_note + ")\n";
  }
  emit(out, common.output);
  return kExitOk;
}

int run_integrate(const CommonOpts& common, const SystemOpts& sys_opts,
                  const IntegratorOpts& int_opts) {
  BuiltSystem b = build_system(sys_opts);
  auto traj = integrate(b.field, b.x0, make_integrator(int_opts));
  if (common.format == "json") {
    json j{{"descriptor", b.descriptor}, {"trajectory", traj}};
    emit(j.dump(2) + "\n", common.output);
  } else {
    emit(trajectory_csv(traj), common.output);
  }
  return kExitOk;
}

int run_lyapunov(const CommonOpts& common, const SystemOpts& sys_opts,
                 const IntegratorOpts& int_opts, const ClassifierOpts& cls_opts) {
  BuiltSystem b = build_system(sys_opts);
  double lyap = largest_lyapunov(b.field, b.jacobian, b.x0, make_integrator(int_opts),
                                 cls_opts.t_transient, cls_opts.t_measure, cls_opts.renorm);
  json j{{"descriptor", b.descriptor},
         {"x0", b.x0},
         {"t_transient", cls_opts.t_transient},
         {"t_measure", cls_opts.t_measure},
         {"lyapunov", lyap}};
  emit(j.dump(2) + "\n", common.output);
  return kExitOk;
}

int run_classify(const CommonOpts& common, const SystemOpts& sys_opts,
                 const IntegratorOpts& int_opts, const ClassifierOpts& cls_opts) {
  BuiltSystem b = build_system(sys_opts);
  auto analysis = analyze_orbit(b.field, b.jacobian, b.x0, make_integrator(int_opts),
                                make_classifier(cls_opts));
  json j{{"descriptor", b.descriptor},
         {"x0", b.x0},
         {"class", analysis.cls},
         {"peaks", analysis.peaks},
         {"escape_time", analysis.escape_time ? json(*analysis.escape_time) : json(nullptr)}};
  emit(j.dump(2) + "\n", common.output);
  return kExitOk;
}

int run_bifurcate(const CommonOpts& common, const SweepPlan& plan, const std::string& axis_name,
                  const std::string& svg_path) {
  auto records = bifurcation_sweep(plan);
  std::string csv = bifurcation_csv(axis_name, records);
  std::string sidecar = bifurcation_sidecar_json(axis_name, records);
  std::string out_path = common.output.empty() ? "bifurcation.csv" : common.output;
  write_file(out_path, csv);
  write_file(out_path + ".meta.json", sidecar);
  if (!svg_path.empty()) write_file(svg_path, bifurcation_svg(axis_name, records));
  std::printf("wrote %s (%zu points) and %s\n", out_path.c_str(), records.size(),
              (out_path + ".meta.json").c_str());
  return kExitOk;
}

int run_scan(const CommonOpts& common, const SweepPlan& plan, int threads) {
  auto grid = plane_scan(plan, threads);
  std::string csv = plane_csv(plan.axis1.name, plan.axis2->name, grid);
  std::string out_path = common.output.empty() ? "scan.csv" : common.output;
  write_file(out_path, csv);
  std::printf("wrote %s (%zu x %zu grid)\n", out_path.c_str(), grid.rows, grid.cols);
  return kExitOk;
}

int run_reproduce(const std::string& id, bool list, int threads) {
  if (list) {
    for (const auto& s : scenario_registry())
      std::printf("%-24s %s\n", s.id.c_str(), s.summary.c_str());
    return kExitOk;
  }
  const Scenario* s = find_scenario(id);
  if (!s) throw DomainError("unknown scenario '" + id + "' (see `reproduce --list`)");
  ScenarioContext ctx;
  ctx.threads = threads;
  ScenarioResult res = s->run(ctx);
  std::printf("[%s] %s — %s\n", res.pass ? "PASS" : "FAIL", s->id.c_str(), res.details.c_str());
  return res.pass ? kExitOk : kExitDomain;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"map-to-ODE embedding, exact Routh-Hurwitz stability and dynamics explorer"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--threads, --seed) may follow the subcommand
  app.option_defaults()->always_capture_default();  // defaults visible in --help

  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", threads, "worker cap for grid scans");
  long seed = 0;
  app.add_option("--seed", seed, "reserved; no stochastic component uses it (no-op)");

  // truncate
  auto* cmd_truncate = app.add_subcommand("truncate", "print the order-N ODE for a map");
  CommonOpts trunc_common;
  SystemOpts trunc_sys;
  add_common(cmd_truncate, trunc_common);
  auto trunc_flags = add_system(cmd_truncate, trunc_sys);

  // stability / roots
  auto* cmd_stability = app.add_subcommand("stability", "Hurwitz sequence, verdict and roots");
  auto* cmd_roots = app.add_subcommand("roots", "characteristic roots only");
  CommonOpts stab_common, roots_common;
  SystemOpts stab_sys, roots_sys;
  std::string stab_alpha, roots_alpha, stab_at, roots_at;
  add_common(cmd_stability, stab_common);
  SystemFlags stab_flags = add_system(cmd_stability, stab_sys);
  CLI::Option* stab_alpha_opt =
      cmd_stability->add_option("--alpha", stab_alpha, "rational a/b or decimal");
  CLI::Option* stab_at_opt =
      cmd_stability->add_option("--at", stab_at, "reference point (with --map)");
  add_common(cmd_roots, roots_common);
  SystemFlags roots_flags = add_system(cmd_roots, roots_sys);
  CLI::Option* roots_alpha_opt =
      cmd_roots->add_option("--alpha", roots_alpha, "rational a/b or decimal");
  CLI::Option* roots_at_opt =
      cmd_roots->add_option("--at", roots_at, "reference point (with --map)");

  // linear
  auto* cmd_linear = app.add_subcommand("linear", "closed-form vs series propagation");
  CommonOpts linear_common;
  SystemOpts linear_sys;
  double linear_at = 0.0, linear_t = 1.0;
  std::string linear_xi0;
  add_common(cmd_linear, linear_common);
  SystemFlags linear_flags = add_system(cmd_linear, linear_sys);
  CLI::Option* linear_at_opt = cmd_linear->add_option("--at", linear_at, "reference point");
  CLI::Option* linear_t_opt = cmd_linear->add_option("--t", linear_t, "propagation time");
  CLI::Option* linear_xi0_opt = cmd_linear->add_option("--xi0", linear_xi0, "initial state");

  // integrate / lyapunov / classify
  auto* cmd_integrate = app.add_subcommand("integrate", "sample a trajectory to CSV/JSON");
  auto* cmd_lyapunov = app.add_subcommand("lyapunov", "largest Lyapunov exponent");
  auto* cmd_classify = app.add_subcommand("classify", "attractor classification");
  CommonOpts int_common, lyap_common, cls_common;
  SystemOpts int_sys, lyap_sys, cls_sys;
  IntegratorOpts int_int, lyap_int, cls_int;
  ClassifierOpts lyap_cls, cls_cls;
  add_common(cmd_integrate, int_common);
  SystemFlags int_sys_flags = add_system(cmd_integrate, int_sys);
  IntegratorFlags int_int_flags = add_integrator(cmd_integrate, int_int);
  add_common(cmd_lyapunov, lyap_common, /*with_format=*/false);
  SystemFlags lyap_sys_flags = add_system(cmd_lyapunov, lyap_sys);
  IntegratorFlags lyap_int_flags = add_integrator(cmd_lyapunov, lyap_int);
  ClassifierFlags lyap_cls_flags = add_classifier(cmd_lyapunov, lyap_cls);
  add_common(cmd_classify, cls_common, /*with_format=*/false);
  SystemFlags cls_sys_flags = add_system(cmd_classify, cls_sys);
  IntegratorFlags cls_int_flags = add_integrator(cmd_classify, cls_int);
  ClassifierFlags cls_cls_flags = add_classifier(cmd_classify, cls_cls);

  // bifurcate
  auto* cmd_bifurcate =
      app.add_subcommand("bifurcate", "one-parameter sweep to CSV (+JSON sidecar)");
  CommonOpts bif_common;
  SystemOpts bif_sys;
  IntegratorOpts bif_int;
  ClassifierOpts bif_cls;
  std::string bif_axis = "lambda", bif_continuation = "follow", bif_svg;
  double bif_lo = 0.2, bif_hi = 1.3;
  int bif_steps = 1101;
  add_common(cmd_bifurcate, bif_common, /*with_format=*/false);
  SystemFlags bif_sys_flags = add_system(cmd_bifurcate, bif_sys);
  IntegratorFlags bif_int_flags = add_integrator(cmd_bifurcate, bif_int);
  ClassifierFlags bif_cls_flags = add_classifier(cmd_bifurcate, bif_cls);
  CLI::Option* bif_axis_opt = cmd_bifurcate->add_option("--axis", bif_axis, "p, nu or lambda");
  CLI::Option* bif_lo_opt = cmd_bifurcate->add_option("--lo", bif_lo, "axis start");
  CLI::Option* bif_hi_opt = cmd_bifurcate->add_option("--hi", bif_hi, "axis end");
  CLI::Option* bif_steps_opt = cmd_bifurcate->add_option("--steps", bif_steps, "grid points");
  CLI::Option* bif_cont_opt =
      cmd_bifurcate->add_option("--continuation", bif_continuation, "cold or follow")
          ->check(CLI::IsMember({"cold", "follow"}));
  cmd_bifurcate->add_option("--svg", bif_svg, "also write an SVG scatter here");

  // scan
  auto* cmd_scan = app.add_subcommand("scan", "two-parameter (nu, lambda) raster to CSV");
  CommonOpts scan_common;
  IntegratorOpts scan_int;
  ClassifierOpts scan_cls;
  std::string scan_x0_text;
  double nu_lo = 0.3, nu_hi = 1.2, lambda_lo = 0.2, lambda_hi = 1.4;
  int nu_steps = 200, lambda_steps = 200;
  add_common(cmd_scan, scan_common, /*with_format=*/false);
  IntegratorFlags scan_int_flags = add_integrator(cmd_scan, scan_int);
  ClassifierFlags scan_cls_flags = add_classifier(cmd_scan, scan_cls);
  CLI::Option* nu_lo_opt = cmd_scan->add_option("--nu-lo", nu_lo, "nu axis start");
  CLI::Option* nu_hi_opt = cmd_scan->add_option("--nu-hi", nu_hi, "nu axis end");
  CLI::Option* nu_steps_opt = cmd_scan->add_option("--nu-steps", nu_steps, "nu grid points");
  CLI::Option* lambda_lo_opt = cmd_scan->add_option("--lambda-lo", lambda_lo, "lambda axis start");
  CLI::Option* lambda_hi_opt = cmd_scan->add_option("--lambda-hi", lambda_hi, "lambda axis end");
  CLI::Option* lambda_steps_opt =
      cmd_scan->add_option("--lambda-steps", lambda_steps, "lambda grid points");
  CLI::Option* scan_x0_opt = cmd_scan->add_option("--x0", scan_x0_text, "cold-start state");

  // reproduce
  auto* cmd_reproduce = app.add_subcommand("reproduce", "run a named acceptance scenario");
  std::string repro_id;
  bool repro_list = false;
  cmd_reproduce->add_option("claim", repro_id, "scenario id");
  cmd_reproduce->add_flag("--list", repro_list, "list scenario ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_truncate->parsed()) {
    RunConfig cfg = load_config_if_any(trunc_common);
    Overlay ov{&cfg};
    overlay_system(ov, trunc_flags, trunc_sys);
    return run_truncate(trunc_common, trunc_sys);
  }
  if (cmd_stability->parsed() || cmd_roots->parsed()) {
    const bool is_roots = cmd_roots->parsed();
    CommonOpts& common = is_roots ? roots_common : stab_common;
    SystemOpts& sys = is_roots ? roots_sys : stab_sys;
    RunConfig cfg = load_config_if_any(common);
    Overlay ov{&cfg};
    overlay_system(ov, is_roots ? roots_flags : stab_flags, sys);
    std::string& alpha_text = is_roots ? roots_alpha : stab_alpha;
    std::string& at_text = is_roots ? roots_at : stab_at;
    ov.text(is_roots ? roots_alpha_opt : stab_alpha_opt, "alpha", alpha_text);
    ov.text(is_roots ? roots_at_opt : stab_at_opt, "at", at_text);
    Rational alpha = resolve_alpha(alpha_text, sys.map_spec, at_text, !alpha_text.empty(),
                                   !at_text.empty());
    return run_stability(common, sys.order, alpha, is_roots);
  }
  if (cmd_linear->parsed()) {
    RunConfig cfg = load_config_if_any(linear_common);
    Overlay ov{&cfg};
    overlay_system(ov, linear_flags, linear_sys);
    ov.num(linear_at_opt, "at", linear_at);
    ov.num(linear_t_opt, "t", linear_t);
    ov.text(linear_xi0_opt, "xi0", linear_xi0);
    return run_linear(linear_common, linear_sys, linear_at, linear_t, linear_xi0);
  }
  if (cmd_integrate->parsed()) {
    RunConfig cfg = load_config_if_any(int_common);
    Overlay ov{&cfg};
    overlay_system(ov, int_sys_flags, int_sys);
    overlay_integrator(ov, int_int_flags, int_int);
    return run_integrate(int_common, int_sys, int_int);
  }
  if (cmd_lyapunov->parsed()) {
    RunConfig cfg = load_config_if_any(lyap_common);
    Overlay ov{&cfg};
    overlay_system(ov, lyap_sys_flags, lyap_sys);
    overlay_integrator(ov, lyap_int_flags, lyap_int);
    overlay_classifier(ov, lyap_cls_flags, lyap_cls);
    return run_lyapunov(lyap_common, lyap_sys, lyap_int, lyap_cls);
  }
  if (cmd_classify->parsed()) {
    RunConfig cfg = load_config_if_any(cls_common);
    Overlay ov{&cfg};
    overlay_system(ov, cls_sys_flags, cls_sys);
    overlay_integrator(ov, cls_int_flags, cls_int);
    overlay_classifier(ov, cls_cls_flags, cls_cls);
    return run_classify(cls_common, cls_sys, cls_int, cls_cls);
  }
  if (cmd_bifurcate->parsed()) {
    RunConfig cfg = load_config_if_any(bif_common);
    Overlay ov{&cfg};
    overlay_system(ov, bif_sys_flags, bif_sys);
    overlay_integrator(ov, bif_int_flags, bif_int);
    overlay_classifier(ov, bif_cls_flags, bif_cls);
    ov.num(bif_lo_opt, "lo", bif_lo);
    ov.num(bif_hi_opt, "hi", bif_hi);
    ov.integer(bif_steps_opt, "steps", bif_steps);
    ov.text(bif_cont_opt, "continuation", bif_continuation);
    if (bif_axis_opt->count() == 0 && bif_sys.system == "trunc") bif_axis = "p";

    SweepPlan plan;
    plan.system =
        bif_sys.system == "scaled" ? SystemKind::ScaledCubic : SystemKind::TruncatedLogistic;
    plan.order = bif_sys.order;
    if (plan.system == SystemKind::ScaledCubic) {
      plan.base_params["nu"] = bif_sys.nu;
      plan.base_params["lambda"] = bif_sys.lambda;
    }
    plan.axis1 = {bif_axis, bif_lo, bif_hi, bif_steps};
    plan.continuation =
        bif_continuation == "cold" ? Continuation::ColdStart : Continuation::FollowAttractor;
    if (!bif_sys.x0_text.empty()) plan.x0 = parse_vector(bif_sys.x0_text);
    plan.integrator = make_integrator(bif_int);
    plan.classifier = make_classifier(bif_cls);
    return run_bifurcate(bif_common, plan, bif_axis, bif_svg);
  }
  if (cmd_scan->parsed()) {
    RunConfig cfg = load_config_if_any(scan_common);
    Overlay ov{&cfg};
    overlay_integrator(ov, scan_int_flags, scan_int);
    overlay_classifier(ov, scan_cls_flags, scan_cls);
    ov.num(nu_lo_opt, "nu_lo", nu_lo);
    ov.num(nu_hi_opt, "nu_hi", nu_hi);
    ov.integer(nu_steps_opt, "nu_steps", nu_steps);
    ov.num(lambda_lo_opt, "lambda_lo", lambda_lo);
    ov.num(lambda_hi_opt, "lambda_hi", lambda_hi);
    ov.integer(lambda_steps_opt, "lambda_steps", lambda_steps);
    ov.text(scan_x0_opt, "x0", scan_x0_text);
    if (cfg.has("threads")) threads = static_cast<int>(cfg.integer("threads"));

    SweepPlan plan;
    plan.system = SystemKind::ScaledCubic;
    plan.axis1 = {"nu", nu_lo, nu_hi, nu_steps};
    plan.axis2 = AxisSpec{"lambda", lambda_lo, lambda_hi, lambda_steps};
    plan.continuation = Continuation::ColdStart;
    if (!scan_x0_text.empty()) plan.x0 = parse_vector(scan_x0_text);
    plan.integrator = make_integrator(scan_int);
    plan.classifier = make_classifier(scan_cls);
    return run_scan(scan_common, plan, threads);
  }
  if (cmd_reproduce->parsed()) {
    if (!repro_list && repro_id.empty())
      throw DomainError("reproduce needs a claim id or --list");
    return run_reproduce(repro_id, repro_list, threads);
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  }
}
