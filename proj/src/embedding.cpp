#include "mapode/embedding.hpp"

#include <cmath>

#include "mapode/errors.hpp"

namespace mapode {

TruncatedSystem truncate(const MapSpec& m, int order) {
  if (order < 1) throw DomainError("truncate: order 0 is algebraic, not differential");
  if (order > 20) throw DomainError("truncate: order above 20 not supported");
  TruncatedSystem s{m, order, {}, {}, 0.0};
  s.taylor_coeffs.reserve(static_cast<size_t>(order) + 1);
  for (int j = 0; j <= order; ++j)
    s.taylor_coeffs.push_back(Rational::inv_factorial(static_cast<unsigned>(j)));
  const BigInt nfact = BigInt::factorial(static_cast<unsigned>(order));
  s.n_factorial = nfact.to_double();
  s.scaled_coeffs.reserve(static_cast<size_t>(order));
  for (int j = 0; j < order; ++j) {
    s.scaled_coeffs.push_back((nfact / BigInt::factorial(static_cast<unsigned>(j))).to_double());
  }
  return s;
}

void vector_field(const TruncatedSystem& s, std::span<const double> state,
                  std::span<double> out) {
  const auto n = static_cast<size_t>(s.order);
  for (size_t k = 0; k + 1 < n; ++k) out[k] = state[k + 1];
  double acc = s.n_factorial * s.map.eval(state[0]);
  for (size_t j = 0; j < n; ++j) acc -= s.scaled_coeffs[j] * state[j];
  out[n - 1] = acc;
}

std::vector<double> vector_field(const TruncatedSystem& s, const std::vector<double>& state) {
  std::vector<double> out(state.size());
  vector_field(s, state, out);
  return out;
}

void vector_field_jacobian(const TruncatedSystem& s, std::span<const double> state,
                           std::span<double> out) {
  const auto n = static_cast<size_t>(s.order);
  for (size_t i = 0; i < n * n; ++i) out[i] = 0.0;
  for (size_t k = 0; k + 1 < n; ++k) out[k * n + k + 1] = 1.0;
  double* last = out.data() + (n - 1) * n;
  last[0] = s.n_factorial * (s.map.deriv(state[0]) - 1.0);
  for (size_t j = 1; j < n; ++j) last[j] = -s.scaled_coeffs[j];
}

LinearizedSystem linearize(const TruncatedSystem& s, double x_star) {
  if (!std::isfinite(x_star)) throw DomainError("linearize: non-finite reference point");
  const auto n = static_cast<size_t>(s.order);
  LinearizedSystem ls;
  ls.alpha = 1.0 - s.map.deriv(x_star);
  ls.beta = s.map.eval(x_star) - x_star;
  ls.ref_point = x_star;
  ls.order = s.order;
  ls.companion.assign(n * n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) ls.companion[k * n + k + 1] = 1.0;
  double* last = ls.companion.data() + (n - 1) * n;
  last[0] = -ls.alpha * s.n_factorial;
  for (size_t j = 1; j < n; ++j) last[j] = -s.scaled_coeffs[j];
  ls.inhomogeneous.assign(n, 0.0);
  ls.inhomogeneous[n - 1] = ls.beta * s.n_factorial;
  return ls;
}

void linear_field(const LinearizedSystem& ls, std::span<const double> state,
                  std::span<double> out) {
  const auto n = static_cast<size_t>(ls.order);
  for (size_t i = 0; i < n; ++i) {
    double acc = ls.inhomogeneous[i];
    const double* row = ls.companion.data() + i * n;
    for (size_t j = 0; j < n; ++j) acc += row[j] * state[j];
    out[i] = acc;
  }
}

ScaledCubic to_scaled(double p) {
  if (!std::isfinite(p)) throw DomainError("to_scaled: non-finite p");
  return ScaledCubic{2.0 / 3.0, 2.0 * (p - 1.0) / 9.0};
}

void scaled_vector_field(const ScaledCubic& c, std::span<const double> state,
                         std::span<double> out) {
  out[0] = state[1];
  out[1] = state[2];
  out[2] = -state[2] - c.nu * state[1] + c.lambda * state[0] - state[0] * state[0];
}

std::vector<double> scaled_vector_field(const ScaledCubic& c, const std::vector<double>& state) {
  std::vector<double> out(3);
  scaled_vector_field(c, state, out);
  return out;
}

void scaled_vector_field_jacobian(const ScaledCubic& c, std::span<const double> state,
                                  std::span<double> out) {
  for (size_t i = 0; i < 9; ++i) out[i] = 0.0;
  out[0 * 3 + 1] = 1.0;
  out[1 * 3 + 2] = 1.0;
  out[2 * 3 + 0] = c.lambda - 2.0 * state[0];
  out[2 * 3 + 1] = -c.nu;
  out[2 * 3 + 2] = -1.0;
}

std::vector<double> scaled_from_unscaled(const std::vector<double>& x_state, double p) {
  if (p == 0.0) throw DomainError("scaled_from_unscaled: p must be nonzero");
  if (x_state.size() != 3) throw DomainError("scaled_from_unscaled: state must be 3-dimensional");
  const double amp = 2.0 * p / 9.0;
  // tau = 3t: each tau-derivative contributes dt/dtau = 1/3.
  return {amp * x_state[0], amp * x_state[1] / 3.0, amp * x_state[2] / 9.0};
}

std::vector<double> unscaled_from_scaled(const std::vector<double>& scaled_state, double p) {
  if (p == 0.0) throw DomainError("unscaled_from_scaled: p must be nonzero");
  if (scaled_state.size() != 3) throw DomainError("unscaled_from_scaled: state must be 3-dimensional");
  const double amp = 9.0 / (2.0 * p);
  return {amp * scaled_state[0], amp * scaled_state[1] * 3.0, amp * scaled_state[2] * 9.0};
}

}  // namespace mapode
