#pragma once

#include <span>
#include <vector>

#include "mapode/maps.hpp"
#include "mapode/rational.hpp"

namespace mapode {

// The order-N ODE sum_{j=0..N} x^(j)/j! = f(x) as a first-order system in
// xi_{k+1} = x^(k). The last state equation is pre-multiplied by N!, so its
// coefficients N!/j! are exact integers (orders up to 20).
struct TruncatedSystem {
  MapSpec map;
  int order;
  std::vector<Rational> taylor_coeffs;   // [1/0!, 1/1!, ..., 1/N!]
  std::vector<double> scaled_coeffs;     // N!/j! for j = 0..N-1
  double n_factorial;                    // N!
};

TruncatedSystem truncate(const MapSpec& m, int order);

// dxi/dt; out and state are N-vectors. Overflow is left to the integrator's
// divergence detection, not treated as an error here.
void vector_field(const TruncatedSystem& s, std::span<const double> state,
                  std::span<double> out);
std::vector<double> vector_field(const TruncatedSystem& s, const std::vector<double>& state);

// Jacobian of the truncated field at `state`, row-major N x N: companion
// structure with N!(f'(xi_1) - 1) and -N!/j! in the bottom row.
void vector_field_jacobian(const TruncatedSystem& s, std::span<const double> state,
                           std::span<double> out_row_major);

// Linearization about a reference point x*: dxi/dt = M xi + v with
// alpha = 1 - f'(x*), beta = f(x*) - x*, M the companion matrix of the
// characteristic polynomial and v = (0, ..., 0, beta N!).
struct LinearizedSystem {
  double alpha;
  double beta;
  double ref_point;
  int order;
  std::vector<double> companion;  // row-major order x order
  std::vector<double> inhomogeneous;
};

LinearizedSystem linearize(const TruncatedSystem& s, double x_star);

void linear_field(const LinearizedSystem& ls, std::span<const double> state,
                  std::span<double> out);

// Scaled form of the order-3 logistic truncation:
// X''' + X'' + nu X' - lambda X + X^2 = 0.
struct ScaledCubic {
  double nu;
  double lambda;
};

// nu = 2/3, lambda = 2(p-1)/9.
ScaledCubic to_scaled(double p);

void scaled_vector_field(const ScaledCubic& c, std::span<const double> state,
                         std::span<double> out);
std::vector<double> scaled_vector_field(const ScaledCubic& c, const std::vector<double>& state);
void scaled_vector_field_jacobian(const ScaledCubic& c, std::span<const double> state,
                                  std::span<double> out_row_major);

// State transform between the unscaled order-3 logistic system and the
// scaled cubic: X = (2p/9) x with tau = 3t, so the k-th tau-derivative
// picks up a factor 3^-k.
std::vector<double> scaled_from_unscaled(const std::vector<double>& x_state, double p);
std::vector<double> unscaled_from_scaled(const std::vector<double>& scaled_state, double p);

}  // namespace mapode
