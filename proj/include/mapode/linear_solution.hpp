#pragma once

#include <complex>
#include <vector>

#include "mapode/embedding.hpp"
#include "mapode/smallmat.hpp"

namespace mapode {

// Diagonalization of the companion matrix: eigenvalues from a QR eigensolver,
// eigenvectors analytically as Vandermonde columns (1, mu, ..., mu^{N-1})
// scaled to unit max-norm.
struct EigenSolution {
  std::vector<std::complex<double>> eigenvalues;
  smallmat::CMat similarity;  // S, columns are eigenvectors
  smallmat::CMat s_inverse;
  double condition = 0.0;  // 1-norm condition estimate of S
};

// Throws DegenerateSpectrum when the characteristic polynomial has an exact
// multiple root (rational square-free test) or two computed eigenvalues lie
// closer than 1e-8.
EigenSolution eigendecompose(const LinearizedSystem& ls);

// xi(t) = S e^{Dt} S^-1 xi0 + S Diag((e^{mu t}-1)/mu) S^-1 v, with the
// |mu| < 1e-10 factor replaced by its limit t + mu t^2/2.
std::vector<double> propagate_closed(const LinearizedSystem& ls,
                                     const std::vector<double>& xi0, double t);

// Same contract via the scaling-and-squaring exponential of the augmented
// block matrix [[M, v], [0, 0]]; valid for degenerate spectra too.
std::vector<double> propagate_series(const LinearizedSystem& ls,
                                     const std::vector<double>& xi0, double t);

}  // namespace mapode
