#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mapode {

// Invalid input (bad arguments, out-of-domain values). CLI exit code 1.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to meet its contract. CLI exit code 2.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
  NumericError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

private:
  std::vector<double> residuals_;
};

// Companion matrix has (near-)coincident eigenvalues; the diagonalising
// similarity transform does not exist or is numerically meaningless.
class DegenerateSpectrum : public NumericError {
public:
  explicit DegenerateSpectrum(const std::string& what) : NumericError(what) {}
};

// Orbit classification saw too few maxima to decide; rerun with a longer window.
class InconclusiveWindow : public NumericError {
public:
  explicit InconclusiveWindow(const std::string& what) : NumericError(what) {}
};

// A trajectory left the divergence bound while an observable was being measured.
class TrajectoryDiverged : public NumericError {
public:
  TrajectoryDiverged(const std::string& what, double at_time)
      : NumericError(what), at_time_(at_time) {}
  double at_time() const { return at_time_; }

private:
  double at_time_ = 0.0;
};

// Config/flag text that does not parse. CLI exit code 64.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mapode
