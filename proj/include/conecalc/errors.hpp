#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conecalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed parameters outside an operation's domain (usage error).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical operation could not deliver a trustworthy result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Log grid too coarse for the requested weight line.
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The tau grid of a Mellin function cannot represent the requested t-range.
class AliasingError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Cross-section metric coefficient is not strictly positive.
class MetricDegeneracyError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A weight line passes through (or too close to) a pole / singular exponent.
class ContourError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Evaluation point too close to a pole. Carries the Laurent principal part
/// at the pole instead of a value: laurent[i] is the coefficient of
/// (z - pole)^{-(order - i)}.
class NearPoleError : public NumericError {
 public:
  NearPoleError(const std::string& what, std::complex<double> pole,
                std::vector<std::complex<double>> laurent)
      : NumericError(what), pole_(pole), laurent_(std::move(laurent)) {}

  std::complex<double> pole() const { return pole_; }
  const std::vector<std::complex<double>>& laurent() const { return laurent_; }
  int order() const { return static_cast<int>(laurent_.size()); }

 private:
  std::complex<double> pole_;
  std::vector<std::complex<double>> laurent_;
};

/// Collects non-fatal warnings (resolution, support, decay) from an operation.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace conecalc
