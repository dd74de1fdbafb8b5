#pragma once

// Conically degenerate differential operators in Fuchs form
//
//   A = t^{-mu} sum_{j=0}^{mu} a_j(t) (-t d/dt)^j,
//
// represented per eigenmode of the cross-section Laplacian at t = 0: every
// coefficient a_j(t) acts on the lambda-eigenspace as a scalar a_j(t; lambda).
//
// Symbol conventions: the cotangent variable xi enters as its magnitude
// measured in h*(0); D_t = -i d/dt has symbol tau, so (-t d/dt)^j has symbol
// (-i t tau)^j and the cross-section Laplacian has principal symbol
// -|xi|^2_{h*(t)}. With these conventions the Laplace-Beltrami operator has
// principal symbol -t^{-2}(t^2 tau^2 + |xi|^2) and rescaled symbol
// -(tau^2 + |xi|^2); the positive operator -Delta_g has tau^2 + |xi|^2.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conecalc/cross_section.hpp"
#include "conecalc/errors.hpp"
#include "conecalc/mellin.hpp"

namespace conecalc {

/// h(t) = c(t)^2 h(0) with c(0) = 1, c > 0 on [0, t_max].
struct ConformalWarp {
  std::function<double(double)> c;
  std::function<double(double)> dc;
};

/// Tabulated det h(t) on increasing nodes t_0 = 0 < t_1 < ...; read as the
/// conformal family c(t)^{2n} = det h(t) / det h(0).
struct TabulatedWarp {
  std::vector<double> t;
  std::vector<double> det_h;
};

struct StraightCone {};

using Warp = std::variant<StraightCone, ConformalWarp, TabulatedWarp>;

/// g = dt^2 + t^2 h(t) on the collar [0, t_max] x X.
class ConeMetric {
 public:
  ConeMetric(CrossSectionSpectrum spectrum, Warp warp = StraightCone{}, double t_max = 1.0);

  static ConeMetric straight(CrossSectionSpectrum spectrum) { return ConeMetric(std::move(spectrum)); }

  int n() const { return spectrum_.dimension(); }
  double t_max() const { return t_max_; }
  const CrossSectionSpectrum& spectrum() const { return spectrum_; }
  const Warp& warp() const { return warp_; }
  bool is_straight() const { return std::holds_alternative<StraightCone>(warp_); }

  /// Optional matrix form of Delta_{h(0)} for discretized cross-sections.
  void set_base_operator(DiscretizedOperator op);
  const DiscretizedOperator* base_operator() const { return base_operator_.get(); }

  /// c(t) of the warp (1 for straight cones).
  double conformal_factor(double t) const;

 private:
  CrossSectionSpectrum spectrum_;
  Warp warp_;
  double t_max_;
  std::shared_ptr<const DiscretizedOperator> base_operator_;
};

/// F(t) = (1/2) t d/dt(det h(t)) / det h(t).
double warp_factor_F(const ConeMetric& metric, double t);

/// One coefficient family a_j(t) of a Fuchs-form operator.
struct CoefficientFamily {
  /// Differential order of a_j on the cross-section.
  int order = 0;
  /// a_j(t; lambda) on the lambda-eigenspace.
  std::function<complex(double t, double lambda)> on_mode;
  /// Principal symbol of degree mu - j of a_j at (t, |xi|); zero when order < mu - j.
  std::function<complex(double t, double xi)> principal;
  /// a_j(0; lambda) = constant + slope * lambda, when known (matrix forms).
  std::optional<std::pair<complex, complex>> affine_at_zero;
  bool t_independent = false;
};

enum class ExponentSign { minus, plus, both };

std::string to_string(ExponentSign s);

struct SingularExponent {
  double q = 0.0;
  int j = 0;
  ExponentSign sign = ExponentSign::plus;
  int order = 1;
};

/// Sorted ascending; q_j^+ = q_j^- merged into one entry of order 2.
struct SingularExponentSet {
  int n = 1;
  std::vector<SingularExponent> exponents;

  std::vector<double> values() const;
  bool contains(double beta, double tol = 1e-12) const;
};

class ConeOperator {
 public:
  ConeOperator(int mu, std::vector<CoefficientFamily> coefficients, int n, double t_max,
               std::vector<double> mode_eigenvalues);

  int mu() const { return mu_; }
  int n() const { return n_; }
  double t_max() const { return t_max_; }
  const std::vector<CoefficientFamily>& coefficients() const { return coefficients_; }
  const CoefficientFamily& coefficient(int j) const { return coefficients_.at(static_cast<std::size_t>(j)); }
  /// Distinct eigenvalues of Delta_{h(0)} the operator acts on.
  const std::vector<double>& mode_eigenvalues() const { return mode_eigenvalues_; }
  bool t_independent() const;

  /// Closed-form non-invertibility set of the conormal symbol, when known.
  const std::optional<SingularExponentSet>& exact_exponents() const { return exact_exponents_; }
  void set_exact_exponents(SingularExponentSet set) { exact_exponents_ = std::move(set); }

  void set_base_operator(std::shared_ptr<const DiscretizedOperator> op) { base_operator_ = std::move(op); }
  const DiscretizedOperator* base_operator() const { return base_operator_.get(); }

  /// -A (every coefficient negated; exponents unchanged).
  ConeOperator negated() const;

 private:
  int mu_;
  std::vector<CoefficientFamily> coefficients_;
  int n_;
  double t_max_;
  std::vector<double> mode_eigenvalues_;
  std::optional<SingularExponentSet> exact_exponents_;
  std::shared_ptr<const DiscretizedOperator> base_operator_;
};

/// Delta_g = t^{-2}((-t d/dt)^2 - (n - 1 + F(t))(-t d/dt) + Delta_{h(t)}), with
/// Delta_{h(t)} = c(t)^{-2} Delta_{h(0)} per mode.
ConeOperator build_laplace_beltrami(const ConeMetric& metric);

/// t^{-mu} sum_j sigma^{mu-j}(a_j)(t, xi) (-i t tau)^j; requires t > 0.
complex principal_symbol(const ConeOperator& op, double t, double tau, double xi);

/// sum_j sigma^{mu-j}(a_j)(t, xi) (-i tau)^j, defined up to t = 0.
complex rescaled_symbol(const ConeOperator& op, double t, double tau, double xi);

/// m(z; lambda) = sum_j a_j(0; lambda) z^j.
complex conormal_symbol(const ConeOperator& op, complex z, double lambda);

/// Per distinct eigenvalue of the operator's modes.
std::vector<complex> conormal_symbol(const ConeOperator& op, complex z);

/// Matrix form sum_j a_j(0; D) z^j with D the discretized Delta_{h(0)}
/// (row-major, size x size). Needs a base operator and affine coefficients.
std::vector<complex> conormal_symbol_matrix(const ConeOperator& op, complex z);

/// q_j^{+-} = (n-1)/2 +- sqrt(((n-1)/2)^2 - lambda_j) for the first J + 1
/// distinct eigenvalues (closed cross-sections, j = 0..J) or J eigenvalues
/// (cross-sections with boundary, j = 1..J).
SingularExponentSet singular_exponents(const ConeMetric& metric, int J);
SingularExponentSet singular_exponents(const CrossSectionSpectrum& spectrum, int J);

struct EllipticityReport {
  bool elliptic = false;
  /// min over the probe line and modes of |m(z; lambda)| (or smallest singular value).
  double margin = 0.0;
  /// min of |rescaled symbol| over sampled t in [0, T] and |(tau, xi)| = 1.
  double rescaled_margin = 0.0;
  bool decided_exactly = false;
  /// Margin below 10 * tol.
  bool inconclusive = false;
};

/// Default probe: 801 values of tau in [-50, 50], clustered quadratically at 0
/// and containing tau = 0.
std::vector<double> default_tau_probe();

inline constexpr int kRescaledTimeSamples = 17;
inline constexpr int kRescaledAngleSamples = 64;

EllipticityReport is_elliptic_on_line(const ConeOperator& op, WeightLine line,
                                      const std::vector<double>& tau_probe = default_tau_probe(),
                                      double tol = 1e-8);

struct GammaInterval {
  double lo = 0.0;
  double hi = 0.0;
  /// Exponents q bounding the interval at lo and hi (none at a range end).
  std::optional<double> bounded_lo;
  std::optional<double> bounded_hi;
};

/// Maximal open gamma-intervals inside (gamma_lo, gamma_hi) whose lines
/// beta = (n+1)/2 - gamma avoid every exponent.
std::vector<GammaInterval> admissible_weight_intervals(const SingularExponentSet& exponents,
                                                       double gamma_lo, double gamma_hi, int n);

/// One radial component of a function expanded in cross-section eigenmodes.
struct ModeComponent {
  double lambda = 0.0;
  SampledFunction radial;
};

using PerModeFunction = std::vector<ModeComponent>;

/// t^{-mu} sum_j a_j(t; lambda) (-t d/dt)^j u per component, with the Fuchs
/// derivative taken by finite differences.
PerModeFunction apply_cone_operator(const ConeOperator& op, const PerModeFunction& u,
                                    Diagnostics* diag = nullptr);

/// The same operator through the Mellin representation: forward transform on
/// `line`, multiply by sum_j a_j(0; lambda) z^j, inverse, weight by t^{-mu}.
/// Requires t-independent coefficients.
PerModeFunction apply_cone_operator_mellin(const ConeOperator& op, const PerModeFunction& u,
                                           WeightLine line, Diagnostics* diag = nullptr);

/// A applied to t^{-q} on the lambda-mode, analytically:
/// t^{-mu-q} sum_j a_j(t; lambda) q^j.
complex apply_to_power(const ConeOperator& op, double lambda, double q, double t);

}  // namespace conecalc
