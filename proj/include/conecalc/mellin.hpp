#pragma once

// Weighted Mellin transforms on logarithmic grids.
//
// Normalization: with t = e^s,
//
//   (M u)(beta + i tau) = \int e^{i tau s} (e^{beta s} u(e^s)) ds,
//
// so M restricted to Re z = beta is the Fourier transform of the weighted
// function v(s) = e^{beta s} u(e^s), and
//
//   u(t) = (1 / 2 pi i) \int_{Re z = beta} t^{-z} (M u)(z) dz
//        = (1 / 2 pi) e^{-beta s} \int e^{-i tau s} (M u)(beta + i tau) dtau.
//
// Plancherel with this convention: \int |M u(1/2 + i tau)|^2 dtau
// = 2 pi \int_0^inf |u(t)|^2 dt.
//
// Integrals in s are plain grid sums times ds (the trapezoidal rule for
// samples that have decayed at both ends); the tau grid of a forward
// transform is the discrete Fourier dual of the s grid, which makes forward
// followed by inverse on the same grid exact up to rounding. The inverse
// integral over tau uses trapezoidal weights.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "conecalc/errors.hpp"

namespace conecalc {

using complex = std::complex<double>;

/// Relative level below which grid-end samples count as zero.
inline constexpr double kSupportThreshold = 1e-12;
/// |z - p| below this floor makes mellin_log_power return Laurent data.
inline constexpr double kNearPoleFloor = 1e-6;
/// Largest admissible log spacing for any transform.
inline constexpr double kMaxLogSpacing = 0.25;
/// Largest admissible |beta| * spacing (growth of e^{beta s} per step).
inline constexpr double kMaxWeightStep = 0.5;

/// Uniform grid in s = ln t.
class LogGrid {
 public:
  LogGrid(double s_min, double s_max, std::size_t n_points);

  /// s in [-12, 6] with 4096 points, i.e. t in [6e-6, 400].
  static LogGrid standard();

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return ds_; }
  double s(std::size_t k) const { return s_min_ + static_cast<double>(k) * ds_; }
  double t(std::size_t k) const;

  std::vector<double> s_values() const;
  std::vector<double> t_values() const;

  bool operator==(const LogGrid& other) const = default;

 private:
  double s_min_;
  double s_max_;
  std::size_t n_;
  double ds_;
};

/// Samples u(e^{s_k}) on a log grid.
struct SampledFunction {
  LogGrid grid;
  std::vector<complex> values;

  SampledFunction(LogGrid g, std::vector<complex> v);

  static SampledFunction zeros(const LogGrid& g);
  static SampledFunction sample(const LogGrid& g,
                                const std::function<complex(double t)>& u);

  std::size_t size() const { return values.size(); }
  double max_abs() const;
};

/// The vertical line Re z = beta.
struct WeightLine {
  double beta = 0.5;

  /// Line of the weight gamma in dimension n: beta = (n + 1)/2 - gamma.
  static WeightLine from_gamma(double gamma, int n) {
    return WeightLine{0.5 * (n + 1) - gamma};
  }
  double gamma(int n) const { return 0.5 * (n + 1) - beta; }
  complex at(double tau) const { return {beta, tau}; }
};

/// Samples of a Mellin transform at z = beta + i tau_k.
struct MellinFunction {
  WeightLine line;
  std::vector<double> tau;
  std::vector<complex> values;

  /// Validates matching lengths and a uniform tau grid symmetric about 0.
  MellinFunction(WeightLine l, std::vector<double> tau_grid,
                 std::vector<complex> v);

  std::size_t size() const { return values.size(); }
  double tau_spacing() const;
  double max_abs() const;
};

/// Cut-off omega: 1 on (0, plateau_end], 0 on [support_end, inf), and the
/// polynomial smoothstep of degree 2 * smoothness + 1 in between (a C^smoothness
/// transition in t). Non-increasing with values in [0, 1].
struct CutoffSpec {
  double plateau_end = 0.5;
  double support_end = 1.0;
  int smoothness = 4;

  CutoffSpec() = default;
  CutoffSpec(double plateau, double support, int smooth = 4);

  double operator()(double t) const;
};

/// Symmetric dual tau grid of a log grid: tau_m = (m - K) * 2 pi / (N ds),
/// m = 0..2K, K = floor(N / 2).
std::vector<double> dual_tau_grid(const LogGrid& grid);

MellinFunction mellin_forward(const SampledFunction& u, WeightLine line,
                              Diagnostics* diag = nullptr);

/// Grid-sum value of \int t^z u(t) dt/t at an arbitrary complex z.
complex mellin_at(const SampledFunction& u, complex z);

/// Inverse transform along the line of F, evaluated on `grid`. Uses the FFT
/// when `grid` is the dual of F's tau grid and direct summation otherwise.
SampledFunction mellin_inverse(const MellinFunction& F, const LogGrid& grid,
                               Diagnostics* diag = nullptr);

/// M(t^{-p} ln^k(t) omega(t))(z): closed-form principal part
/// d^k/dz^k [a^{z-p} / (z-p)] with a = plateau_end, plus the entire remainder
/// \int_a^b t^{z-p} ln^k(t) omega(t) dt/t integrated numerically.
///
/// The pole at z = p has order k + 1 with the single Laurent coefficient
/// (-1)^k k! on (z - p)^{-(k+1)} (derivatives taken as d/dz, matching
/// M(ln t u) = d/dz M u). Throws NearPoleError carrying that Laurent data when
/// |z - p| < kNearPoleFloor.
complex mellin_log_power(double p, int k, const CutoffSpec& cutoff, complex z);

/// The closed-form part d^k/dw^k [a^w / w] at w = z - p.
complex log_power_principal_part(double p, int k, double plateau_end,
                                 complex z);

/// Laurent coefficients (c_{-(k+1)}, ..., c_{-1}) of mellin_log_power at z = p.
std::vector<complex> log_power_laurent(int k);

/// -t d/dt u = -d/ds u by fourth-order centered differences (one-sided
/// fourth-order stencils at the two ends of the grid).
SampledFunction apply_fuchs_derivative(const SampledFunction& u,
                                       Diagnostics* diag = nullptr);

/// Pole order of f at p from the log-log slope of the mean of |f| over
/// circles of shrinking radius. Returns the (non-rounded) slope estimate.
double estimate_pole_order(const std::function<complex(complex)>& f, complex p,
                           double r_outer = 1e-3, double r_inner = 1e-5);

}  // namespace conecalc
