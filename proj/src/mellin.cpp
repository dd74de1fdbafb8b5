#include "conecalc/mellin.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace conecalc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place unnormalized DFT: out_b = sum_k in_k exp(sign * 2 pi i b k / n).
void dft_in_place(std::vector<complex>& data, int sign) {
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  const int n = static_cast<int>(data.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buffer, buffer,
                            sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double max_abs_of(const std::vector<complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_resolution(const LogGrid& grid, double beta) {
  if (grid.spacing() > kMaxLogSpacing) {
    std::ostringstream os;
    os << "log grid spacing " << grid.spacing() << " exceeds " << kMaxLogSpacing;
    throw ResolutionError(os.str());
  }
  if (std::abs(beta) * grid.spacing() > kMaxWeightStep) {
    std::ostringstream os;
    os << "log grid spacing " << grid.spacing() << " too coarse for beta = "
       << beta << " (|beta| * ds must stay below " << kMaxWeightStep << ")";
    throw ResolutionError(os.str());
  }
}

// Trapezoid weight of tau sample m out of count.
double tau_weight(std::size_t m, std::size_t count) {
  return (m == 0 || m + 1 == count) ? 0.5 : 1.0;
}

bool is_dual_pair(const MellinFunction& F, const LogGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t expected = 2 * (n / 2) + 1;
  if (F.size() != expected) return false;
  const double product = F.tau_spacing() * grid.spacing() * static_cast<double>(n);
  return std::abs(product - kTwoPi) <= 1e-10 * kTwoPi;
}

double smoothstep(double x, int order) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // S_n(x) = x^{n+1} sum_{k=0}^{n} C(n+k, k) C(2n+1, n-k) (-x)^k
  const int n = order;
  double sum = 0.0;
  double binom_a = 1.0;  // C(n+k, k)
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom_a = binom_a * (n + k) / k;
    double binom_b = 1.0;  // C(2n+1, n-k)
    for (int i = 0; i < n - k; ++i) binom_b = binom_b * (2 * n + 1 - i) / (i + 1);
    sum += binom_a * binom_b * std::pow(-x, k);
  }
  return std::pow(x, n + 1) * sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grids and samples

LogGrid::LogGrid(double s_min, double s_max, std::size_t n_points)
    : s_min_(s_min), s_max_(s_max), n_(n_points), ds_(0.0) {
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !(s_min < s_max)) {
    throw InvalidArgument("LogGrid: need finite s_min < s_max");
  }
  if (n_points < 2) throw InvalidArgument("LogGrid: need at least 2 points");
  ds_ = (s_max - s_min) / static_cast<double>(n_points - 1);
}

LogGrid LogGrid::standard() { return LogGrid(-12.0, 6.0, 4096); }

double LogGrid::t(std::size_t k) const { return std::exp(s(k)); }

std::vector<double> LogGrid::s_values() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = s(k);
  return out;
}

std::vector<double> LogGrid::t_values() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = t(k);
  return out;
}

SampledFunction::SampledFunction(LogGrid g, std::vector<complex> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("SampledFunction: values length does not match grid");
  }
}

SampledFunction SampledFunction::zeros(const LogGrid& g) {
  return SampledFunction(g, std::vector<complex>(g.size(), complex{}));
}

SampledFunction SampledFunction::sample(const LogGrid& g,
                                        const std::function<complex(double)>& u) {
  std::vector<complex> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = u(g.t(k));
  return SampledFunction(g, std::move(v));
}

double SampledFunction::max_abs() const { return max_abs_of(values); }

MellinFunction::MellinFunction(WeightLine l, std::vector<double> tau_grid,
                               std::vector<complex> v)
    : line(l), tau(std::move(tau_grid)), values(std::move(v)) {
  if (tau.size() != values.size()) {
    throw InvalidArgument("MellinFunction: tau grid and values differ in length");
  }
  if (tau.size() < 2) throw InvalidArgument("MellinFunction: need at least 2 samples");
  const double dtau = (tau.back() - tau.front()) / static_cast<double>(tau.size() - 1);
  if (!(dtau > 0.0)) throw InvalidArgument("MellinFunction: tau grid must increase");
  const double scale = std::max(std::abs(tau.front()), std::abs(tau.back()));
  for (std::size_t m = 0; m + 1 < tau.size(); ++m) {
    if (std::abs(tau[m + 1] - tau[m] - dtau) > 1e-9 * dtau) {
      throw InvalidArgument("MellinFunction: tau grid must be uniform");
    }
    if (std::abs(tau[m] + tau[tau.size() - 1 - m]) > 1e-9 * scale) {
      throw InvalidArgument("MellinFunction: tau grid must be symmetric about 0");
    }
  }
}

double MellinFunction::tau_spacing() const {
  return (tau.back() - tau.front()) / static_cast<double>(tau.size() - 1);
}

double MellinFunction::max_abs() const { return max_abs_of(values); }

CutoffSpec::CutoffSpec(double plateau, double support, int smooth)
    : plateau_end(plateau), support_end(support), smoothness(smooth) {
  if (!(plateau > 0.0 && plateau < 1.0)) {
    throw InvalidArgument("CutoffSpec: plateau_end must lie in (0, 1)");
  }
  if (!(plateau < support)) {
    throw InvalidArgument("CutoffSpec: need plateau_end < support_end");
  }
  if (smooth < 1 || smooth > 12) {
    throw InvalidArgument("CutoffSpec: smoothness must lie in [1, 12]");
  }
}

double CutoffSpec::operator()(double t) const {
  if (t <= plateau_end) return 1.0;
  if (t >= support_end) return 0.0;
  return 1.0 - smoothstep((t - plateau_end) / (support_end - plateau_end), smoothness);
}

// ---------------------------------------------------------------------------
// Transforms

std::vector<double> dual_tau_grid(const LogGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  const double dtau = kTwoPi / (static_cast<double>(n) * grid.spacing());
  std::vector<double> tau(2 * half + 1);
  for (std::size_t m = 0; m < tau.size(); ++m) {
    tau[m] = (static_cast<double>(m) - static_cast<double>(half)) * dtau;
  }
  return tau;
}

MellinFunction mellin_forward(const SampledFunction& u, WeightLine line,
                              Diagnostics* diag) {
  const LogGrid& grid = u.grid;
  check_resolution(grid, line.beta);

  const std::size_t n = grid.size();
  std::vector<complex> weighted(n);
  for (std::size_t k = 0; k < n; ++k) {
    weighted[k] = std::exp(line.beta * grid.s(k)) * u.values[k];
  }
  const double vmax = max_abs_of(weighted);
  if (vmax > 0.0 && (std::abs(weighted.front()) > kSupportThreshold * vmax ||
                     std::abs(weighted.back()) > kSupportThreshold * vmax)) {
    std::ostringstream os;
    os << "mellin_forward: weighted samples on beta = " << line.beta
       << " have not decayed at the grid ends (support violation)";
    warn(diag, os.str());
  }

  dft_in_place(weighted, +1);

  std::vector<double> tau = dual_tau_grid(grid);
  const std::size_t half = n / 2;
  std::vector<complex> values(tau.size());
  for (std::size_t m = 0; m < tau.size(); ++m) {
    const long shift = static_cast<long>(m) - static_cast<long>(half);
    const std::size_t bin =
        static_cast<std::size_t>(((shift % static_cast<long>(n)) + static_cast<long>(n)) %
                                 static_cast<long>(n));
    values[m] = grid.spacing() * std::polar(1.0, tau[m] * grid.s_min()) * weighted[bin];
  }
  return MellinFunction(line, std::move(tau), std::move(values));
}

complex mellin_at(const SampledFunction& u, complex z) {
  complex sum{};
  for (std::size_t k = 0; k < u.size(); ++k) {
    sum += std::exp(z * u.grid.s(k)) * u.values[k];
  }
  return u.grid.spacing() * sum;
}

SampledFunction mellin_inverse(const MellinFunction& F, const LogGrid& grid,
                               Diagnostics* diag) {
  const double dtau = F.tau_spacing();
  const double period = kTwoPi / dtau;
  if (grid.s_max() - grid.s_min() > period * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "mellin_inverse: tau spacing " << dtau << " resolves an s-range of "
       << period << " but the grid spans " << grid.s_max() - grid.s_min();
    throw AliasingError(os.str());
  }
  const double fmax = F.max_abs();
  if (fmax > 0.0 && (std::abs(F.values.front()) > kSupportThreshold * fmax ||
                     std::abs(F.values.back()) > kSupportThreshold * fmax)) {
    warn(diag, "mellin_inverse: Mellin samples have not decayed at the tau-grid ends");
  }

  const double beta = F.line.beta;
  const std::size_t count = F.size();
  const std::size_t n = grid.size();
  const double scale = dtau / kTwoPi;
  std::vector<complex> out(n);

  if (is_dual_pair(F, grid)) {
    const std::size_t half = n / 2;
    std::vector<complex> bins(n, complex{});
    for (std::size_t m = 0; m < count; ++m) {
      const long shift = static_cast<long>(m) - static_cast<long>(half);
      const std::size_t bin = static_cast<std::size_t>(
          ((shift % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
      bins[bin] += tau_weight(m, count) * F.values[m] *
                   std::polar(1.0, -F.tau[m] * grid.s_min());
    }
    dft_in_place(bins, -1);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = scale * std::exp(-beta * grid.s(j)) * bins[j];
    }
    return SampledFunction(grid, std::move(out));
  }

  // Direct summation; the phase recurrence is re-seeded every block.
  constexpr std::size_t kReseed = 256;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = grid.s(j);
    const complex step = std::polar(1.0, -dtau * s);
    complex phase{};
    complex sum{};
    for (std::size_t m = 0; m < count; ++m) {
      if (m % kReseed == 0) phase = std::polar(1.0, -F.tau[m] * s);
      sum += tau_weight(m, count) * F.values[m] * phase;
      phase *= step;
    }
    out[j] = scale * std::exp(-beta * s) * sum;
  }
  return SampledFunction(grid, std::move(out));
}

// ---------------------------------------------------------------------------
// Model functions t^{-p} ln^k t omega(t)

complex log_power_principal_part(double p, int k, double plateau_end, complex z) {
  const complex w = z - p;
  const double log_a = std::log(plateau_end);
  const complex a_w = std::exp(w * log_a);
  complex sum{};
  double binom = 1.0;       // C(k, i)
  double factorial = 1.0;   // i!
  complex inv_power = 1.0 / w;  // w^{-(i+1)}
  for (int i = 0; i <= k; ++i) {
    if (i > 0) {
      binom = binom * (k - i + 1) / i;
      factorial *= i;
      inv_power /= w;
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    sum += binom * std::pow(log_a, k - i) * sign * factorial * inv_power;
  }
  return a_w * sum;
}

std::vector<complex> log_power_laurent(int k) {
  if (k < 0) throw InvalidArgument("log_power_laurent: k must be non-negative");
  std::vector<complex> laurent(static_cast<std::size_t>(k) + 1, complex{});
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  laurent[0] = (k % 2 == 0 ? 1.0 : -1.0) * factorial;
  return laurent;
}

complex mellin_log_power(double p, int k, const CutoffSpec& cutoff, complex z) {
  if (k < 0) throw InvalidArgument("mellin_log_power: k must be non-negative");
  const complex w = z - p;
  if (std::abs(w) < kNearPoleFloor) {
    throw NearPoleError("mellin_log_power: z is within the near-pole floor of p",
                        complex{p, 0.0}, log_power_laurent(k));
  }

  const complex principal = log_power_principal_part(p, k, cutoff.plateau_end, z);

  // Remainder \int_{ln a}^{ln b} e^{w s} s^k omega(e^s) ds (entire in z).
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& nodes = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double lo = std::log(cutoff.plateau_end);
  const double hi = std::log(cutoff.support_end);
  const double length = hi - lo;
  const auto panels = static_cast<std::size_t>(
      4 + std::ceil(length * (std::abs(w.imag()) + std::abs(w.real())) / 8.0));
  const double h = length / static_cast<double>(panels);
  auto integrand = [&](double s) {
    return std::exp(w * s) * std::pow(s, k) * cutoff(std::exp(s));
  };
  complex remainder{};
  for (std::size_t panel = 0; panel < panels; ++panel) {
    const double mid = lo + (static_cast<double>(panel) + 0.5) * h;
    complex local{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double offset = 0.5 * h * nodes[i];
      local += weights[i] * (integrand(mid - offset) + integrand(mid + offset));
    }
    remainder += 0.5 * h * local;
  }
  return principal + remainder;
}

// ---------------------------------------------------------------------------
// Fuchs derivative and pole diagnostics

SampledFunction apply_fuchs_derivative(const SampledFunction& u, Diagnostics* diag) {
  const std::size_t n = u.size();
  if (n < 5) throw InvalidArgument("apply_fuchs_derivative: need at least 5 samples");
  if (u.grid.spacing() > kMaxLogSpacing) {
    warn(diag, "apply_fuchs_derivative: log spacing is coarse for fourth-order differences");
  }
  const double inv = 1.0 / (12.0 * u.grid.spacing());
  const auto& f = u.values;
  std::vector<complex> d(n);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) * inv;
  }
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * inv;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * inv;
  for (auto& x : d) x = -x;
  return SampledFunction(u.grid, std::move(d));
}

double estimate_pole_order(const std::function<complex(complex)>& f, complex p,
                           double r_outer, double r_inner) {
  if (!(r_inner > 0.0 && r_inner < r_outer)) {
    throw InvalidArgument("estimate_pole_order: need 0 < r_inner < r_outer");
  }
  constexpr int kPoints = 32;
  auto mean_modulus = [&](double r) {
    double sum = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double angle = kTwoPi * (i + 0.25) / kPoints;
      sum += std::abs(f(p + std::polar(r, angle)));
    }
    return sum / kPoints;
  };
  return std::log(mean_modulus(r_inner) / mean_modulus(r_outer)) /
         std::log(r_outer / r_inner);
}

}  // namespace conecalc
