#include "conecalc/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conecalc/cone_sobolev.hpp"

namespace conecalc {

namespace {

void check_angle(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0 * std::numbers::pi))
    throw InvalidArgument("wedge angle must lie in (0, 2 pi)");
}

// sin(m pi theta / alpha) with exact zeros on both edges
double sine_mode(double q, double theta, double alpha) {
  if (theta == 0.0 || theta == alpha) return 0.0;
  return std::sin(q * theta);
}

}  // namespace

WedgeProblem::WedgeProblem(double opening, int mode_count, LogGrid radial)
    : alpha(opening), modes(mode_count), grid(radial) {
  check_angle(alpha);
  if (modes < 1) throw InvalidArgument("need at least one wedge mode");
}

double WedgeProblem::exponent(int m) const { return m * std::numbers::pi / alpha; }

SingularSolution::SingularSolution(double alpha, int j, double exponent_shift)
    : alpha_(alpha), j_(j), q_(j * std::numbers::pi / alpha), e_(q_ + exponent_shift) {
  check_angle(alpha);
  if (j == 0) throw InvalidArgument("singular solutions need j != 0");
}

double SingularSolution::operator()(double t, double theta) const {
  if (!(t > 0.0)) throw InvalidArgument("t must be positive");
  return std::pow(t, e_) * sine_mode(std::abs(q_), theta, alpha_);
}

PolarDerivatives SingularSolution::derivatives(double t, double theta) const {
  if (!(t > 0.0)) throw InvalidArgument("t must be positive");
  const double k = std::abs(q_);
  const double r = std::pow(t, e_);
  const double s = sine_mode(k, theta, alpha_);
  const double c = std::cos(k * theta);
  PolarDerivatives d;
  d.value = r * s;
  d.d_t = e_ * r / t * s;
  d.d_tt = e_ * (e_ - 1.0) * r / (t * t) * s;
  d.d_theta = k * r * c;
  d.d_t_theta = e_ * k * r / t * c;
  d.d_theta_theta = -k * k * r * s;
  return d;
}

SingularSolution singular_solution(double alpha, int j) { return SingularSolution(alpha, j); }

ResidualReport wedge_residual(const SingularSolution& u, const std::vector<PolarPoint>& probes) {
  ResidualReport rep;
  const double q = u.angular_frequency();
  for (const auto& p : probes) {
    auto d = u.derivatives(p.t, p.theta);
    // (t d/dt)^2 = t^2 d_tt + t d_t
    double res = p.t * p.t * d.d_tt + p.t * d.d_t + d.d_theta_theta;
    double scale = std::pow(p.t, u.radial_exponent()) * (1.0 + q * q);
    rep.max_abs = std::max(rep.max_abs, std::abs(res));
    rep.max_rel = std::max(rep.max_rel, std::abs(res) / scale);
  }
  return rep;
}

ResidualReport wedge_residual(double alpha, int j, const std::vector<PolarPoint>& probes) {
  return wedge_residual(singular_solution(alpha, j), probes);
}

ResidualReport wedge_residual_fd(const SingularSolution& u, const std::vector<PolarPoint>& probes, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  ResidualReport rep;
  const double q = std::abs(u.angular_frequency());
  // evaluate off the edges too: the analytic continuation in theta is smooth
  auto val = [&](double s, double th) { return std::exp(u.radial_exponent() * s) * std::sin(q * th); };
  for (const auto& p : probes) {
    const double s = std::log(p.t);
    double ss = (val(s + h, p.theta) - 2.0 * val(s, p.theta) + val(s - h, p.theta)) / (h * h);
    double tt = (val(s, p.theta + h) - 2.0 * val(s, p.theta) + val(s, p.theta - h)) / (h * h);
    double res = ss + tt;
    double scale = std::pow(p.t, u.radial_exponent()) * (1.0 + q * q);
    rep.max_abs = std::max(rep.max_abs, std::abs(res));
    rep.max_rel = std::max(rep.max_rel, std::abs(res) / scale);
  }
  return rep;
}

bool l2_classification(double alpha, int j) {
  SingularSolution u(alpha, j);
  ModelFunction model;
  model.p_exp = -u.angular_frequency();
  return membership(model, SpaceParams{0, 0.0, 2.0, 1});
}

std::vector<SampledFunction> mellin_solve(const WedgeProblem& problem, const std::vector<SampledFunction>& f,
                                          double beta, Diagnostics* diag) {
  for (int m = 1; m <= problem.modes; ++m) {
    double q = problem.exponent(m);
    if (std::abs(std::abs(beta) - q) < kWedgeLineFloor) {
      std::ostringstream msg;
      msg << "weight line beta = " << beta << " lies on the exponent " << (beta < 0 ? -q : q) << " of mode " << m;
      throw ContourError(msg.str());
    }
  }
  if (f.size() > static_cast<std::size_t>(problem.modes))
    throw InvalidArgument("more right-hand side modes than the truncation M");
  std::vector<SampledFunction> out;
  out.reserve(f.size());
  const WeightLine line{beta};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = problem.exponent(static_cast<int>(i) + 1);
    MellinFunction F = mellin_forward(f[i], line, diag);
    for (std::size_t k = 0; k < F.size(); ++k) {
      complex z = line.at(F.tau[k]);
      F.values[k] /= z * z - q * q;
    }
    out.push_back(mellin_inverse(F, problem.grid, diag));
  }
  return out;
}

double evaluate_modes(const WedgeProblem& problem, const std::vector<SampledFunction>& modes, std::size_t k,
                      double theta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    sum += modes[i].values.at(k).real() * sine_mode(problem.exponent(static_cast<int>(i) + 1), theta, problem.alpha);
  return sum;
}

std::vector<RasterRow> polar_raster(const SingularSolution& u, const std::vector<double>& t, std::size_t n_theta) {
  if (n_theta < 2) throw InvalidArgument("raster needs at least two angles");
  std::vector<RasterRow> rows;
  rows.reserve(t.size() * n_theta);
  for (double tk : t)
    for (std::size_t l = 0; l < n_theta; ++l) {
      double th = l + 1 == n_theta ? u.alpha() : u.alpha() * static_cast<double>(l) / static_cast<double>(n_theta - 1);
      rows.push_back({tk, th, u(tk, th)});
    }
  return rows;
}

std::vector<RasterRow> polar_raster(const WedgeProblem& problem, const std::vector<SampledFunction>& modes,
                                    std::size_t stride, std::size_t n_theta) {
  if (n_theta < 2 || stride == 0) throw InvalidArgument("raster needs stride >= 1 and at least two angles");
  std::vector<RasterRow> rows;
  for (std::size_t k = 0; k < problem.grid.size(); k += stride)
    for (std::size_t l = 0; l < n_theta; ++l) {
      double th = l + 1 == n_theta ? problem.alpha
                                   : problem.alpha * static_cast<double>(l) / static_cast<double>(n_theta - 1);
      rows.push_back({problem.grid.t(k), th, evaluate_modes(problem, modes, k, th)});
    }
  return rows;
}

}  // namespace conecalc
