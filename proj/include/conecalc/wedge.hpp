#pragma once

// The planar wedge {0 < theta < alpha} with Dirichlet data on both edges.
// In polar coordinates t^2 Delta = (t d/dt)^2 + d^2/dtheta^2; separating
// variables gives the homogeneous solutions t^{j pi/alpha} sin(j pi theta/alpha).

#include <cstddef>
#include <vector>

#include "conecalc/errors.hpp"
#include "conecalc/mellin.hpp"

namespace conecalc {

inline constexpr int kDefaultWedgeModes = 16;
/// Weight lines closer than this to an exponent m pi/alpha are rejected.
inline constexpr double kWedgeLineFloor = 1e-6;

struct WedgeProblem {
  double alpha;
  int modes = kDefaultWedgeModes;
  LogGrid grid = LogGrid::standard();

  WedgeProblem(double opening, int mode_count = kDefaultWedgeModes, LogGrid radial = LogGrid::standard());

  /// m pi / alpha.
  double exponent(int m) const;
};

struct PolarDerivatives {
  double value = 0.0;
  double d_t = 0.0;
  double d_theta = 0.0;
  double d_tt = 0.0;
  double d_t_theta = 0.0;
  double d_theta_theta = 0.0;
};

/// t^{e} sin(|q| theta) with q = j pi / alpha and e = q + exponent_shift (the
/// shift only exists to build negative controls). The angular factor uses |q|
/// so that j = -1, alpha = pi/2 is t^{-2} sin(2 theta).
class SingularSolution {
 public:
  SingularSolution(double alpha, int j, double exponent_shift = 0.0);

  double alpha() const { return alpha_; }
  int j() const { return j_; }
  double angular_frequency() const { return q_; }
  double radial_exponent() const { return e_; }

  double operator()(double t, double theta) const;
  PolarDerivatives derivatives(double t, double theta) const;

 private:
  double alpha_;
  int j_;
  double q_;
  double e_;
};

SingularSolution singular_solution(double alpha, int j);

struct PolarPoint {
  double t;
  double theta;
};

struct ResidualReport {
  double max_abs = 0.0;
  /// max of |residual| / (t^{e} (1 + q^2)), the size of the two cancelling terms.
  double max_rel = 0.0;
};

/// ((t d/dt)^2 + d^2/dtheta^2) u with analytic derivatives.
ResidualReport wedge_residual(const SingularSolution& u, const std::vector<PolarPoint>& probes);
ResidualReport wedge_residual(double alpha, int j, const std::vector<PolarPoint>& probes);

/// The same operator by second-order central differences with step h in
/// ln t and in theta.
ResidualReport wedge_residual_fd(const SingularSolution& u, const std::vector<PolarPoint>& probes, double h);

/// Membership of t^{j pi/alpha} sin(j pi theta/alpha) in L^2(t dt dtheta) near 0.
bool l2_classification(double alpha, int j);

/// Per sine mode m = 1..f.size(): v_m = M^{-1}[M f_m / (z^2 - (m pi/alpha)^2)]
/// along Re z = beta, so that ((t d/dt)^2 - (m pi/alpha)^2) v_m = f_m. Results
/// live on problem.grid.
std::vector<SampledFunction> mellin_solve(const WedgeProblem& problem, const std::vector<SampledFunction>& f,
                                          double beta, Diagnostics* diag = nullptr);

/// sum_m v_m(t) sin(m pi theta / alpha) at grid index k.
double evaluate_modes(const WedgeProblem& problem, const std::vector<SampledFunction>& modes, std::size_t k,
                      double theta);

struct RasterRow {
  double t;
  double theta;
  double value;
};

/// Rows (t, theta, value) for every t and theta_l = l alpha / (n_theta - 1).
std::vector<RasterRow> polar_raster(const SingularSolution& u, const std::vector<double>& t, std::size_t n_theta);
std::vector<RasterRow> polar_raster(const WedgeProblem& problem, const std::vector<SampledFunction>& modes,
                                    std::size_t stride, std::size_t n_theta);

}  // namespace conecalc
