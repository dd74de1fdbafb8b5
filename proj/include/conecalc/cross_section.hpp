#pragma once

// Spectra of the cross-section Laplace-Beltrami operator. Sign convention:
// the operator is negative semi-definite, eigenvalues are <= 0 and listed
// distinct and strictly decreasing (0 = lambda_0 > lambda_1 > ... for closed
// cross-sections).

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conecalc/errors.hpp"

namespace conecalc {

enum class Geometry { interval_dirichlet, circle, sphere, discretized };

std::string to_string(Geometry g);

enum class BoundaryCondition { dirichlet, periodic };

/// Point on the cross-section: interval/circle use x[0] = theta, S^2 uses
/// (polar angle, azimuth).
using CrossSectionPoint = std::span<const double>;

/// Eigenfunction evaluator: (distinct eigenvalue position, copy within the
/// eigenspace, point) -> value.
using EigenfunctionEvaluator =
    std::function<double(std::size_t, int, CrossSectionPoint)>;

class CrossSectionSpectrum {
 public:
  CrossSectionSpectrum(Geometry geometry, int dimension, double length,
                       std::vector<double> eigenvalues, std::vector<int> multiplicities,
                       int first_index, EigenfunctionEvaluator evaluator);

  Geometry geometry() const { return geometry_; }
  /// Dimension n of the cross-section.
  int dimension() const { return dimension_; }
  /// Interval opening angle or period of a one-dimensional cross-section.
  double length() const { return length_; }
  bool closed() const { return geometry_ != Geometry::interval_dirichlet &&
                               boundary_ != BoundaryCondition::dirichlet; }

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  std::size_t count() const { return eigenvalues_.size(); }
  double eigenvalue(std::size_t j) const { return eigenvalues_.at(j); }
  int multiplicity(std::size_t j) const { return multiplicities_.at(j); }

  /// Label of eigenvalues_[0] in the lambda_j numbering (0 closed, 1 interval).
  int first_index() const { return first_index_; }

  bool has_eigenfunctions() const { return static_cast<bool>(evaluator_); }
  double eigenfunction(std::size_t j, int copy, CrossSectionPoint x) const;

  /// For discretized spectra: boundary condition of the underlying operator.
  void set_boundary(BoundaryCondition b) { boundary_ = b; }
  BoundaryCondition boundary() const { return boundary_; }

 private:
  Geometry geometry_;
  int dimension_;
  double length_;
  std::vector<double> eigenvalues_;
  std::vector<int> multiplicities_;
  int first_index_;
  EigenfunctionEvaluator evaluator_;
  BoundaryCondition boundary_ = BoundaryCondition::periodic;
};

/// Symmetric discretization of a one-dimensional Laplace-Beltrami operator.
///
/// `entries` (row-major, size x size) is W^{1/2} L W^{-1/2} where L is the
/// finite-difference operator and W = diag(weights); eigenvectors y of the
/// matrix map to nodal eigenfunctions W^{-1/2} y, orthonormal under the
/// quadrature `weights`.
struct DiscretizedOperator {
  std::size_t size = 0;
  std::vector<double> entries;
  std::vector<double> nodes;
  std::vector<double> weights;
  BoundaryCondition boundary = BoundaryCondition::dirichlet;
  double length = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * size + j]; }

  /// Wraps a symmetric matrix with unit weights, nodes 1..size and Dirichlet ends.
  static DiscretizedOperator from_matrix(std::vector<double> entries, std::size_t size);
};

/// lambda_j = -(j pi / alpha)^2, j = 1..J, eigenfunctions sqrt(2/alpha) sin(j pi theta / alpha).
CrossSectionSpectrum interval_dirichlet_spectrum(double alpha, int J);

/// lambda_0 = 0, lambda_j = -j^2 (multiplicity 2) on the unit circle.
CrossSectionSpectrum circle_spectrum(int J);

/// lambda_l = -l (l + n - 1), l = 0..J, with the dimension of degree-l
/// spherical harmonics as multiplicity. Eigenfunctions for n <= 2 only;
/// n = 1 returns circle_spectrum(J).
CrossSectionSpectrum sphere_spectrum(int n, int J);

/// Dimension of the space of degree-l spherical harmonics on S^n.
long spherical_harmonic_dimension(int n, int l);

/// Discretizes (1/sqrt h) d/dtheta (h^{-1/2} d/dtheta) for the metric h(theta) dtheta^2
/// on [0, length]. Dirichlet: N interior nodes theta_i = i L/(N+1);
/// periodic: theta_i = i L / N, i = 0..N-1.
DiscretizedOperator sturm_liouville_discretize(const std::function<double(double)>& metric,
                                               double length, std::size_t N,
                                               BoundaryCondition boundary);

/// Same, with the metric given as samples on a uniform grid of the closed
/// domain [0, length] (including both end points), linearly interpolated.
DiscretizedOperator sturm_liouville_discretize(const std::vector<double>& metric_samples,
                                               double length, std::size_t N,
                                               BoundaryCondition boundary);

/// Full symmetric eigen-decomposition, eigenvalues clustered into distinct
/// values: consecutive sorted values closer than tol_cluster * max(1, |lambda|)
/// share a cluster.
CrossSectionSpectrum spectrum_from_matrix(const DiscretizedOperator& op,
                                          double tol_cluster = 1e-8);

/// All eigenvalues of the matrix in decreasing order (no eigenvectors).
std::vector<double> discretized_eigenvalues(const DiscretizedOperator& op);

/// Gram matrix (row-major) of all eigenfunctions (j, copy) of the spectrum,
/// j < max_modes, under the module quadrature of its geometry.
std::vector<double> eigenfunction_gram(const CrossSectionSpectrum& spectrum,
                                       std::size_t max_modes);
/// Gram matrix of a discretized spectrum under the node weights of `op`.
std::vector<double> eigenfunction_gram(const CrossSectionSpectrum& spectrum,
                                       const DiscretizedOperator& op, std::size_t max_modes);

}  // namespace conecalc
