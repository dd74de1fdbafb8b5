#include "conecalc/cross_section.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace conecalc {

namespace {

constexpr double kPi = std::numbers::pi;

struct QuadratureRule {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

// Composite 20-point Gauss-Legendre nodes on [lo, hi].
void composite_gauss(double lo, double hi, int panels, std::vector<double>& x,
                     std::vector<double>& w) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& nodes = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      x.push_back(mid - 0.5 * h * nodes[i]);
      w.push_back(0.5 * h * weights[i]);
      x.push_back(mid + 0.5 * h * nodes[i]);
      w.push_back(0.5 * h * weights[i]);
    }
  }
}

QuadratureRule module_quadrature(const CrossSectionSpectrum& spectrum,
                                 const DiscretizedOperator* op) {
  QuadratureRule rule;
  switch (spectrum.geometry()) {
    case Geometry::interval_dirichlet: {
      std::vector<double> x, w;
      composite_gauss(0.0, spectrum.length(), 64, x, w);
      for (std::size_t i = 0; i < x.size(); ++i) rule.points.push_back({x[i]});
      rule.weights = std::move(w);
      break;
    }
    case Geometry::circle: {
      constexpr int kPoints = 1024;
      for (int i = 0; i < kPoints; ++i) {
        rule.points.push_back({2.0 * kPi * i / kPoints});
        rule.weights.push_back(2.0 * kPi / kPoints);
      }
      break;
    }
    case Geometry::sphere: {
      if (spectrum.dimension() != 2) {
        throw InvalidArgument("eigenfunction quadrature: sphere supported for n = 2 only");
      }
      std::vector<double> x, w;
      composite_gauss(0.0, kPi, 32, x, w);
      constexpr int kAzimuth = 128;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (int k = 0; k < kAzimuth; ++k) {
          rule.points.push_back({x[i], 2.0 * kPi * k / kAzimuth});
          rule.weights.push_back(w[i] * std::sin(x[i]) * 2.0 * kPi / kAzimuth);
        }
      }
      break;
    }
    case Geometry::discretized: {
      if (op == nullptr) throw InvalidArgument("eigenfunction quadrature: missing nodes");
      for (std::size_t i = 0; i < op->size; ++i) rule.points.push_back({op->nodes[i]});
      rule.weights = op->weights;
      break;
    }
  }
  return rule;
}

double real_spherical_harmonic(int l, int copy, double polar, double azimuth) {
  if (copy == 0) return std::sph_legendre(l, 0, polar);
  const int m = (copy + 1) / 2;
  const double base = std::sqrt(2.0) * std::sph_legendre(l, m, polar);
  return (copy % 2 == 1) ? base * std::cos(m * azimuth) : base * std::sin(m * azimuth);
}

void check_point(CrossSectionPoint x, std::size_t needed) {
  if (x.size() < needed) throw InvalidArgument("eigenfunction: point has too few coordinates");
}

// Nodal eigenvectors with piecewise-linear interpolation between nodes.
struct NodalBasis {
  std::vector<std::vector<double>> columns;  // nodal values per (cluster, copy)
  std::vector<std::size_t> offsets;          // first column of each cluster
  std::vector<double> nodes;
  BoundaryCondition boundary;
  double length;

  double evaluate(std::size_t j, int copy, double theta) const {
    const auto& col = columns.at(offsets.at(j) + static_cast<std::size_t>(copy));
    const std::size_t n = nodes.size();
    if (boundary == BoundaryCondition::periodic) {
      const double h = length / static_cast<double>(n);
      double x = std::fmod(theta, length);
      if (x < 0) x += length;
      const double pos = x / h;
      const auto i = static_cast<std::size_t>(std::floor(pos)) % n;
      const double frac = pos - std::floor(pos);
      return (1.0 - frac) * col[i] + frac * col[(i + 1) % n];
    }
    // Dirichlet: homogeneous values at both ends of [0, length].
    const double h = length / static_cast<double>(n + 1);
    if (theta <= 0.0 || theta >= length) return 0.0;
    const double pos = theta / h;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    const double left = (i == 0) ? 0.0 : col[i - 1];
    const double right = (i >= n) ? 0.0 : col[i];
    return (1.0 - frac) * left + frac * right;
  }
};

bool is_dirichlet_tridiagonal(const DiscretizedOperator& op) {
  if (op.boundary != BoundaryCondition::dirichlet) return false;
  for (std::size_t i = 0; i < op.size; ++i) {
    for (std::size_t j = 0; j < op.size; ++j) {
      if ((i > j + 1 || j > i + 1) && op(i, j) != 0.0) return false;
    }
  }
  return true;
}

void check_symmetric(const DiscretizedOperator& op) {
  if (op.entries.size() != op.size * op.size) {
    throw InvalidArgument("DiscretizedOperator: entries do not form a square matrix");
  }
  double scale = 0.0;
  for (double v : op.entries) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < op.size; ++i) {
    for (std::size_t j = i + 1; j < op.size; ++j) {
      if (std::abs(op(i, j) - op(j, i)) > 1e-12 * std::max(scale, 1.0)) {
        throw InvalidArgument("DiscretizedOperator: matrix is not symmetric");
      }
    }
  }
}

}  // namespace

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::interval_dirichlet: return "interval-dirichlet";
    case Geometry::circle: return "circle";
    case Geometry::sphere: return "sphere";
    case Geometry::discretized: return "discretized";
  }
  return "unknown";
}

CrossSectionSpectrum::CrossSectionSpectrum(Geometry geometry, int dimension, double length,
                                           std::vector<double> eigenvalues,
                                           std::vector<int> multiplicities, int first_index,
                                           EigenfunctionEvaluator evaluator)
    : geometry_(geometry),
      dimension_(dimension),
      length_(length),
      eigenvalues_(std::move(eigenvalues)),
      multiplicities_(std::move(multiplicities)),
      first_index_(first_index),
      evaluator_(std::move(evaluator)) {
  if (eigenvalues_.size() != multiplicities_.size()) {
    throw InvalidArgument("CrossSectionSpectrum: eigenvalue/multiplicity length mismatch");
  }
  for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
    if (multiplicities_[j] < 1) {
      throw InvalidArgument("CrossSectionSpectrum: multiplicities must be positive");
    }
    if (j > 0 && !(eigenvalues_[j] < eigenvalues_[j - 1])) {
      throw InvalidArgument("CrossSectionSpectrum: eigenvalues must strictly decrease");
    }
  }
  if (geometry == Geometry::interval_dirichlet) boundary_ = BoundaryCondition::dirichlet;
}

double CrossSectionSpectrum::eigenfunction(std::size_t j, int copy, CrossSectionPoint x) const {
  if (!evaluator_) throw InvalidArgument("CrossSectionSpectrum: no eigenfunction evaluator");
  if (j >= count() || copy < 0 || copy >= multiplicities_[j]) {
    throw InvalidArgument("CrossSectionSpectrum: eigenfunction index out of range");
  }
  return evaluator_(j, copy, x);
}

DiscretizedOperator DiscretizedOperator::from_matrix(std::vector<double> entries,
                                                     std::size_t size) {
  DiscretizedOperator op;
  op.size = size;
  op.entries = std::move(entries);
  op.nodes.resize(size);
  op.weights.assign(size, 1.0);
  for (std::size_t i = 0; i < size; ++i) op.nodes[i] = static_cast<double>(i + 1);
  op.boundary = BoundaryCondition::dirichlet;
  op.length = static_cast<double>(size + 1);
  check_symmetric(op);
  return op;
}

// ---------------------------------------------------------------------------
// Analytic spectra

CrossSectionSpectrum interval_dirichlet_spectrum(double alpha, int J) {
  if (!(alpha > 0.0 && alpha < 2.0 * kPi)) {
    throw InvalidArgument("interval_dirichlet_spectrum: alpha must lie in (0, 2 pi)");
  }
  if (J < 1) throw InvalidArgument("interval_dirichlet_spectrum: J must be >= 1");
  std::vector<double> eig;
  for (int j = 1; j <= J; ++j) {
    const double k = j * kPi / alpha;
    eig.push_back(-k * k);
  }
  const double norm = std::sqrt(2.0 / alpha);
  auto evaluator = [alpha, norm](std::size_t j, int, CrossSectionPoint x) {
    check_point(x, 1);
    return norm * std::sin(static_cast<double>(j + 1) * kPi * x[0] / alpha);
  };
  return CrossSectionSpectrum(Geometry::interval_dirichlet, 1, alpha, std::move(eig),
                              std::vector<int>(static_cast<std::size_t>(J), 1), 1, evaluator);
}

CrossSectionSpectrum circle_spectrum(int J) {
  if (J < 0) throw InvalidArgument("circle_spectrum: J must be >= 0");
  std::vector<double> eig;
  std::vector<int> mult;
  for (int j = 0; j <= J; ++j) {
    eig.push_back(0.0 - static_cast<double>(j) * j);
    mult.push_back(j == 0 ? 1 : 2);
  }
  auto evaluator = [](std::size_t j, int copy, CrossSectionPoint x) {
    check_point(x, 1);
    if (j == 0) return 1.0 / std::sqrt(2.0 * kPi);
    const double arg = static_cast<double>(j) * x[0];
    return (copy == 0 ? std::cos(arg) : std::sin(arg)) / std::sqrt(kPi);
  };
  return CrossSectionSpectrum(Geometry::circle, 1, 2.0 * kPi, std::move(eig), std::move(mult), 0,
                              evaluator);
}

long spherical_harmonic_dimension(int n, int l) {
  if (n < 1 || l < 0) throw InvalidArgument("spherical_harmonic_dimension: need n >= 1, l >= 0");
  auto binom = [](long top, long k) -> long {
    if (k < 0 || top < k) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (top - k + i) / i;
    return r;
  };
  return binom(l + n, n) - binom(l + n - 2, n);
}

CrossSectionSpectrum sphere_spectrum(int n, int J) {
  if (n < 1) throw InvalidArgument("sphere_spectrum: n must be >= 1");
  if (J < 0) throw InvalidArgument("sphere_spectrum: J must be >= 0");
  if (n == 1) return circle_spectrum(J);
  std::vector<double> eig;
  std::vector<int> mult;
  for (int l = 0; l <= J; ++l) {
    eig.push_back(0.0 - static_cast<double>(l) * (l + n - 1));
    mult.push_back(static_cast<int>(spherical_harmonic_dimension(n, l)));
  }
  EigenfunctionEvaluator evaluator;
  if (n == 2) {
    evaluator = [](std::size_t l, int copy, CrossSectionPoint x) {
      check_point(x, 2);
      return real_spherical_harmonic(static_cast<int>(l), copy, x[0], x[1]);
    };
  }
  return CrossSectionSpectrum(Geometry::sphere, n, kPi, std::move(eig), std::move(mult), 0,
                              evaluator);
}

// ---------------------------------------------------------------------------
// Discretization

DiscretizedOperator sturm_liouville_discretize(const std::function<double(double)>& metric,
                                               double length, std::size_t N,
                                               BoundaryCondition boundary) {
  if (N < 16) throw InvalidArgument("sturm_liouville_discretize: need N >= 16");
  if (!(length > 0.0)) throw InvalidArgument("sturm_liouville_discretize: length must be > 0");

  const bool periodic = boundary == BoundaryCondition::periodic;
  const double h = periodic ? length / static_cast<double>(N) : length / static_cast<double>(N + 1);
  auto node = [&](std::size_t i) {
    return periodic ? static_cast<double>(i) * h : static_cast<double>(i + 1) * h;
  };

  auto checked = [&](double theta) {
    const double v = metric(theta);
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "sturm_liouville_discretize: metric coefficient " << v << " at theta = "
         << theta << " is not positive";
      throw MetricDegeneracyError(os.str());
    }
    return v;
  };

  DiscretizedOperator op;
  op.size = N;
  op.boundary = boundary;
  op.length = length;
  op.entries.assign(N * N, 0.0);
  op.nodes.resize(N);
  op.weights.resize(N);

  std::vector<double> root_h(N), quarter_h(N);
  for (std::size_t i = 0; i < N; ++i) {
    op.nodes[i] = node(i);
    const double v = checked(op.nodes[i]);
    root_h[i] = std::sqrt(v);
    quarter_h[i] = std::sqrt(root_h[i]);
    op.weights[i] = root_h[i] * h;
  }
  // Flux coefficient h^{-1/2} at the midpoint right of node i (and left of node 0).
  auto flux_right = [&](std::size_t i) { return 1.0 / std::sqrt(checked(op.nodes[i] + 0.5 * h)); };
  const double left_flux0 = periodic ? 0.0 : 1.0 / std::sqrt(checked(op.nodes[0] - 0.5 * h));

  const double inv_h2 = 1.0 / (h * h);
  std::vector<double> flux(N);
  for (std::size_t i = 0; i < N; ++i) flux[i] = flux_right(i);

  for (std::size_t i = 0; i < N; ++i) {
    const double k_right = flux[i];
    const double k_left = (i == 0) ? (periodic ? flux[N - 1] : left_flux0) : flux[i - 1];
    op.entries[i * N + i] = -(k_left + k_right) * inv_h2 / root_h[i];
    if (i + 1 < N || periodic) {
      const std::size_t j = (i + 1) % N;
      const double off = k_right * inv_h2 / (quarter_h[i] * quarter_h[j]);
      op.entries[i * N + j] += off;
      op.entries[j * N + i] += off;
    }
  }
  return op;
}

DiscretizedOperator sturm_liouville_discretize(const std::vector<double>& samples, double length,
                                               std::size_t N, BoundaryCondition boundary) {
  if (samples.size() < 2) {
    throw InvalidArgument("sturm_liouville_discretize: need at least 2 metric samples");
  }
  for (double v : samples) {
    if (!(v > 0.0)) throw MetricDegeneracyError("sturm_liouville_discretize: non-positive metric sample");
  }
  const double step = length / static_cast<double>(samples.size() - 1);
  auto interpolate = [&samples, step, length](double theta) {
    double x = theta;
    if (x < 0.0 || x > length) {
      x = std::fmod(x, length);
      if (x < 0.0) x += length;
    }
    const double pos = x / step;
    const auto i = std::min(static_cast<std::size_t>(std::floor(pos)), samples.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return (1.0 - frac) * samples[i] + frac * samples[i + 1];
  };
  return sturm_liouville_discretize(interpolate, length, N, boundary);
}

std::vector<double> discretized_eigenvalues(const DiscretizedOperator& op) {
  check_symmetric(op);
  const auto n = static_cast<Eigen::Index>(op.size);
  Eigen::VectorXd values;
  if (is_dirichlet_tridiagonal(op)) {
    Eigen::VectorXd diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = op(i, i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = op(i + 1, i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigen-solver failed");
    values = solver.eigenvalues();
  } else {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        op.entries.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(A), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigen-solver failed");
    values = solver.eigenvalues();
  }
  std::vector<double> out(values.data(), values.data() + values.size());
  std::reverse(out.begin(), out.end());
  return out;
}

CrossSectionSpectrum spectrum_from_matrix(const DiscretizedOperator& op, double tol_cluster) {
  check_symmetric(op);
  if (!(tol_cluster > 0.0)) throw InvalidArgument("spectrum_from_matrix: tol_cluster must be > 0");
  const auto n = static_cast<Eigen::Index>(op.size);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (is_dirichlet_tridiagonal(op)) {
    Eigen::VectorXd diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = op(i, i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = op(i + 1, i);
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        op.entries.data(), n, n);
    solver.compute(Eigen::MatrixXd(A), Eigen::ComputeEigenvectors);
  }
  if (solver.info() != Eigen::Success) throw NumericError("spectrum_from_matrix: eigen-solver failed");

  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  auto basis = std::make_shared<NodalBasis>();
  basis->nodes = op.nodes;
  basis->boundary = op.boundary;
  basis->length = op.length;

  std::vector<double> distinct;
  std::vector<int> mult;
  std::vector<double> cluster_sum;
  // Eigen sorts ascending; walk from the top of the spectrum down.
  for (Eigen::Index idx = n - 1; idx >= 0; --idx) {
    const double lambda = values(idx);
    const bool joins = !distinct.empty() &&
                       std::abs(lambda - distinct.back()) <=
                           tol_cluster * std::max(1.0, std::abs(lambda));
    if (!joins) {
      basis->offsets.push_back(basis->columns.size());
      cluster_sum.push_back(0.0);
      mult.push_back(0);
      distinct.push_back(lambda);
    }
    cluster_sum.back() += lambda;
    mult.back() += 1;
    std::vector<double> nodal(op.size);
    for (std::size_t i = 0; i < op.size; ++i) {
      nodal[i] = vectors(static_cast<Eigen::Index>(i), idx) / std::sqrt(op.weights[i]);
    }
    basis->columns.push_back(std::move(nodal));
  }
  for (std::size_t j = 0; j < distinct.size(); ++j) distinct[j] = cluster_sum[j] / mult[j];

  auto evaluator = [basis](std::size_t j, int copy, CrossSectionPoint x) {
    check_point(x, 1);
    return basis->evaluate(j, copy, x[0]);
  };
  const int first = op.boundary == BoundaryCondition::dirichlet ? 1 : 0;
  CrossSectionSpectrum spectrum(Geometry::discretized, 1, op.length, std::move(distinct),
                                std::move(mult), first, evaluator);
  spectrum.set_boundary(op.boundary);
  return spectrum;
}

namespace {

std::vector<double> gram_under(const CrossSectionSpectrum& spectrum, const QuadratureRule& rule,
                               std::size_t max_modes) {
  if (!spectrum.has_eigenfunctions()) {
    throw InvalidArgument("eigenfunction_gram: spectrum has no eigenfunction evaluator");
  }
  std::vector<std::pair<std::size_t, int>> modes;
  for (std::size_t j = 0; j < std::min(max_modes, spectrum.count()); ++j) {
    for (int c = 0; c < spectrum.multiplicity(j); ++c) modes.emplace_back(j, c);
  }
  const std::size_t m = modes.size();
  std::vector<std::vector<double>> table(m, std::vector<double>(rule.points.size()));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      table[a][q] = spectrum.eigenfunction(modes[a].first, modes[a].second, rule.points[q]);
    }
  }
  std::vector<double> gram(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) sum += rule.weights[q] * table[a][q] * table[b][q];
      gram[a * m + b] = sum;
      gram[b * m + a] = sum;
    }
  }
  return gram;
}

}  // namespace

std::vector<double> eigenfunction_gram(const CrossSectionSpectrum& spectrum, std::size_t max_modes) {
  if (spectrum.geometry() == Geometry::discretized) {
    throw InvalidArgument("eigenfunction_gram: discretized spectra need their operator's nodes");
  }
  return gram_under(spectrum, module_quadrature(spectrum, nullptr), max_modes);
}

std::vector<double> eigenfunction_gram(const CrossSectionSpectrum& spectrum,
                                       const DiscretizedOperator& op, std::size_t max_modes) {
  return gram_under(spectrum, module_quadrature(spectrum, &op), max_modes);
}

}  // namespace conecalc
