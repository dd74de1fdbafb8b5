#include "conecalc/cone_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conecalc {

namespace {

constexpr int kWarpCheckSamples = 257;

struct TableLookup {
  std::size_t i;  // left node
  double w;       // weight of the right node
};

TableLookup locate(const TabulatedWarp& tab, double t) {
  const auto& x = tab.t;
  if (t < x.front() || t > x.back()) {
    std::ostringstream msg;
    msg << "t = " << t << " outside tabulated range [" << x.front() << ", " << x.back() << "]";
    throw InvalidArgument(msg.str());
  }
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  i = std::min(i, x.size() - 2);
  return {i, (t - x[i]) / (x[i + 1] - x[i])};
}

// d/dt ln det h at the table nodes (second-order non-uniform differences).
std::vector<double> log_det_derivative(const TabulatedWarp& tab) {
  const auto& x = tab.t;
  const std::size_t m = x.size();
  std::vector<double> f(m), d(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = std::log(tab.det_h[i]);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  auto one_sided = [&](std::size_t a, std::size_t b, std::size_t c) {
    double h1 = x[b] - x[a], h2 = x[c] - x[b];
    return -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[a] + (h1 + h2) / (h1 * h2) * f[b] -
           h1 / (h2 * (h1 + h2)) * f[c];
  };
  d[0] = one_sided(0, 1, 2);
  // mirror of the left formula for the right end
  {
    double h1 = x[m - 1] - x[m - 2], h2 = x[m - 2] - x[m - 3];
    d[m - 1] = (2 * h1 + h2) / (h1 * (h1 + h2)) * f[m - 1] - (h1 + h2) / (h1 * h2) * f[m - 2] +
               h1 / (h2 * (h1 + h2)) * f[m - 3];
  }
  return d;
}

void validate_warp(const Warp& warp, double t_max) {
  if (const auto* cw = std::get_if<ConformalWarp>(&warp)) {
    if (!cw->c || !cw->dc) throw InvalidArgument("conformal warp needs c and c'");
    if (std::abs(cw->c(0.0) - 1.0) > 1e-12) throw InvalidArgument("conformal warp requires c(0) = 1");
    for (int k = 0; k < kWarpCheckSamples; ++k) {
      double t = t_max * k / (kWarpCheckSamples - 1);
      if (!(cw->c(t) > 0.0)) throw MetricDegeneracyError("conformal factor c(t) must be positive on [0, T]");
    }
  } else if (const auto* tab = std::get_if<TabulatedWarp>(&warp)) {
    if (tab->t.size() < 3 || tab->t.size() != tab->det_h.size())
      throw InvalidArgument("tabulated det h needs at least 3 matching samples");
    if (tab->t.front() != 0.0) throw InvalidArgument("tabulated det h must start at t = 0");
    for (std::size_t i = 1; i < tab->t.size(); ++i)
      if (!(tab->t[i] > tab->t[i - 1])) throw InvalidArgument("tabulated t nodes must increase");
    for (double v : tab->det_h)
      if (!(v > 0.0)) throw MetricDegeneracyError("det h(t) must be positive");
    if (tab->t.back() < t_max) throw InvalidArgument("tabulated det h does not cover [0, T]");
  }
}

complex eval_principal(const CoefficientFamily& a, double t, double xi) {
  return a.principal ? a.principal(t, xi) : complex{0.0, 0.0};
}

}  // namespace

ConeMetric::ConeMetric(CrossSectionSpectrum spectrum, Warp warp, double t_max)
    : spectrum_(std::move(spectrum)), warp_(std::move(warp)), t_max_(t_max) {
  if (!(t_max_ > 0.0)) throw InvalidArgument("cone collar length T must be positive");
  validate_warp(warp_, t_max_);
}

void ConeMetric::set_base_operator(DiscretizedOperator op) {
  base_operator_ = std::make_shared<const DiscretizedOperator>(std::move(op));
}

double ConeMetric::conformal_factor(double t) const {
  if (const auto* cw = std::get_if<ConformalWarp>(&warp_)) return cw->c(t);
  if (const auto* tab = std::get_if<TabulatedWarp>(&warp_)) {
    auto [i, w] = locate(*tab, t);
    double det = (1 - w) * tab->det_h[i] + w * tab->det_h[i + 1];
    return std::pow(det / tab->det_h.front(), 1.0 / (2.0 * n()));
  }
  return 1.0;
}

double warp_factor_F(const ConeMetric& metric, double t) {
  const Warp& warp = metric.warp();
  if (const auto* cw = std::get_if<ConformalWarp>(&warp)) {
    if (t < 0.0 || t > metric.t_max()) throw InvalidArgument("t outside [0, T]");
    return metric.n() * t * cw->dc(t) / cw->c(t);
  }
  if (const auto* tab = std::get_if<TabulatedWarp>(&warp)) {
    auto [i, w] = locate(*tab, t);
    auto d = log_det_derivative(*tab);
    return 0.5 * t * ((1 - w) * d[i] + w * d[i + 1]);
  }
  return 0.0;
}

std::string to_string(ExponentSign s) {
  switch (s) {
    case ExponentSign::minus: return "minus";
    case ExponentSign::plus: return "plus";
    case ExponentSign::both: return "both";
  }
  return "?";
}

std::vector<double> SingularExponentSet::values() const {
  std::vector<double> v;
  v.reserve(exponents.size());
  for (const auto& e : exponents) v.push_back(e.q);
  return v;
}

bool SingularExponentSet::contains(double beta, double tol) const {
  return std::any_of(exponents.begin(), exponents.end(),
                     [&](const SingularExponent& e) { return std::abs(e.q - beta) <= tol; });
}

ConeOperator::ConeOperator(int mu, std::vector<CoefficientFamily> coefficients, int n, double t_max,
                           std::vector<double> mode_eigenvalues)
    : mu_(mu), coefficients_(std::move(coefficients)), n_(n), t_max_(t_max),
      mode_eigenvalues_(std::move(mode_eigenvalues)) {
  if (mu_ < 0) throw InvalidArgument("operator order must be non-negative");
  if (coefficients_.size() != static_cast<std::size_t>(mu_) + 1)
    throw InvalidArgument("need exactly mu + 1 coefficient families");
  for (int j = 0; j <= mu_; ++j) {
    const auto& a = coefficients_[static_cast<std::size_t>(j)];
    if (!a.on_mode) throw InvalidArgument("coefficient family without per-mode action");
    if (a.order < 0 || j + a.order > mu_)
      throw InvalidArgument("coefficient a_" + std::to_string(j) + " has order above mu - j");
  }
  if (!(t_max_ > 0.0)) throw InvalidArgument("collar length must be positive");
}

bool ConeOperator::t_independent() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](const CoefficientFamily& a) { return a.t_independent; });
}

ConeOperator ConeOperator::negated() const {
  std::vector<CoefficientFamily> neg;
  neg.reserve(coefficients_.size());
  for (const auto& a : coefficients_) {
    CoefficientFamily b = a;
    b.on_mode = [f = a.on_mode](double t, double l) { return -f(t, l); };
    if (a.principal) b.principal = [f = a.principal](double t, double xi) { return -f(t, xi); };
    if (a.affine_at_zero) b.affine_at_zero = std::pair{-a.affine_at_zero->first, -a.affine_at_zero->second};
    neg.push_back(std::move(b));
  }
  ConeOperator out(mu_, std::move(neg), n_, t_max_, mode_eigenvalues_);
  out.exact_exponents_ = exact_exponents_;
  out.base_operator_ = base_operator_;
  return out;
}

ConeOperator build_laplace_beltrami(const ConeMetric& metric) {
  const int n = metric.n();
  const bool straight = metric.is_straight();
  auto m = std::make_shared<const ConeMetric>(metric);

  CoefficientFamily a2;
  a2.order = 0;
  a2.on_mode = [](double, double) { return complex{1.0, 0.0}; };
  a2.principal = [](double, double) { return complex{1.0, 0.0}; };
  a2.affine_at_zero = std::pair{complex{1.0, 0.0}, complex{0.0, 0.0}};
  a2.t_independent = true;

  // a_1 is a multiplication operator: no degree-1 principal part.
  CoefficientFamily a1;
  a1.order = 0;
  if (straight) {
    a1.on_mode = [n](double, double) { return complex{-(n - 1.0), 0.0}; };
  } else {
    a1.on_mode = [m, n](double t, double) { return complex{-(n - 1.0 + warp_factor_F(*m, t)), 0.0}; };
  }
  a1.affine_at_zero = std::pair{complex{-(n - 1.0), 0.0}, complex{0.0, 0.0}};
  a1.t_independent = straight;

  CoefficientFamily a0;
  a0.order = 2;
  if (straight) {
    a0.on_mode = [](double, double lambda) { return complex{lambda, 0.0}; };
    a0.principal = [](double, double xi) { return complex{-xi * xi, 0.0}; };
  } else {
    a0.on_mode = [m](double t, double lambda) {
      double c = m->conformal_factor(t);
      return complex{lambda / (c * c), 0.0};
    };
    a0.principal = [m](double t, double xi) {
      double c = m->conformal_factor(t);
      return complex{-xi * xi / (c * c), 0.0};
    };
  }
  a0.affine_at_zero = std::pair{complex{0.0, 0.0}, complex{1.0, 0.0}};
  a0.t_independent = straight;

  ConeOperator op(2, {a0, a1, a2}, n, metric.t_max(), metric.spectrum().eigenvalues());
  const auto& spec = metric.spectrum();
  const int first = spec.closed() ? 0 : spec.first_index();
  const int J = first + static_cast<int>(spec.count()) - 1;
  if (spec.count() > 0) op.set_exact_exponents(singular_exponents(spec, J));
  if (metric.base_operator() != nullptr)
    op.set_base_operator(std::make_shared<const DiscretizedOperator>(*metric.base_operator()));
  return op;
}

complex principal_symbol(const ConeOperator& op, double t, double tau, double xi) {
  if (!(t > 0.0))
    throw InvalidArgument("principal symbol degenerates at t = 0; use rescaled_symbol");
  complex sum{0.0, 0.0};
  const complex w{0.0, -t * tau};
  complex wj{1.0, 0.0};
  for (int j = 0; j <= op.mu(); ++j) {
    sum += eval_principal(op.coefficient(j), t, xi) * wj;
    wj *= w;
  }
  return std::pow(t, -op.mu()) * sum;
}

complex rescaled_symbol(const ConeOperator& op, double t, double tau, double xi) {
  complex sum{0.0, 0.0};
  const complex w{0.0, -tau};
  complex wj{1.0, 0.0};
  for (int j = 0; j <= op.mu(); ++j) {
    sum += eval_principal(op.coefficient(j), t, xi) * wj;
    wj *= w;
  }
  return sum;
}

complex conormal_symbol(const ConeOperator& op, complex z, double lambda) {
  // Horner in z
  complex sum{0.0, 0.0};
  for (int j = op.mu(); j >= 0; --j) sum = sum * z + op.coefficient(j).on_mode(0.0, lambda);
  return sum;
}

std::vector<complex> conormal_symbol(const ConeOperator& op, complex z) {
  std::vector<complex> out;
  out.reserve(op.mode_eigenvalues().size());
  for (double l : op.mode_eigenvalues()) out.push_back(conormal_symbol(op, z, l));
  return out;
}

std::vector<complex> conormal_symbol_matrix(const ConeOperator& op, complex z) {
  const DiscretizedOperator* base = op.base_operator();
  if (base == nullptr) throw InvalidArgument("operator has no discretized base operator");
  complex c{0.0, 0.0}, s{0.0, 0.0};
  complex zj{1.0, 0.0};
  for (int j = 0; j <= op.mu(); ++j) {
    const auto& a = op.coefficient(j);
    if (!a.affine_at_zero) throw InvalidArgument("matrix form needs affine coefficients at t = 0");
    c += a.affine_at_zero->first * zj;
    s += a.affine_at_zero->second * zj;
    zj *= z;
  }
  const std::size_t N = base->size;
  std::vector<complex> m(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) m[i * N + k] = s * (*base)(i, k) + (i == k ? c : complex{});
  return m;
}

SingularExponentSet singular_exponents(const CrossSectionSpectrum& spectrum, int J) {
  const int n = spectrum.dimension();
  const int first = spectrum.closed() ? 0 : spectrum.first_index();
  if (J < first) throw InvalidArgument("need J >= " + std::to_string(first));
  const std::size_t needed = static_cast<std::size_t>(J - first + 1);
  if (spectrum.count() < needed) {
    std::ostringstream msg;
    msg << "spectrum has " << spectrum.count() << " distinct eigenvalues, " << needed << " requested";
    throw InvalidArgument(msg.str());
  }
  SingularExponentSet set;
  set.n = n;
  const double h = 0.5 * (n - 1);
  for (std::size_t pos = 0; pos < needed; ++pos) {
    const double lambda = spectrum.eigenvalue(pos);
    const int j = first + static_cast<int>(pos);
    const double disc = std::max(h * h - lambda, 0.0);
    if (disc <= 1e-15 * std::max(1.0, h * h)) {
      set.exponents.push_back({h, j, ExponentSign::both, 2});
      continue;
    }
    const double r = std::sqrt(disc);
    set.exponents.push_back({h - r, j, ExponentSign::minus, 1});
    set.exponents.push_back({h + r, j, ExponentSign::plus, 1});
  }
  std::sort(set.exponents.begin(), set.exponents.end(),
            [](const SingularExponent& a, const SingularExponent& b) {
              return a.q != b.q ? a.q < b.q : a.j < b.j;
            });
  return set;
}

SingularExponentSet singular_exponents(const ConeMetric& metric, int J) {
  return singular_exponents(metric.spectrum(), J);
}

std::vector<double> default_tau_probe() {
  constexpr int kCount = 801;
  std::vector<double> tau(kCount);
  for (int k = 0; k < kCount; ++k) {
    double x = -1.0 + 2.0 * k / (kCount - 1);
    tau[static_cast<std::size_t>(k)] = 50.0 * std::copysign(x * x, x);
  }
  tau[kCount / 2] = 0.0;
  return tau;
}

EllipticityReport is_elliptic_on_line(const ConeOperator& op, WeightLine line,
                                      const std::vector<double>& tau_probe, double tol) {
  if (tau_probe.empty()) throw InvalidArgument("empty tau probe");
  EllipticityReport rep;

  // (i): rescaled symbol on |(tau, xi)| = 1, xi >= 0, sampled t in [0, T]
  double rmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kRescaledTimeSamples; ++a) {
    double t = op.t_max() * a / (kRescaledTimeSamples - 1);
    for (int b = 0; b < kRescaledAngleSamples; ++b) {
      double th = M_PI * b / (kRescaledAngleSamples - 1);
      rmin = std::min(rmin, std::abs(rescaled_symbol(op, t, std::cos(th), std::sin(th))));
    }
  }
  rep.rescaled_margin = rmin;

  // (ii): conormal symbol on the probe; in matrix form the symbol is a
  // polynomial in a symmetric matrix, so its singular values are |p(mu_i)|
  // over the matrix eigenvalues mu_i.
  std::vector<double> modes = op.mode_eigenvalues();
  bool matrix_form = false;
  if (const DiscretizedOperator* base = op.base_operator()) {
    bool affine = std::all_of(op.coefficients().begin(), op.coefficients().end(),
                              [](const CoefficientFamily& c) { return c.affine_at_zero.has_value(); });
    if (affine) {
      modes = discretized_eigenvalues(*base);
      matrix_form = true;
    }
  }
  double mmin = std::numeric_limits<double>::infinity();
  for (double tau : tau_probe) {
    complex z = line.at(tau);
    for (double l : modes) {
      complex v;
      if (matrix_form) {
        complex c{}, s{}, zj{1.0, 0.0};
        for (int j = 0; j <= op.mu(); ++j) {
          c += op.coefficient(j).affine_at_zero->first * zj;
          s += op.coefficient(j).affine_at_zero->second * zj;
          zj *= z;
        }
        v = c + s * l;
      } else {
        v = conormal_symbol(op, z, l);
      }
      mmin = std::min(mmin, std::abs(v));
    }
  }
  rep.margin = mmin;

  bool conormal_ok;
  if (op.exact_exponents() && !matrix_form) {
    rep.decided_exactly = true;
    conormal_ok = !op.exact_exponents()->contains(line.beta);
  } else {
    conormal_ok = mmin > tol;
  }
  rep.elliptic = conormal_ok && rmin > tol;
  rep.inconclusive = mmin < 10.0 * tol || rmin < 10.0 * tol;
  return rep;
}

std::vector<GammaInterval> admissible_weight_intervals(const SingularExponentSet& exponents,
                                                       double gamma_lo, double gamma_hi, int n) {
  if (!(gamma_lo < gamma_hi)) throw InvalidArgument("empty gamma range");
  const double shift = 0.5 * (n + 1);
  std::vector<std::pair<double, double>> cuts;  // (gamma, q)
  for (const auto& e : exponents.exponents) {
    double g = shift - e.q;
    if (g > gamma_lo && g < gamma_hi) cuts.emplace_back(g, e.q);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](const auto& a, const auto& b) { return a.first == b.first; }),
             cuts.end());
  std::vector<GammaInterval> out;
  GammaInterval cur{gamma_lo, gamma_hi, std::nullopt, std::nullopt};
  for (const auto& [g, q] : cuts) {
    cur.hi = g;
    cur.bounded_hi = q;
    out.push_back(cur);
    cur = GammaInterval{g, gamma_hi, q, std::nullopt};
  }
  out.push_back(cur);
  return out;
}

PerModeFunction apply_cone_operator(const ConeOperator& op, const PerModeFunction& u, Diagnostics* diag) {
  PerModeFunction out;
  out.reserve(u.size());
  for (const auto& comp : u) {
    const LogGrid& g = comp.radial.grid;
    SampledFunction acc = SampledFunction::zeros(g);
    SampledFunction d = comp.radial;
    for (int j = 0; j <= op.mu(); ++j) {
      if (j > 0) d = apply_fuchs_derivative(d, diag);
      const auto& a = op.coefficient(j);
      for (std::size_t k = 0; k < g.size(); ++k) acc.values[k] += a.on_mode(g.t(k), comp.lambda) * d.values[k];
    }
    for (std::size_t k = 0; k < g.size(); ++k) acc.values[k] *= std::exp(-op.mu() * g.s(k));
    out.push_back({comp.lambda, std::move(acc)});
  }
  return out;
}

PerModeFunction apply_cone_operator_mellin(const ConeOperator& op, const PerModeFunction& u,
                                           WeightLine line, Diagnostics* diag) {
  if (!op.t_independent())
    throw InvalidArgument("Mellin route requires t-independent coefficients");
  PerModeFunction out;
  out.reserve(u.size());
  for (const auto& comp : u) {
    MellinFunction F = mellin_forward(comp.radial, line, diag);
    for (std::size_t m = 0; m < F.size(); ++m) F.values[m] *= conormal_symbol(op, line.at(F.tau[m]), comp.lambda);
    SampledFunction v = mellin_inverse(F, comp.radial.grid, diag);
    for (std::size_t k = 0; k < v.size(); ++k) v.values[k] *= std::exp(-op.mu() * v.grid.s(k));
    out.push_back({comp.lambda, std::move(v)});
  }
  return out;
}

complex apply_to_power(const ConeOperator& op, double lambda, double q, double t) {
  if (!(t > 0.0)) throw InvalidArgument("t must be positive");
  complex sum{0.0, 0.0};
  double qj = 1.0;
  for (int j = 0; j <= op.mu(); ++j) {
    sum += op.coefficient(j).on_mode(t, lambda) * qj;
    qj *= q;
  }
  return std::pow(t, -op.mu() - q) * sum;
}

}  // namespace conecalc
