#include "conecalc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace conecalc {

namespace {

constexpr double kLineDecayThreshold = 1e-10;
constexpr double kResidueFloor = 1e-3;
// e^{beta s} I_beta decays like e^{-d |s|} for a line at distance d from the
// nearest pole, so the periodic transform on a grid of length L wraps around
// at the level e^{-d L / 2}.
constexpr double kWrapWarning = 1e-6;

std::vector<complex> circle_samples(const ComplexFunction& f, complex p, double radius, int nodes,
                                    std::vector<complex>& units) {
  if (!(radius > 0.0) || nodes < 8) throw InvalidArgument("Cauchy circle needs radius > 0 and >= 8 nodes");
  units.resize(static_cast<std::size_t>(nodes));
  std::vector<complex> vals(units.size());
  for (int k = 0; k < nodes; ++k) {
    units[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / nodes);
    vals[static_cast<std::size_t>(k)] = f(p + radius * units[static_cast<std::size_t>(k)]);
  }
  return vals;
}

double factorial(int m) { return std::tgamma(m + 1.0); }

}  // namespace

complex Pole::coefficient(int i) const {
  if (i < 1 || i > order()) return {0.0, 0.0};
  return laurent[static_cast<std::size_t>(order() - i)];
}

complex AsymptoticTerm::operator()(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("t must be positive");
  const double L = std::log(t);
  return coeff * std::exp(-p * L) * std::pow(L, j);
}

MeromorphicSymbol mode_parametrix(double lambda, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const double h = 0.5 * (n - 1);
  const double disc = h * h - lambda;
  MeromorphicSymbol g;
  g.decay_order = 2;
  g.evaluate = [n, lambda](complex z) { return 1.0 / (z * z - (n - 1.0) * z + lambda); };
  if (disc < 0.0) {
    const double r = std::sqrt(-disc);
    const complex qp{h, r}, qm{h, -r};
    g.poles.push_back({qm, {1.0 / (qm - qp)}});
    g.poles.push_back({qp, {1.0 / (qp - qm)}});
  } else if (disc <= 1e-15 * std::max(1.0, h * h)) {
    g.poles.push_back({complex{h, 0.0}, {complex{1.0, 0.0}, complex{0.0, 0.0}}});
  } else {
    const double r = std::sqrt(disc);
    g.poles.push_back({complex{h - r, 0.0}, {complex{-1.0 / (2.0 * r), 0.0}}});
    g.poles.push_back({complex{h + r, 0.0}, {complex{1.0 / (2.0 * r), 0.0}}});
  }
  return g;
}

complex cauchy_taylor_coefficient(const ComplexFunction& U, complex p, int r, double radius, int nodes) {
  if (r < 0) throw InvalidArgument("Taylor index must be >= 0");
  std::vector<complex> units;
  auto vals = circle_samples(U, p, radius, nodes, units);
  complex sum{};
  for (std::size_t k = 0; k < vals.size(); ++k) sum += vals[k] * std::pow(std::conj(units[k]), r);
  return sum / (static_cast<double>(nodes) * std::pow(radius, r));
}

complex numeric_residue(const ComplexFunction& f, complex p, double radius, int nodes) {
  std::vector<complex> units;
  auto vals = circle_samples(f, p, radius, nodes, units);
  complex sum{};
  for (std::size_t k = 0; k < vals.size(); ++k) sum += vals[k] * units[k];
  return radius * sum / static_cast<double>(nodes);
}

std::vector<AsymptoticTerm> residue_terms(const MeromorphicSymbol& g, const ComplexFunction& U, double beta_from,
                                          double beta_to) {
  if (beta_from == beta_to) throw InvalidArgument("residue_terms needs two distinct lines");
  for (const auto& pole : g.poles) {
    for (double b : {beta_from, beta_to})
      if (std::abs(pole.location.real() - b) < kLineFloor) {
        std::ostringstream msg;
        msg << "pole at " << pole.location.real() << (pole.location.imag() < 0 ? "" : "+")
            << pole.location.imag() << "i lies on the line Re z = " << b;
        throw ContourError(msg.str());
      }
  }
  const double lo = std::min(beta_from, beta_to), hi = std::max(beta_from, beta_to);
  const double orient = beta_to > beta_from ? 1.0 : -1.0;
  std::vector<AsymptoticTerm> terms;
  for (const auto& pole : g.poles) {
    const double re = pole.location.real();
    if (!(re > lo && re < hi)) continue;
    const int k = pole.order();
    std::vector<complex> taylor(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) taylor[static_cast<std::size_t>(r)] = cauchy_taylor_coefficient(U, pole.location, r);
    for (int l = 0; l < k; ++l) {
      complex c{};
      for (int i = l + 1; i <= k; ++i) c += pole.coefficient(i) * taylor[static_cast<std::size_t>(i - 1 - l)];
      c *= orient * ((l % 2 == 0) ? 1.0 : -1.0) / factorial(l);
      terms.push_back({pole.location, l, c, k});
    }
  }
  std::sort(terms.begin(), terms.end(), [](const AsymptoticTerm& a, const AsymptoticTerm& b) {
    if (a.p.real() != b.p.real()) return a.p.real() < b.p.real();
    if (a.p.imag() != b.p.imag()) return a.p.imag() < b.p.imag();
    return a.j < b.j;
  });
  return terms;
}

complex evaluate_terms(const std::vector<AsymptoticTerm>& terms, double t) {
  complex sum{};
  for (const auto& term : terms) sum += term(t);
  return sum;
}

ContourShiftReport contour_shift_check(const MeromorphicSymbol& g, const SampledFunction& u, double beta_from,
                                       double beta_to, const LogGrid& check_grid, Diagnostics* diag) {
  ContourShiftReport rep;
  ComplexFunction U = [&u](complex z) { return mellin_at(u, z); };
  rep.terms = residue_terms(g, U, beta_from, beta_to);
  const double length = u.grid.s_max() - u.grid.s_min();
  for (double beta : {beta_from, beta_to}) {
    double d = INFINITY;
    for (const auto& pole : g.poles) d = std::min(d, std::abs(pole.location.real() - beta));
    if (std::exp(-0.5 * d * length) > kWrapWarning) {
      std::ostringstream msg;
      msg << "line Re z = " << beta << " is " << d << " from a pole: wrap-around error about "
          << std::exp(-0.5 * d * length) << " on this grid";
      warn(diag, msg.str());
    }
  }

  auto line_integral = [&](double beta) {
    MellinFunction F = mellin_forward(u, WeightLine{beta}, diag);
    for (std::size_t m = 0; m < F.size(); ++m) F.values[m] *= g(WeightLine{beta}.at(F.tau[m]));
    const double fmax = F.max_abs();
    if (fmax > 0.0 && std::max(std::abs(F.values.front()), std::abs(F.values.back())) > kLineDecayThreshold * fmax) {
      std::ostringstream msg;
      msg << "t^{-z} g U has not decayed at the ends of the line Re z = " << beta;
      throw NumericError(msg.str());
    }
    return mellin_inverse(F, check_grid, diag);
  };
  SampledFunction a = line_integral(beta_from);
  SampledFunction b = line_integral(beta_to);

  const std::size_t n = check_grid.size();
  rep.difference.resize(n);
  rep.residue_sum.resize(n);
  double rmax = 0.0, dmax = 0.0, imax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    rep.difference[k] = b.values[k] - a.values[k];
    rep.residue_sum[k] = evaluate_terms(rep.terms, check_grid.t(k));
    rmax = std::max(rmax, std::abs(rep.residue_sum[k]));
    dmax = std::max(dmax, std::abs(rep.difference[k]));
    imax = std::max({imax, std::abs(a.values[k]), std::abs(b.values[k])});
  }
  if (rep.terms.empty() || rmax == 0.0) {
    rep.error = imax > 0.0 ? dmax / imax : dmax;
    return rep;
  }
  double err = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::abs(rep.residue_sum[k]);
    if (r < kResidueFloor * rmax) continue;
    err = std::max(err, std::abs(rep.difference[k] - rep.residue_sum[k]) / r);
  }
  rep.error = err;
  return rep;
}

MeromorphicSymbol weight_shift_conjugation(const MeromorphicSymbol& g, double mu) {
  MeromorphicSymbol out;
  out.decay_order = g.decay_order;
  for (const auto& pole : g.poles) out.poles.push_back({pole.location + mu, pole.laurent});
  out.evaluate = [f = g.evaluate, mu](complex z) { return f(z - mu); };
  return out;
}

std::pair<double, double> parametrix_strip(int n, double gamma, double mu) {
  const double beta = 0.5 * (n + 1) - gamma;
  return {beta, beta + mu};
}

}  // namespace conecalc
