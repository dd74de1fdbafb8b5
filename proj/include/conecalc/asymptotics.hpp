#pragma once

// Contour shifts of the inverse Mellin transform
//
//   I_beta(t) = (1 / 2 pi i) \int_{Re z = beta} t^{-z} g(z) U(z) dz
//
// across poles of a meromorphic per-mode symbol g. For beta_from < beta_to,
// I_{beta_to} - I_{beta_from} = sum of Res_{w=p} t^{-w} g(w) U(w) over poles
// between the lines; each pole of order k contributes terms
// t^{-p} ln^l(t) with l <= k - 1.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "conecalc/errors.hpp"
#include "conecalc/mellin.hpp"

namespace conecalc {

using ComplexFunction = std::function<complex(complex)>;

struct Pole {
  complex location;
  /// laurent[i] is the coefficient of (z - location)^{-(order - i)}, i.e.
  /// (c_{-k}, ..., c_{-1}).
  std::vector<complex> laurent;

  int order() const { return static_cast<int>(laurent.size()); }
  /// c_{-i}, zero beyond the order.
  complex coefficient(int i) const;
};

struct MeromorphicSymbol {
  std::vector<Pole> poles;
  ComplexFunction evaluate;
  /// |g(beta + i tau)| = O(|tau|^{-decay_order}) uniformly on compact beta-sets.
  int decay_order = 0;

  complex operator()(complex z) const { return evaluate(z); }
};

struct AsymptoticTerm {
  complex p;
  int j = 0;
  complex coeff;
  int pole_order = 1;

  /// coeff * t^{-p} ln^j t
  complex operator()(double t) const;
};

/// 1 / (z^2 - (n - 1) z + lambda).
MeromorphicSymbol mode_parametrix(double lambda, int n);

inline constexpr double kCauchyRadius = 1e-2;
inline constexpr int kCauchyNodes = 256;
/// Lines closer than this to a pole are rejected.
inline constexpr double kLineFloor = 1e-9;

/// U^{(r)}(p) / r! from the trapezoidal Cauchy integral on |z - p| = radius.
complex cauchy_taylor_coefficient(const ComplexFunction& U, complex p, int r, double radius = kCauchyRadius,
                                  int nodes = kCauchyNodes);

/// (1 / 2 pi i) \oint f over |z - p| = radius.
complex numeric_residue(const ComplexFunction& f, complex p, double radius = kCauchyRadius,
                        int nodes = kCauchyNodes);

/// Terms of I_{beta_to} - I_{beta_from}, oriented: swapping the lines negates
/// every coefficient. Sorted by Re p, then j.
std::vector<AsymptoticTerm> residue_terms(const MeromorphicSymbol& g, const ComplexFunction& U, double beta_from,
                                          double beta_to);

complex evaluate_terms(const std::vector<AsymptoticTerm>& terms, double t);

struct ContourShiftReport {
  /// Max of |D - R| / |R| over points with |R| >= 1e-3 max |R|, where D is
  /// the numeric line difference and R the residue sum; max |D| / max |I|
  /// when there are no poles in the strip.
  double error = 0.0;
  std::vector<AsymptoticTerm> terms;
  std::vector<complex> difference;
  std::vector<complex> residue_sum;
};

/// The datum is U = M u; both line integrals use mellin_forward of u on its
/// grid and mellin_inverse onto check_grid.
ContourShiftReport contour_shift_check(const MeromorphicSymbol& g, const SampledFunction& u, double beta_from,
                                       double beta_to, const LogGrid& check_grid, Diagnostics* diag = nullptr);

/// z -> g(z - mu); poles move by +mu.
MeromorphicSymbol weight_shift_conjugation(const MeromorphicSymbol& g, double mu);

/// The lines ((n + 1)/2 - gamma, (n + 1)/2 - gamma + mu) bounding the strip
/// whose poles feed the singular terms of a parametrix of order mu.
std::pair<double, double> parametrix_strip(int n, double gamma, double mu);

}  // namespace conecalc
