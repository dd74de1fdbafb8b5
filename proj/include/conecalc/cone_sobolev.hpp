#pragma once

// Cone Sobolev spaces H^{s,gamma}_p near the tip, integer s only. A function
// belongs to the space when t^{(n+1)/2 - gamma} (t d/dt)^j d_x^alpha u lies in
// L^p(dx dt/t) for j + |alpha| <= s.
//
// Numeric norms use the collar only. Cross-section derivatives are realized
// spectrally: on the lambda-eigenspace the derivatives of total order a
// contribute |lambda|^{a/2} times the mode norm.

#include <cstddef>
#include <vector>

#include "conecalc/cone_operator.hpp"
#include "conecalc/cross_section.hpp"
#include "conecalc/mellin.hpp"

namespace conecalc {

struct SpaceParams {
  int s = 0;
  double gamma = 0.0;
  double p = 2.0;
  int n = 1;

  /// Throws InvalidArgument unless 1 < p < inf and n >= 1.
  void validate() const;
  /// (s, gamma, p) -> (-s, -gamma, p'), 1/p + 1/p' = 1.
  SpaceParams dual() const;
  /// (n + 1)/2 - gamma: the exponent a model t^{-p_exp} must stay below.
  double critical_exponent() const { return 0.5 * (n + 1) - gamma; }

  bool operator==(const SpaceParams&) const = default;
};

/// u(t, x) = t^{-p_exp} ln^k(t) phi(x) omega(t), phi an eigenfunction of the
/// distinct eigenvalue at position `mode`.
struct ModelFunction {
  double p_exp = 0.0;
  int k = 0;
  std::size_t mode = 0;
  CutoffSpec cutoff{};

  double radial(double t) const;
  SampledFunction sample(const LogGrid& grid) const;
};

/// True iff (n + 1)/2 - gamma - p_exp > 0, independent of s, k and p.
bool membership(const ModelFunction& model, const SpaceParams& params);

/// (n + 1)(1/2 - 1/p).
double gamma_p(int n, double p);

enum class Embedding { none, continuous, compact };

const char* to_string(Embedding e);

/// H^{s,gamma}_p into H^{s',gamma'}_p: compact if s > s' and gamma > gamma',
/// continuous if s >= s' and gamma >= gamma', none otherwise.
Embedding embeds(const SpaceParams& a, const SpaceParams& b);

/// Collar norm of u = sum over components of radial(t) phi_lambda(x). For
/// p = 2 the components are taken orthonormal in x; for p != 2 only a single
/// lambda = 0 component on a closed cross-section is supported (constant
/// eigenfunction, so the x-integral is |X|^{1 - p/2}).
double weighted_norm(const PerModeFunction& u, const SpaceParams& params,
                     const CrossSectionSpectrum& cross_section, Diagnostics* diag = nullptr);

/// Lower grid ends of the refinement study, all sharing one log spacing.
inline constexpr double kRefinementEnds[] = {-10.0, -20.0, -30.0, -40.0};
inline constexpr double kRefinementSpacing = 1.0 / 32.0;

struct RefinementStudy {
  /// p-th powers of the norm on the grids with lower ends kRefinementEnds.
  std::vector<double> norms_p;
  /// Ratio of the last two increments of norms_p.
  double ratio = 0.0;
  /// ratio < 1 - 1e-6: the increments shrink geometrically (Cauchy sequence).
  bool stable = false;
};

/// Samples the model on the widest refinement grid (upper end past the
/// cutoff support) and tracks the norm as the lower end recedes.
RefinementStudy refinement_study(const ModelFunction& model, const SpaceParams& params,
                                 const CrossSectionSpectrum& cross_section);

RefinementStudy refinement_study(const PerModeFunction& u_on_widest_grid, const SpaceParams& params,
                                 const CrossSectionSpectrum& cross_section);

/// Grid used by refinement_study for a cutoff.
LogGrid refinement_grid(const CutoffSpec& cutoff);

struct MappingReport {
  /// H^{s+mu, gamma+mu} norm of u.
  double norm_in = 0.0;
  /// H^{s, gamma} norm of A u.
  double norm_out = 0.0;
  bool input_stable = true;
  bool output_stable = true;
};

MappingReport mapping_check(const ConeOperator& op, const PerModeFunction& u, const SpaceParams& params,
                            const CrossSectionSpectrum& cross_section, Diagnostics* diag = nullptr);

/// Model-function form: norms on the widest refinement grid plus refinement
/// stability of input and output.
MappingReport mapping_check(const ConeOperator& op, const ModelFunction& model, const SpaceParams& params,
                            const CrossSectionSpectrum& cross_section);

}  // namespace conecalc
