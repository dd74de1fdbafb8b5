#include "conecalc/cone_sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conecalc {

namespace {

double cross_section_volume(const CrossSectionSpectrum& cs) {
  switch (cs.geometry()) {
    case Geometry::circle: return 2.0 * std::numbers::pi;
    case Geometry::sphere: {
      double h = 0.5 * (cs.dimension() + 1);
      return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
    }
    default: break;
  }
  throw InvalidArgument("p != 2 norms need a circle or sphere cross-section");
}

// Density in s of the p-th power of the norm, summed over components and
// derivative orders j + a <= s.
std::vector<double> norm_density(const PerModeFunction& u, const SpaceParams& params,
                                 const CrossSectionSpectrum& cs, Diagnostics* diag) {
  params.validate();
  if (params.s < 0) throw InvalidArgument("numeric norms need s >= 0");
  if (u.empty()) return {};
  const bool l2 = params.p == 2.0;
  double x_factor = 1.0;
  if (!l2) {
    if (u.size() != 1 || std::abs(u.front().lambda) > 1e-12 || !cs.closed())
      throw InvalidArgument("p != 2 norms support a single lambda = 0 component only");
    x_factor = std::pow(cross_section_volume(cs), 1.0 - 0.5 * params.p);
  }
  const LogGrid& g = u.front().radial.grid;
  std::vector<double> density(g.size(), 0.0);
  const double w = params.critical_exponent();
  for (const auto& comp : u) {
    if (!(comp.radial.grid == g)) throw InvalidArgument("components must share one grid");
    SampledFunction d = comp.radial;
    for (int j = 0; j <= params.s; ++j) {
      // (t d/dt)^j = (-1)^j (-t d/dt)^j; the sign drops under |.|
      if (j > 0) d = apply_fuchs_derivative(d, diag);
      double spectral = 0.0;
      for (int a = 0; a + j <= params.s; ++a) spectral += std::pow(std::abs(comp.lambda), 0.5 * a * params.p);
      for (std::size_t k = 0; k < g.size(); ++k) {
        double v = std::exp(w * g.s(k)) * std::abs(d.values[k]);
        density[k] += x_factor * spectral * std::pow(v, params.p);
      }
    }
  }
  return density;
}

double trapezoid(const std::vector<double>& f, std::size_t lo, std::size_t hi, double h) {
  if (hi <= lo) return 0.0;
  double sum = 0.5 * (f[lo] + f[hi]);
  for (std::size_t k = lo + 1; k < hi; ++k) sum += f[k];
  return sum * h;
}

RefinementStudy study_from_density(const std::vector<double>& density, const LogGrid& g) {
  RefinementStudy out;
  const double h = g.spacing();
  const std::size_t top = g.size() - 1;
  for (double end : kRefinementEnds) {
    auto lo = static_cast<std::size_t>(std::llround((end - g.s_min()) / h));
    out.norms_p.push_back(trapezoid(density, lo, top, h));
  }
  // increments integrated directly on the added segments, so tiny tails are
  // not lost to cancellation between large partial sums
  std::vector<double> inc;
  for (std::size_t i = 1; i < std::size(kRefinementEnds); ++i) {
    auto lo = static_cast<std::size_t>(std::llround((kRefinementEnds[i] - g.s_min()) / h));
    auto hi = static_cast<std::size_t>(std::llround((kRefinementEnds[i - 1] - g.s_min()) / h));
    inc.push_back(trapezoid(density, lo, hi, h));
  }
  const double last = inc.back(), prev = inc[inc.size() - 2];
  if (prev == 0.0) {
    out.ratio = last == 0.0 ? 0.0 : INFINITY;
  } else {
    out.ratio = last / prev;
  }
  out.stable = std::isfinite(out.norms_p.back()) && out.ratio < 1.0 - 1e-6;
  return out;
}

}  // namespace

void SpaceParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must lie in (1, inf)");
  if (n < 1) throw InvalidArgument("cross-section dimension must be >= 1");
  if (!std::isfinite(gamma)) throw InvalidArgument("gamma must be finite");
}

SpaceParams SpaceParams::dual() const {
  validate();
  return {-s, -gamma, p / (p - 1.0), n};
}

double ModelFunction::radial(double t) const {
  if (!(t > 0.0)) return 0.0;
  double om = cutoff(t);
  if (om == 0.0) return 0.0;
  return std::pow(t, -p_exp) * std::pow(std::log(t), k) * om;
}

SampledFunction ModelFunction::sample(const LogGrid& grid) const {
  if (k < 0) throw InvalidArgument("log power must be >= 0");
  return SampledFunction::sample(grid, [this](double t) { return complex{radial(t), 0.0}; });
}

bool membership(const ModelFunction& model, const SpaceParams& params) {
  params.validate();
  return params.critical_exponent() - model.p_exp > 0.0;
}

double gamma_p(int n, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must lie in (1, inf)");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return (n + 1) * (0.5 - 1.0 / p);
}

const char* to_string(Embedding e) {
  switch (e) {
    case Embedding::none: return "none";
    case Embedding::continuous: return "continuous";
    case Embedding::compact: return "compact";
  }
  return "?";
}

Embedding embeds(const SpaceParams& a, const SpaceParams& b) {
  a.validate();
  b.validate();
  if (a.p != b.p || a.n != b.n) throw InvalidArgument("embeds: p and n must agree");
  if (a.s > b.s && a.gamma > b.gamma) return Embedding::compact;
  if (a.s >= b.s && a.gamma >= b.gamma) return Embedding::continuous;
  return Embedding::none;
}

double weighted_norm(const PerModeFunction& u, const SpaceParams& params,
                     const CrossSectionSpectrum& cross_section, Diagnostics* diag) {
  auto density = norm_density(u, params, cross_section, diag);
  if (density.empty()) return 0.0;
  const LogGrid& g = u.front().radial.grid;
  double dmax = *std::max_element(density.begin(), density.end());
  if (dmax > 0.0 && density.front() > kSupportThreshold * dmax)
    warn(diag, "weighted_norm: integrand has not decayed at the lower grid end");
  return std::pow(trapezoid(density, 0, g.size() - 1, g.spacing()), 1.0 / params.p);
}

LogGrid refinement_grid(const CutoffSpec& cutoff) {
  const double lo = kRefinementEnds[std::size(kRefinementEnds) - 1];
  const double top = std::log(cutoff.support_end) + 0.25;
  auto n = static_cast<std::size_t>(std::ceil((top - lo) / kRefinementSpacing)) + 1;
  return LogGrid(lo, lo + kRefinementSpacing * static_cast<double>(n - 1), n);
}

RefinementStudy refinement_study(const PerModeFunction& u, const SpaceParams& params,
                                 const CrossSectionSpectrum& cross_section) {
  if (u.empty()) throw InvalidArgument("refinement study of an empty function");
  const LogGrid& g = u.front().radial.grid;
  if (std::abs(g.spacing() - kRefinementSpacing) > 1e-12 ||
      std::abs(g.s_min() - kRefinementEnds[std::size(kRefinementEnds) - 1]) > 1e-12)
    throw InvalidArgument("refinement study needs the grid of refinement_grid()");
  return study_from_density(norm_density(u, params, cross_section, nullptr), g);
}

RefinementStudy refinement_study(const ModelFunction& model, const SpaceParams& params,
                                 const CrossSectionSpectrum& cross_section) {
  LogGrid g = refinement_grid(model.cutoff);
  PerModeFunction u{{cross_section.eigenvalue(model.mode), model.sample(g)}};
  return refinement_study(u, params, cross_section);
}

MappingReport mapping_check(const ConeOperator& op, const PerModeFunction& u, const SpaceParams& params,
                            const CrossSectionSpectrum& cross_section, Diagnostics* diag) {
  MappingReport rep;
  SpaceParams source{params.s + op.mu(), params.gamma + op.mu(), params.p, params.n};
  rep.norm_in = weighted_norm(u, source, cross_section, diag);
  rep.norm_out = weighted_norm(apply_cone_operator(op, u, diag), params, cross_section, diag);
  return rep;
}

MappingReport mapping_check(const ConeOperator& op, const ModelFunction& model, const SpaceParams& params,
                            const CrossSectionSpectrum& cross_section) {
  LogGrid g = refinement_grid(model.cutoff);
  PerModeFunction u{{cross_section.eigenvalue(model.mode), model.sample(g)}};
  SpaceParams source{params.s + op.mu(), params.gamma + op.mu(), params.p, params.n};
  PerModeFunction Au = apply_cone_operator(op, u);
  auto in = study_from_density(norm_density(u, source, cross_section, nullptr), g);
  auto out = study_from_density(norm_density(Au, params, cross_section, nullptr), g);
  MappingReport rep;
  rep.norm_in = std::pow(in.norms_p.back(), 1.0 / params.p);
  rep.norm_out = std::pow(out.norms_p.back(), 1.0 / params.p);
  rep.input_stable = in.stable;
  rep.output_stable = out.stable;
  return rep;
}

}  // namespace conecalc
