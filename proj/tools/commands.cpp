#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace conecalc::cli {

namespace {

template <class T>
void read(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

void require_positive(double x, const char* name) {
  require(std::isfinite(x) && x > 0.0, std::string(name) + " must be positive");
}

void require_geometry(const std::string& g) {
  require(g == "wedge" || g == "circle" || g == "sphere", "geometry must be wedge, circle or sphere");
}

CrossSectionSpectrum make_spectrum(const std::string& geometry, double angle, int sphere, int modes) {
  if (geometry == "wedge") return interval_dirichlet_spectrum(angle, modes);
  if (geometry == "circle") return circle_spectrum(modes);
  return sphere_spectrum(sphere, modes);
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

std::string fmt(double x) { return format_double(x); }

json warnings_json(const Diagnostics& diag) { return diag.warnings; }

TabulatedWarp read_warp_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open warp file " + path);
  TabulatedWarp warp;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
    try {
      double t = std::stod(a), d = std::stod(b);
      warp.t.push_back(t);
      warp.det_h.push_back(d);
    } catch (const std::exception&) {
      continue;  // header
    }
  }
  require(warp.t.size() >= 3, "warp file needs at least 3 rows t,det_h");
  return warp;
}

/// exp(-(ln t - s0)^2 / (2 sigma^2)) and its closed-form Mellin transform.
struct LogGaussian {
  double s0, sigma;
  double operator()(double t) const {
    double x = std::log(t) - s0;
    return std::exp(-x * x / (2 * sigma * sigma));
  }
  complex mellin(complex z) const {
    return sigma * std::sqrt(2 * std::numbers::pi) * std::exp(z * s0 + z * z * sigma * sigma / 2.0);
  }
};

double rel_inf(const std::vector<complex>& a, const std::vector<complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

void check_tolerance(double value, double tol, const std::string& what) {
  if (!(value <= tol)) {
    std::ostringstream msg;
    msg << what << " " << value << " exceeds tolerance " << tol;
    throw NumericError(msg.str());
  }
}

}  // namespace

// ---- configs ---------------------------------------------------------------

json to_json(const ExponentsConfig& c) {
  return {{"geometry", c.geometry}, {"wedge_angle", c.wedge_angle}, {"sphere", c.sphere},   {"modes", c.modes},
          {"gamma_min", c.gamma_min}, {"gamma_max", c.gamma_max},   {"warp_file", c.warp_file}};
}

json to_json(const WedgeConfig& c) {
  return {{"angle", c.angle},       {"j", c.j},           {"modes", c.modes},
          {"t_min", c.t_min},       {"t_max", c.t_max},   {"t_points", c.t_points},
          {"theta_points", c.theta_points}, {"fd_step", c.fd_step}, {"tol", c.tol}};
}

json to_json(const MellinConfig& c) {
  return {{"roundtrip", c.roundtrip}, {"beta", c.beta},     {"s_min", c.s_min},
          {"s_max", c.s_max},         {"points", c.points}, {"tol", c.tol}};
}

json to_json(const SobolevConfig& c) {
  return {{"mode", c.mode}, {"s", c.s}, {"gamma", c.gamma}, {"p", c.p}, {"n", c.n}, {"p_exp", c.p_exp}, {"k", c.k}};
}

json to_json(const AsymptoticsConfig& c) {
  return {{"lambda", c.lambda},     {"n", c.n},         {"from", c.from},           {"to", c.to},
          {"datum_s0", c.datum_s0}, {"datum_sigma", c.datum_sigma}, {"check", c.check}, {"s_min", c.s_min},
          {"s_max", c.s_max},       {"points", c.points}, {"tol", c.tol}};
}

json to_json(const SymbolConfig& c) {
  return {{"geometry", c.geometry}, {"wedge_angle", c.wedge_angle}, {"sphere", c.sphere}, {"modes", c.modes},
          {"negate", c.negate},     {"t", c.t},   {"tau", c.tau},   {"xi", c.xi},           {"z_re", c.z_re},
          {"z_im", c.z_im},         {"beta", c.beta}, {"tol", c.tol}};
}

void from_json(const json& j, ExponentsConfig& c) {
  read(j, "geometry", c.geometry);
  read(j, "wedge_angle", c.wedge_angle);
  read(j, "sphere", c.sphere);
  read(j, "modes", c.modes);
  read(j, "gamma_min", c.gamma_min);
  read(j, "gamma_max", c.gamma_max);
  read(j, "warp_file", c.warp_file);
}

void from_json(const json& j, WedgeConfig& c) {
  read(j, "angle", c.angle);
  read(j, "j", c.j);
  read(j, "modes", c.modes);
  read(j, "t_min", c.t_min);
  read(j, "t_max", c.t_max);
  read(j, "t_points", c.t_points);
  read(j, "theta_points", c.theta_points);
  read(j, "fd_step", c.fd_step);
  read(j, "tol", c.tol);
}

void from_json(const json& j, MellinConfig& c) {
  read(j, "roundtrip", c.roundtrip);
  read(j, "beta", c.beta);
  read(j, "s_min", c.s_min);
  read(j, "s_max", c.s_max);
  read(j, "points", c.points);
  read(j, "tol", c.tol);
}

void from_json(const json& j, SobolevConfig& c) {
  read(j, "mode", c.mode);
  read(j, "s", c.s);
  read(j, "gamma", c.gamma);
  read(j, "p", c.p);
  read(j, "n", c.n);
  read(j, "p_exp", c.p_exp);
  read(j, "k", c.k);
}

void from_json(const json& j, AsymptoticsConfig& c) {
  read(j, "lambda", c.lambda);
  read(j, "n", c.n);
  read(j, "from", c.from);
  read(j, "to", c.to);
  read(j, "datum_s0", c.datum_s0);
  read(j, "datum_sigma", c.datum_sigma);
  read(j, "check", c.check);
  read(j, "s_min", c.s_min);
  read(j, "s_max", c.s_max);
  read(j, "points", c.points);
  read(j, "tol", c.tol);
}

void from_json(const json& j, SymbolConfig& c) {
  read(j, "geometry", c.geometry);
  read(j, "wedge_angle", c.wedge_angle);
  read(j, "sphere", c.sphere);
  read(j, "modes", c.modes);
  read(j, "negate", c.negate);
  read(j, "t", c.t);
  read(j, "tau", c.tau);
  read(j, "xi", c.xi);
  read(j, "z_re", c.z_re);
  read(j, "z_im", c.z_im);
  read(j, "beta", c.beta);
  read(j, "tol", c.tol);
}

void validate(const ExponentsConfig& c) {
  require_geometry(c.geometry);
  if (c.geometry == "wedge") require_positive(c.wedge_angle, "wedge angle");
  if (c.geometry == "sphere") require(c.sphere >= 1, "sphere dimension must be >= 1");
  require(c.modes >= (c.geometry == "wedge" ? 1 : 0), "modes out of range");
  require(c.gamma_min < c.gamma_max, "gamma range must be increasing");
}

void validate(const WedgeConfig& c) {
  require_positive(parse_angle(c.angle), "angle");
  require(parse_angle(c.angle) <= 2 * std::numbers::pi, "angle must not exceed 2 pi");
  require(c.j != 0, "j must be nonzero");
  require(c.modes >= 1, "modes must be >= 1");
  require_positive(c.t_min, "t_min");
  require(c.t_max > c.t_min, "t_max must exceed t_min");
  require(c.t_points >= 2 && c.theta_points >= 2, "raster needs at least 2 points per axis");
  require_positive(c.fd_step, "fd_step");
  require_positive(c.tol, "tol");
}

void validate(const MellinConfig& c) {
  require(c.roundtrip == "gaussian" || c.roundtrip == "bump" || c.roundtrip == "cutoff",
          "roundtrip family must be gaussian, bump or cutoff");
  require(c.s_max > c.s_min, "s_max must exceed s_min");
  require(c.points >= 16, "points must be >= 16");
  require_positive(c.tol, "tol");
}

void validate(const SobolevConfig& c) {
  require(c.mode == "membership" || c.mode == "gamma_p", "sobolev mode must be membership or gamma_p");
  require(c.k >= 0, "k must be >= 0");
  require(c.s >= 0, "s must be >= 0");
  SpaceParams{c.s, c.gamma, c.p, c.n}.validate();
}

void validate(const AsymptoticsConfig& c) {
  require(c.n >= 1, "n must be >= 1");
  require(c.from != c.to, "from and to must differ");
  require_positive(c.datum_sigma, "datum_sigma");
  require(c.s_max > c.s_min, "s_max must exceed s_min");
  require(c.points >= 16, "points must be >= 16");
  require_positive(c.tol, "tol");
}

void validate(const SymbolConfig& c) {
  require_geometry(c.geometry);
  if (c.geometry == "wedge") require_positive(c.wedge_angle, "wedge angle");
  if (c.geometry == "sphere") require(c.sphere >= 1, "sphere dimension must be >= 1");
  require(c.modes >= 1, "modes must be >= 1");
  require(c.t >= 0.0, "t must be >= 0");
  require_positive(c.tol, "tol");
}

double parse_angle(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto number = [&](const std::string& part, double empty) {
    if (part.empty()) return empty;
    if (part == "-") return -empty;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == part.size(), "cannot parse angle '" + text + "'");
    return v;
  };
  auto at = s.find("pi");
  if (at == std::string::npos) return number(s, 0.0);
  std::string coeff = s.substr(0, at), rest = s.substr(at + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double value = number(coeff, 1.0) * std::numbers::pi;
  if (rest.empty()) return value;
  require(rest[0] == '/' && rest.size() > 1, "cannot parse angle '" + text + "'");
  double d = number(rest.substr(1), 0.0);
  require(d != 0.0, "angle denominator is zero");
  return value / d;
}

// ---- subcommands -----------------------------------------------------------

Output run(const ExponentsConfig& c) {
  validate(c);
  auto spectrum = make_spectrum(c.geometry, c.wedge_angle, c.sphere, c.modes);
  Output out;
  SingularExponentSet set;
  if (c.warp_file.empty()) {
    set = singular_exponents(spectrum, c.modes);
  } else {
    auto warp = read_warp_file(c.warp_file);
    const double t_max = warp.t.back();
    std::vector<double> nodes = warp.t;
    ConeMetric metric(spectrum, std::move(warp), t_max);
    set = singular_exponents(metric, c.modes);
    json F = json::array();
    for (double t : nodes) F.push_back(json::array({t, warp_factor_F(metric, t)}));
    out.result["warp_factor"] = F;
  }
  auto intervals = admissible_weight_intervals(set, c.gamma_min, c.gamma_max, set.n);
  json summary = exponents_to_json(set, intervals);
  for (auto& [k, v] : summary.items()) out.result[k] = v;
  out.csv = csv_line({"q", "j", "sign", "order"});
  for (const auto& e : set.exponents)
    out.csv += csv_line({fmt(e.q), std::to_string(e.j), to_string(e.sign), std::to_string(e.order)});
  return out;
}

Output run(const WedgeConfig& c) {
  validate(c);
  const double alpha = parse_angle(c.angle);
  SingularSolution u(alpha, c.j);
  std::vector<double> t(static_cast<std::size_t>(c.t_points));
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = c.t_min * std::pow(c.t_max / c.t_min, static_cast<double>(i) / static_cast<double>(t.size() - 1));
  auto raster = polar_raster(u, t, static_cast<std::size_t>(c.theta_points));

  Output out;
  json rows = json::array();
  std::vector<PolarPoint> points;
  double worst = 0.0;
  out.csv = csv_line({"t", "theta", "value", "residual"});
  for (const auto& r : raster) {
    double res = wedge_residual(u, {{r.t, r.theta}}).max_rel;
    worst = std::max(worst, res);
    points.push_back({r.t, r.theta});
    rows.push_back(json::array({r.t, r.theta, r.value, res}));
    out.csv += csv_line({fmt(r.t), fmt(r.theta), fmt(r.value), fmt(res)});
  }
  auto analytic = wedge_residual(u, points);
  auto fd = wedge_residual_fd(u, points, c.fd_step);
  out.result = {
      {"solution", {{"alpha", alpha}, {"j", c.j}, {"exponent", u.radial_exponent()}, {"l2", l2_classification(alpha, c.j)}}},
      {"residual", {{"max_abs", analytic.max_abs}, {"max_rel", analytic.max_rel}, {"fd_max_rel", fd.max_rel}, {"fd_step", c.fd_step}}},
      {"summary", wedge_summary_json(alpha, c.modes)},
      {"raster", {{"columns", json::array({"t", "theta", "value", "residual"})}, {"rows", rows}}},
  };
  check_tolerance(worst, c.tol, "wedge residual");
  return out;
}

Output run(const MellinConfig& c) {
  validate(c);
  LogGrid grid(c.s_min, c.s_max, static_cast<std::size_t>(c.points));
  LogGaussian gauss{-2.0, 0.6};
  CutoffSpec omega;
  std::function<double(double)> f;
  if (c.roundtrip == "gaussian") {
    f = gauss;
  } else if (c.roundtrip == "bump") {
    f = [](double t) {
      double x = (std::log(t) + 2.0) / 1.5;
      return std::abs(x) < 1 ? std::exp(-1.0 / (1 - x * x)) : 0.0;
    };
  } else {
    f = omega;
  }
  auto u = SampledFunction::sample(grid, [&](double t) { return complex(f(t)); });
  Diagnostics diag;
  auto F = mellin_forward(u, WeightLine{c.beta}, &diag);
  auto back = mellin_inverse(F, grid, &diag);
  const double err = rel_inf(back.values, u.values);
  Output out;
  out.result = {{"family", c.roundtrip}, {"beta", c.beta}, {"max_error", err}, {"tau_points", F.size()},
                {"warnings", warnings_json(diag)}};
  if (c.roundtrip == "gaussian") {
    std::vector<complex> exact(F.size());
    for (std::size_t m = 0; m < F.size(); ++m) exact[m] = gauss.mellin(F.line.at(F.tau[m]));
    out.result["transform_error"] = rel_inf(F.values, exact);
  }
  out.csv = to_csv(back);
  check_tolerance(err, c.tol, "round-trip error");
  if (!diag.empty()) throw NumericError("Mellin round trip: " + diag.warnings.front());
  return out;
}

Output run(const SobolevConfig& c) {
  validate(c);
  Output out;
  if (c.mode == "gamma_p") {
    const double g = gamma_p(c.n, c.p);
    out.result = {{"n", c.n}, {"p", c.p}, {"gamma_p", g}};
    out.csv = csv_line({"n", "p", "gamma_p"}) + csv_line({std::to_string(c.n), fmt(c.p), fmt(g)});
    return out;
  }
  SpaceParams params{c.s, c.gamma, c.p, c.n};
  ModelFunction model{c.p_exp, c.k, 0, {}};
  auto study = refinement_study(model, params, sphere_spectrum(c.n, 1));
  out.result = membership_to_json(model, params);
  out.result["refinement"] = {{"left_ends", kRefinementEnds}, {"norms_p", study.norms_p},
                              {"ratio", study.ratio}, {"stable", study.stable}};
  out.csv = csv_line({"left_end", "norm_p"});
  for (std::size_t i = 0; i < study.norms_p.size(); ++i) out.csv += csv_line({fmt(kRefinementEnds[i]), fmt(study.norms_p[i])});
  return out;
}

Output run(const AsymptoticsConfig& c) {
  validate(c);
  auto P = mode_parametrix(c.lambda, c.n);
  LogGaussian datum{c.datum_s0, c.datum_sigma};
  auto terms = residue_terms(P, [&](complex z) { return datum.mellin(z); }, c.from, c.to);
  Output out;
  out.result = terms_to_json(c.from, c.to, terms);
  json poles = json::array();
  for (const auto& p : P.poles) poles.push_back({{"location", complex_to_json(p.location)}, {"order", p.order()}});
  out.result["poles"] = poles;
  out.csv = csv_line({"p_re", "p_im", "j", "coeff_re", "coeff_im"});
  for (const auto& t : terms)
    out.csv += csv_line({fmt(t.p.real()), fmt(t.p.imag()), std::to_string(t.j), fmt(t.coeff.real()), fmt(t.coeff.imag())});
  if (c.check) {
    LogGrid grid(c.s_min, c.s_max, static_cast<std::size_t>(c.points));
    auto u = SampledFunction::sample(grid, [&](double t) { return complex(datum(t)); });
    Diagnostics diag;
    auto rep = contour_shift_check(P, u, std::min(c.from, c.to), std::max(c.from, c.to), LogGrid(-4, 3, 281), &diag);
    out.result["check"] = {{"error", rep.error}, {"warnings", warnings_json(diag)}};
    check_tolerance(rep.error, c.tol, "contour-shift error");
  }
  return out;
}

Output run(const SymbolConfig& c) {
  validate(c);
  auto spectrum = make_spectrum(c.geometry, c.wedge_angle, c.sphere, c.modes);
  auto op = build_laplace_beltrami(ConeMetric(spectrum));
  if (c.negate) op = op.negated();
  const complex z{c.z_re, c.z_im};
  auto conormal = conormal_symbol(op, z);
  json modes = json::array();
  Output out;
  out.csv = csv_line({"lambda", "re", "im"});
  for (std::size_t i = 0; i < conormal.size(); ++i) {
    const double lam = op.mode_eigenvalues()[i];
    modes.push_back({{"lambda", lam}, {"value", complex_to_json(conormal[i])}});
    out.csv += csv_line({fmt(lam), fmt(conormal[i].real()), fmt(conormal[i].imag())});
  }
  auto ell = is_elliptic_on_line(op, WeightLine{c.beta}, default_tau_probe(), c.tol);
  out.result = {
      {"operator", c.negate ? "-laplace_beltrami" : "laplace_beltrami"},
      {"n", op.n()},
      {"principal", complex_to_json(principal_symbol(op, c.t, c.tau, c.xi))},
      {"rescaled", complex_to_json(rescaled_symbol(op, c.t, c.tau, c.xi))},
      {"conormal", {{"z", complex_to_json(z)}, {"modes", modes}}},
      {"ellipticity",
       {{"beta", c.beta}, {"elliptic", ell.elliptic}, {"margin", ell.margin}, {"rescaled_margin", ell.rescaled_margin},
        {"decided_exactly", ell.decided_exactly}, {"inconclusive", ell.inconclusive}}},
  };
  return out;
}

std::pair<json, Output> run_command(const std::string& command, const json& config) {
  require(config.is_object(), "config must be a JSON object");
  auto go = [&](auto cfg) {
    from_json(config, cfg);
    return std::pair<json, Output>{to_json(cfg), run(cfg)};
  };
  if (command == "exponents") return go(ExponentsConfig{});
  if (command == "wedge") return go(WedgeConfig{});
  if (command == "mellin") return go(MellinConfig{});
  if (command == "sobolev") return go(SobolevConfig{});
  if (command == "asymptotics") return go(AsymptoticsConfig{});
  if (command == "symbol") return go(SymbolConfig{});
  throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace conecalc::cli
