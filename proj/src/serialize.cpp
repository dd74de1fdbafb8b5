#include "conecalc/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace conecalc {

json complex_to_json(complex z) { return json::array({z.real(), z.imag()}); }

complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

json values_to_json(const std::vector<complex>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

std::vector<complex> values_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("values must be an array");
  std::vector<complex> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(complex_from_json(e));
  return v;
}

json optional_to_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

json to_json(const SampledFunction& u) {
  return {{"grid", {{"s_min", u.grid.s_min()}, {"s_max", u.grid.s_max()}, {"n", u.grid.size()}}},
          {"values", values_to_json(u.values)}};
}

SampledFunction sampled_function_from_json(const json& j) {
  try {
    const auto& g = j.at("grid");
    LogGrid grid(g.at("s_min").get<double>(), g.at("s_max").get<double>(), g.at("n").get<std::size_t>());
    return SampledFunction(grid, values_from_json(j.at("values")));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed sampled function: ") + e.what());
  }
}

json to_json(const MellinFunction& F) {
  return {{"beta", F.line.beta},
          {"grid", {{"tau_min", F.tau.front()}, {"tau_max", F.tau.back()}, {"n", F.tau.size()}}},
          {"values", values_to_json(F.values)}};
}

MellinFunction mellin_function_from_json(const json& j) {
  try {
    const auto& g = j.at("grid");
    const double lo = g.at("tau_min").get<double>(), hi = g.at("tau_max").get<double>();
    const auto n = g.at("n").get<std::size_t>();
    if (n < 2) throw InvalidArgument("Mellin grid needs at least 2 points");
    std::vector<double> tau(n);
    const double dtau = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t m = 0; m < n; ++m) tau[m] = lo + static_cast<double>(m) * dtau;
    return MellinFunction(WeightLine{j.at("beta").get<double>()}, std::move(tau), values_from_json(j.at("values")));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed Mellin function: ") + e.what());
  }
}

json to_json(const CrossSectionSpectrum& spectrum) {
  return {{"geometry", to_string(spectrum.geometry())},
          {"dimension", spectrum.dimension()},
          {"eigenvalues", spectrum.eigenvalues()},
          {"multiplicities", spectrum.multiplicities()}};
}

json exponents_to_json(const SingularExponentSet& set, const std::vector<GammaInterval>& intervals) {
  json ex = json::array();
  for (const auto& e : set.exponents)
    ex.push_back({{"q", e.q}, {"j", e.j}, {"sign", to_string(e.sign)}, {"order", e.order}});
  json iv = json::array();
  for (const auto& g : intervals)
    iv.push_back({{"lo", g.lo}, {"hi", g.hi},
                  {"bounded_by", json::array({optional_to_json(g.bounded_lo), optional_to_json(g.bounded_hi)})}});
  return {{"n", set.n}, {"exponents", ex}, {"gamma_intervals", iv}};
}

json to_json(const SpaceParams& params) {
  return {{"s", params.s}, {"gamma", params.gamma}, {"p", params.p}, {"n", params.n}};
}

json membership_to_json(const ModelFunction& model, const SpaceParams& params) {
  return {{"p_exp", model.p_exp},
          {"k", model.k},
          {"params", to_json(params)},
          {"member", membership(model, params)},
          {"critical_exponent", params.critical_exponent()}};
}

json terms_to_json(double beta_from, double beta_to, const std::vector<AsymptoticTerm>& terms) {
  json ts = json::array();
  for (const auto& t : terms) ts.push_back({{"p", complex_to_json(t.p)}, {"j", t.j}, {"coeff", complex_to_json(t.coeff)}});
  return {{"strip", json::array({beta_from, beta_to})}, {"terms", ts}};
}

json wedge_summary_json(double alpha, int J) {
  if (J < 1) throw InvalidArgument("wedge summary needs J >= 1");
  json ex = json::array();
  json table = json::array();
  for (int j = -J; j <= J; ++j) {
    if (j == 0) continue;
    SingularSolution u(alpha, j);
    ex.push_back(u.angular_frequency());
    table.push_back({{"j", j}, {"exponent", u.angular_frequency()}, {"l2", l2_classification(alpha, j)}});
  }
  return {{"alpha", alpha}, {"exponents", ex}, {"l2_table", table}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const SampledFunction& u) {
  std::ostringstream out;
  out << "s,t,re,im\n";
  for (std::size_t k = 0; k < u.size(); ++k)
    out << format_double(u.grid.s(k)) << ',' << format_double(u.grid.t(k)) << ','
        << format_double(u.values[k].real()) << ',' << format_double(u.values[k].imag()) << '\n';
  return out.str();
}

std::string to_csv(const std::vector<RasterRow>& rows) {
  std::ostringstream out;
  out << "t,theta,value\n";
  for (const auto& r : rows)
    out << format_double(r.t) << ',' << format_double(r.theta) << ',' << format_double(r.value) << '\n';
  return out.str();
}

json make_report(const std::string& command, json config, json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"config", std::move(config)},
          {"result", std::move(result)}};
}

}  // namespace conecalc
