#pragma once

// JSON and CSV forms of the library's data. JSON objects have sorted keys and
// doubles in shortest round-trip form, so equal inputs give byte-identical
// text. Complex numbers are [re, im] pairs.

#include <string>
#include <vector>

#include <json.hpp>

#include "conecalc/asymptotics.hpp"
#include "conecalc/cone_operator.hpp"
#include "conecalc/cone_sobolev.hpp"
#include "conecalc/cross_section.hpp"
#include "conecalc/mellin.hpp"
#include "conecalc/wedge.hpp"

namespace conecalc {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json complex_to_json(complex z);
complex complex_from_json(const json& j);

/// {grid: {s_min, s_max, n}, values: [[re, im], ...]}
json to_json(const SampledFunction& u);
SampledFunction sampled_function_from_json(const json& j);

/// {beta, grid: {tau_min, tau_max, n}, values}
json to_json(const MellinFunction& F);
MellinFunction mellin_function_from_json(const json& j);

/// {geometry, dimension, eigenvalues, multiplicities}
json to_json(const CrossSectionSpectrum& spectrum);

/// {n, exponents: [{q, j, sign, order}], gamma_intervals: [{lo, hi, bounded_by}]}
json exponents_to_json(const SingularExponentSet& set, const std::vector<GammaInterval>& intervals);

json to_json(const SpaceParams& params);

/// {p_exp, k, params, member, critical_exponent}
json membership_to_json(const ModelFunction& model, const SpaceParams& params);

/// {strip: [beta_from, beta_to], terms: [{p, j, coeff}]}
json terms_to_json(double beta_from, double beta_to, const std::vector<AsymptoticTerm>& terms);

/// {alpha, exponents, l2_table: [{j, exponent, l2}]} for 1 <= |j| <= J.
json wedge_summary_json(double alpha, int J);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// Columns s, t, re, im.
std::string to_csv(const SampledFunction& u);
/// Columns t, theta, value.
std::string to_csv(const std::vector<RasterRow>& rows);

/// Top-level report: {schema_version, command, config, result}.
json make_report(const std::string& command, json config, json result);

}  // namespace conecalc
