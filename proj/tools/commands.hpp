#pragma once

// Subcommands of the conecalc tool as functions from a resolved config to a
// result. Configs serialize to JSON with every field present, so a report's
// embedded config reruns the same computation.

#include <string>
#include <vector>

#include "conecalc/serialize.hpp"

namespace conecalc::cli {

struct ExponentsConfig {
  std::string geometry = "wedge";  // wedge | circle | sphere
  double wedge_angle = 1.5707963267948966;
  int sphere = 2;
  int modes = 5;
  double gamma_min = -5.0;
  double gamma_max = 5.0;
  std::string warp_file;  // CSV t,det_h; empty for a straight cone
};

struct WedgeConfig {
  std::string angle = "pi/2";
  int j = -1;
  int modes = 5;
  double t_min = 0.1;
  double t_max = 1.0;
  int t_points = 10;
  int theta_points = 9;
  double fd_step = 0.01;
  double tol = 1e-12;
};

struct MellinConfig {
  std::string roundtrip = "gaussian";  // gaussian | bump | cutoff
  double beta = 0.5;
  double s_min = -10.0;
  double s_max = 6.0;
  int points = 4096;
  double tol = 1e-6;
};

struct SobolevConfig {
  std::string mode = "membership";  // membership | gamma_p
  int s = 0;
  double gamma = 0.0;
  double p = 2.0;
  int n = 1;
  double p_exp = 0.0;
  int k = 0;
};

struct AsymptoticsConfig {
  double lambda = 0.0;
  int n = 1;
  double from = 0.5;
  double to = -0.5;
  double datum_s0 = -1.0;
  double datum_sigma = 0.5;
  bool check = false;
  double s_min = -30.0;
  double s_max = 30.0;
  int points = 4096;
  double tol = 1e-5;
};

struct SymbolConfig {
  std::string geometry = "circle";
  double wedge_angle = 1.5707963267948966;
  int sphere = 2;
  int modes = 5;
  bool negate = false;
  double t = 0.5;
  double tau = 1.0;
  double xi = 0.0;
  double z_re = 0.5;
  double z_im = 0.0;
  double beta = 0.5;
  double tol = 1e-8;
};

json to_json(const ExponentsConfig& c);
json to_json(const WedgeConfig& c);
json to_json(const MellinConfig& c);
json to_json(const SobolevConfig& c);
json to_json(const AsymptoticsConfig& c);
json to_json(const SymbolConfig& c);

void from_json(const json& j, ExponentsConfig& c);
void from_json(const json& j, WedgeConfig& c);
void from_json(const json& j, MellinConfig& c);
void from_json(const json& j, SobolevConfig& c);
void from_json(const json& j, AsymptoticsConfig& c);
void from_json(const json& j, SymbolConfig& c);

/// Throws InvalidArgument on out-of-range fields.
void validate(const ExponentsConfig& c);
void validate(const WedgeConfig& c);
void validate(const MellinConfig& c);
void validate(const SobolevConfig& c);
void validate(const AsymptoticsConfig& c);
void validate(const SymbolConfig& c);

/// "1.57", "pi/2", "3pi/2", "-2*pi/3".
double parse_angle(const std::string& text);

/// Result of a subcommand: the JSON result object plus its CSV rendering.
struct Output {
  json result;
  std::string csv;
};

/// Throws NumericError when a checked quantity exceeds its tolerance.
Output run(const ExponentsConfig& c);
Output run(const WedgeConfig& c);
Output run(const MellinConfig& c);
Output run(const SobolevConfig& c);
Output run(const AsymptoticsConfig& c);
Output run(const SymbolConfig& c);

/// Runs `command` with a JSON config (missing keys take defaults) and returns
/// {resolved config, output}.
std::pair<json, Output> run_command(const std::string& command, const json& config);

inline const std::vector<std::string> kCommands{"exponents", "wedge", "mellin", "sobolev", "asymptotics", "symbol"};

}  // namespace conecalc::cli
