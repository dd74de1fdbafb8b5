// conecalc: command-line front end. Exit codes: 0 success, 1 numeric
// failure, 2 usage or invalid parameters.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "commands.hpp"

namespace cli = conecalc::cli;
using conecalc::json;

namespace {

struct OutputOptions {
  std::string format = "json";
  std::string output;
};

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--output,-o", o.output, "write to this file instead of stdout");
}

struct Geometry {
  double wedge_angle = 0.0;
  bool circle = false;
  int sphere = 0;
};

void add_geometry_options(CLI::App* sub, Geometry& g) {
  auto* w = sub->add_option("--wedge-angle", g.wedge_angle, "interval cross-section of this opening angle");
  auto* c = sub->add_flag("--circle", g.circle, "circle cross-section");
  auto* s = sub->add_option("--sphere", g.sphere, "sphere S^n cross-section");
  w->excludes(c)->excludes(s);
  c->excludes(s);
}

template <class Config>
void resolve_geometry(const Geometry& g, CLI::App* sub, Config& c) {
  if (sub->count("--circle") && g.circle) c.geometry = "circle";
  else if (sub->count("--sphere")) {
    c.geometry = "sphere";
    c.sphere = g.sphere;
  } else if (sub->count("--wedge-angle")) {
    c.geometry = "wedge";
    c.wedge_angle = g.wedge_angle;
  }
}

void emit(const std::string& command, const json& config, const cli::Output& out, const OutputOptions& o) {
  std::string text = o.format == "csv" ? out.csv : conecalc::make_report(command, config, out.result).dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw conecalc::InvalidArgument("cannot write " + o.output);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on manifolds with conical singularities"};
  app.set_config("--config", "", "INI file of option values ([subcommand] sections); flags override it");
  app.require_subcommand(1);

  OutputOptions io;
  Geometry geo;

  cli::ExponentsConfig ex;
  auto* exponents = app.add_subcommand("exponents", "singular exponents and admissible weight intervals");
  add_geometry_options(exponents, geo);
  exponents->add_option("--modes", ex.modes, "highest mode index J")->capture_default_str();
  exponents->add_option("--gamma-min", ex.gamma_min)->capture_default_str();
  exponents->add_option("--gamma-max", ex.gamma_max)->capture_default_str();
  exponents->add_option("--warp-file", ex.warp_file, "CSV table t,det_h of a warped cone");
  add_output_options(exponents, io);

  cli::WedgeConfig wd;
  auto* wedge = app.add_subcommand("wedge", "singular solutions of the Dirichlet Laplacian on a plane wedge");
  wedge->add_option("--angle", wd.angle, "opening angle, e.g. 1.2, pi/2 or 3pi/2")->capture_default_str();
  wedge->add_option("--j", wd.j, "mode index of the singular solution (nonzero)")->capture_default_str();
  wedge->add_option("--modes", wd.modes, "rows of the L2 table")->capture_default_str();
  wedge->add_option("--t-min", wd.t_min)->capture_default_str();
  wedge->add_option("--t-max", wd.t_max)->capture_default_str();
  wedge->add_option("--t-points", wd.t_points)->capture_default_str();
  wedge->add_option("--theta-points", wd.theta_points)->capture_default_str();
  wedge->add_option("--fd-step", wd.fd_step, "step of the finite-difference residual")->capture_default_str();
  wedge->add_option("--tol", wd.tol, "bound on the analytic residual")->capture_default_str();
  add_output_options(wedge, io);

  cli::MellinConfig me;
  auto* mellin = app.add_subcommand("mellin", "Mellin transform round trip on a test function");
  mellin->add_option("--roundtrip", me.roundtrip, "gaussian, bump or cutoff")->capture_default_str();
  mellin->add_option("--beta", me.beta, "weight line Re z = beta")->capture_default_str();
  mellin->add_option("--s-min", me.s_min)->capture_default_str();
  mellin->add_option("--s-max", me.s_max)->capture_default_str();
  mellin->add_option("--points", me.points)->capture_default_str();
  mellin->add_option("--tol", me.tol, "bound on the round-trip error")->capture_default_str();
  add_output_options(mellin, io);

  cli::SobolevConfig so;
  bool want_gamma_p = false;
  auto* sobolev = app.add_subcommand("sobolev", "cone Sobolev membership and gamma_p");
  sobolev->add_flag("--gamma-p", want_gamma_p, "print gamma_p(n, p) = (n + 1)(1/2 - 1/p)");
  sobolev->add_option("--s", so.s)->capture_default_str();
  sobolev->add_option("--gamma", so.gamma)->capture_default_str();
  sobolev->add_option("--p", so.p)->capture_default_str();
  sobolev->add_option("--n", so.n)->capture_default_str();
  sobolev->add_option("--p-exp", so.p_exp, "model t^{-p_exp} ln^k t omega")->capture_default_str();
  sobolev->add_option("--k", so.k)->capture_default_str();
  add_output_options(sobolev, io);

  cli::AsymptoticsConfig as;
  auto* asymptotics = app.add_subcommand("asymptotics", "residue terms of a mode parametrix between two lines");
  asymptotics->add_option("--lambda", as.lambda)->capture_default_str();
  asymptotics->add_option("--n", as.n)->capture_default_str();
  asymptotics->add_option("--from", as.from)->capture_default_str();
  asymptotics->add_option("--to", as.to)->capture_default_str();
  asymptotics->add_option("--datum-s0", as.datum_s0, "log-Gaussian datum centre")->capture_default_str();
  asymptotics->add_option("--datum-sigma", as.datum_sigma, "log-Gaussian datum width")->capture_default_str();
  asymptotics->add_flag("--check", as.check, "compare with the numeric line difference");
  asymptotics->add_option("--s-min", as.s_min)->capture_default_str();
  asymptotics->add_option("--s-max", as.s_max)->capture_default_str();
  asymptotics->add_option("--points", as.points)->capture_default_str();
  asymptotics->add_option("--tol", as.tol, "bound on the contour-shift error")->capture_default_str();
  add_output_options(asymptotics, io);

  cli::SymbolConfig sy;
  auto* symbol = app.add_subcommand("symbol", "symbols and ellipticity of the Laplace-Beltrami operator");
  add_geometry_options(symbol, geo);
  symbol->add_option("--modes", sy.modes)->capture_default_str();
  symbol->add_flag("--negate", sy.negate, "use -Delta_g");
  symbol->add_option("--t", sy.t)->capture_default_str();
  symbol->add_option("--tau", sy.tau)->capture_default_str();
  symbol->add_option("--xi", sy.xi)->capture_default_str();
  symbol->add_option("--z-re", sy.z_re)->capture_default_str();
  symbol->add_option("--z-im", sy.z_im)->capture_default_str();
  symbol->add_option("--beta", sy.beta, "weight line for the ellipticity check")->capture_default_str();
  symbol->add_option("--tol", sy.tol)->capture_default_str();
  add_output_options(symbol, io);

  std::string report_path;
  auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a JSON report");
  rerun->add_option("report", report_path, "report written by an earlier run")->required();
  add_output_options(rerun, io);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string command;
    json config;
    if (rerun->parsed()) {
      std::ifstream in(report_path);
      if (!in) throw conecalc::InvalidArgument("cannot open " + report_path);
      json report;
      try {
        report = json::parse(in);
      } catch (const json::exception& e) {
        throw conecalc::InvalidArgument(std::string("malformed report: ") + e.what());
      }
      command = report.value("command", "");
      config = report.value("config", json::object());
    } else if (exponents->parsed()) {
      resolve_geometry(geo, exponents, ex);
      command = "exponents";
      config = cli::to_json(ex);
    } else if (wedge->parsed()) {
      command = "wedge";
      config = cli::to_json(wd);
    } else if (mellin->parsed()) {
      command = "mellin";
      config = cli::to_json(me);
    } else if (sobolev->parsed()) {
      if (want_gamma_p) so.mode = "gamma_p";
      command = "sobolev";
      config = cli::to_json(so);
    } else if (asymptotics->parsed()) {
      command = "asymptotics";
      config = cli::to_json(as);
    } else {
      resolve_geometry(geo, symbol, sy);
      command = "symbol";
      config = cli::to_json(sy);
    }
    auto [resolved, out] = cli::run_command(command, config);
    emit(command, resolved, out, io);
    return 0;
  } catch (const conecalc::InvalidArgument& e) {
    std::cerr << "conecalc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "conecalc: " << e.what() << "\n";
    return 1;
  }
}
