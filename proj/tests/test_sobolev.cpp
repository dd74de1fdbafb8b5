#include <doctest.h>

#include <cmath>
#include <vector>

#include "conecalc/cone_sobolev.hpp"
#include "oracles.hpp"

using namespace conecalc;
using oracle::pi;

namespace {

PerModeFunction single(double lambda, SampledFunction f) { return {{lambda, std::move(f)}}; }

SpaceParams random_params(std::mt19937_64& g, int n, double p) {
  return {std::uniform_int_distribution<int>(0, 3)(g), oracle::uniform(g, -2, 2), p, n};
}

}  // namespace

TEST_CASE("membership examples") {
  SpaceParams l2{0, 0.0, 2.0, 1};
  for (double alpha : {0.5, 1.0, 2.0, 3.0, pi - 1e-9, pi + 1e-9, 4.0, 6.0}) {
    ModelFunction u1{pi / alpha, 0, 0, {}};
    CHECK(membership(u1, l2) == (alpha > pi));
  }
  for (int n : {1, 2, 3}) {
    ModelFunction cutoff{0.0, 0, 0, {}};
    const double crit = 0.5 * (n + 1);
    CHECK(membership(cutoff, {0, crit - 1e-9, 2.0, n}));
    CHECK_FALSE(membership(cutoff, {0, crit, 2.0, n}));
    CHECK(membership(cutoff, {0, -5.0, 2.0, n}));
    // equality is excluded whatever s, k and p are
    for (int k : {0, 1, 3})
      for (double p : {1.5, 2.0, 4.0}) {
        ModelFunction edge{crit - 0.25, k, 0, {}};
        CHECK_FALSE(membership(edge, {2, 0.25, p, n}));
      }
  }
  CHECK_THROWS_AS(membership(ModelFunction{}, {0, 0.0, 1.0, 1}), InvalidArgument);
  CHECK_THROWS_AS(membership(ModelFunction{}, {0, 0.0, 2.0, 0}), InvalidArgument);
}

TEST_CASE("membership is monotone in gamma and p_exp") {
  auto g = oracle::rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + trial % 4;
    SpaceParams a = random_params(g, n, oracle::uniform(g, 1.1, 6));
    ModelFunction u{oracle::uniform(g, -3, 3), trial % 3, 0, {}};
    if (!membership(u, a)) continue;
    SpaceParams b = a;
    b.gamma -= oracle::uniform(g, 0, 2);
    CHECK(membership(u, b));
    ModelFunction v = u;
    v.p_exp -= oracle::uniform(g, 0, 2);
    CHECK(membership(v, a));
  }
}

TEST_CASE("weighted norm of the plain cutoff against quadrature") {
  CutoffSpec om{};
  LogGrid grid(-40, 0.25, 40.25 * 256 + 1);
  ModelFunction u{0.0, 0, 0, om};
  double got = weighted_norm(single(0.0, u.sample(grid)), {0, 0.0, 2.0, 1}, circle_spectrum(0));
  // int t^2 omega^2 dt / t, split at the ends of the transition
  auto f = [&](double t) { return t * om(t) * om(t); };
  double want = oracle::gk(f, 0.0, 0.5) + oracle::gk(f, 0.5, 1.0);
  CHECK(std::abs(got * got - want) <= 1e-8 * want);
}

TEST_CASE("weighted norm with derivatives against quadrature") {
  // u = exp(-(ln t - s0)^2 / 2 sigma^2): t u' = -(ln t - s0) / sigma^2 u,
  // (t d/dt)^2 u = ((ln t - s0)^2 / sigma^4 - 1 / sigma^2) u
  oracle::LogGaussian G{-4.0, 0.7};
  LogGrid grid(-20, 4, 6145);
  auto samples = SampledFunction::sample(grid, [&](double t) { return complex(G(t)); });
  auto d1 = [&](double t) { double x = std::log(t) - G.s0; return -x / (G.sigma * G.sigma) * G(t); };
  auto d2 = [&](double t) {
    double x = std::log(t) - G.s0, s2 = G.sigma * G.sigma;
    return (x * x / (s2 * s2) - 1 / s2) * G(t);
  };
  auto cs = sphere_spectrum(2, 2);
  for (double lam : {0.0, -2.0, -6.0})
    for (double gamma : {-0.5, 0.7}) {
      SpaceParams P{2, gamma, 2.0, 2};
      double w = P.critical_exponent();
      double L = std::abs(lam);
      // j + a <= 2: j = 0 -> 1 + L + L^2, j = 1 -> 1 + L, j = 2 -> 1
      auto integrand = [&](double t) {
        double tw = std::pow(t, 2 * w - 1);
        return tw * ((1 + L + L * L) * G(t) * G(t) + (1 + L) * d1(t) * d1(t) + d2(t) * d2(t));
      };
      double want = oracle::gk(integrand, 0.0, std::exp(-4.0)) + oracle::gk(integrand, std::exp(-4.0), std::exp(4.0));
      Diagnostics diag;
      double got = weighted_norm(single(lam, samples), P, cs, &diag);
      CHECK(diag.empty());
      CHECK(std::abs(got * got - want) <= 1e-8 * want);
    }
}

TEST_CASE("weighted norm for p != 2 on a single lambda = 0 mode") {
  oracle::LogGaussian G{-3.0, 0.5};
  LogGrid grid(-15, 3, 2049);
  auto samples = SampledFunction::sample(grid, [&](double t) { return complex(G(t)); });
  for (int n : {1, 2, 3}) {
    SpaceParams P{0, 0.3, 4.0, n};
    double h = 0.5 * (n + 1);
    double vol = n == 1 ? 2 * pi : 2 * std::pow(pi, h) / std::tgamma(h);
    double w = P.critical_exponent();
    auto integrand = [&](double t) { return std::pow(t, 4 * w - 1) * std::pow(G(t), 4); };
    double want = vol * std::pow(vol, -2.0) * (oracle::gk(integrand, 0.0, std::exp(-3.0)) +
                                               oracle::gk(integrand, std::exp(-3.0), std::exp(3.0)));
    double got = weighted_norm(single(0.0, samples), P, sphere_spectrum(n, 1));
    CHECK(std::abs(std::pow(got, 4) - want) <= 1e-8 * want);
  }
  CHECK_THROWS_AS(weighted_norm(single(0.0, samples), {0, 0.0, 3.0, 1}, interval_dirichlet_spectrum(pi, 1)),
                  InvalidArgument);
  CHECK_THROWS_AS(weighted_norm(single(-1.0, samples), {0, 0.0, 3.0, 1}, circle_spectrum(1)), InvalidArgument);
  PerModeFunction two{{0.0, samples}, {0.0, samples}};
  CHECK_THROWS_AS(weighted_norm(two, {0, 0.0, 3.0, 1}, circle_spectrum(1)), InvalidArgument);
}

TEST_CASE("weighted norm: zero, homogeneity, orthogonal modes, decay warning") {
  LogGrid grid(-20, 2, 1025);
  auto cs = circle_spectrum(3);
  SpaceParams P{1, 0.2, 2.0, 1};
  CHECK(weighted_norm(single(-1.0, SampledFunction::zeros(grid)), P, cs) == 0.0);
  CHECK(weighted_norm(PerModeFunction{}, P, cs) == 0.0);
  oracle::LogGaussian G{-5.0, 1.0};
  auto f = SampledFunction::sample(grid, [&](double t) { return complex(G(t)); });
  double base = weighted_norm(single(-4.0, f), P, cs);
  auto g = oracle::rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    complex c{oracle::uniform(g, -3, 3), oracle::uniform(g, -3, 3)};
    SampledFunction cf = f;
    for (auto& v : cf.values) v *= c;
    CHECK(weighted_norm(single(-4.0, cf), P, cs) == doctest::Approx(std::abs(c) * base).epsilon(1e-13));
  }
  // orthonormal modes add in the p = 2 norm
  double other = weighted_norm(single(-1.0, f), P, cs);
  double both = weighted_norm(PerModeFunction{{-4.0, f}, {-1.0, f}}, P, cs);
  CHECK(both * both == doctest::Approx(base * base + other * other).epsilon(1e-13));

  Diagnostics diag;
  auto slow = SampledFunction::sample(grid, [](double t) { return complex(std::pow(t, -0.5)); });
  weighted_norm(single(0.0, slow), {0, 0.0, 2.0, 1}, cs, &diag);
  CHECK_FALSE(diag.empty());
  CHECK_THROWS_AS(weighted_norm(PerModeFunction{{0.0, f}, {0.0, SampledFunction::zeros(LogGrid(-5, 1, 33))}}, P, cs),
                  InvalidArgument);
}

TEST_CASE("gamma_p") {
  for (int n = 1; n <= 8; ++n) CHECK(gamma_p(n, 2.0) == 0.0);
  CHECK(gamma_p(1, 4.0) == doctest::Approx(0.5));
  CHECK(gamma_p(3, 1.5) == doctest::Approx(4 * (0.5 - 2.0 / 3)));
  for (double e : {1e-3, 1e-6, 1e-9}) {
    CHECK(std::abs(gamma_p(2, 2 + e)) <= 3 * e);
    CHECK(std::abs(gamma_p(2, 2 - e)) <= 3 * e);
  }
  CHECK_THROWS_AS(gamma_p(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(gamma_p(1, INFINITY), InvalidArgument);
  CHECK_THROWS_AS(gamma_p(0, 2.0), InvalidArgument);
}

TEST_CASE("embedding examples") {
  CHECK(embeds({2, 1.0, 2.0, 1}, {1, 0.0, 2.0, 1}) == Embedding::compact);
  CHECK(embeds({1, 0.0, 2.0, 1}, {1, 0.0, 2.0, 1}) == Embedding::continuous);
  CHECK(embeds({1, 0.0, 2.0, 1}, {2, 0.0, 2.0, 1}) == Embedding::none);
  CHECK(embeds({2, 0.0, 2.0, 1}, {1, 0.0, 2.0, 1}) == Embedding::continuous);
  CHECK(embeds({2, -1.0, 2.0, 1}, {1, 0.0, 2.0, 1}) == Embedding::none);
  CHECK(std::string(to_string(Embedding::compact)) == "compact");
  CHECK_THROWS_AS(embeds({1, 0.0, 2.0, 1}, {1, 0.0, 3.0, 1}), InvalidArgument);
  CHECK_THROWS_AS(embeds({1, 0.0, 2.0, 1}, {1, 0.0, 2.0, 2}), InvalidArgument);
}

TEST_CASE("embeds is a partial order") {
  auto g = oracle::rng(41);
  auto pick = [&] {
    // coarse values so that ties occur
    return SpaceParams{std::uniform_int_distribution<int>(0, 3)(g),
                       0.5 * std::uniform_int_distribution<int>(-3, 3)(g), 2.0, 2};
  };
  for (int trial = 0; trial < 400; ++trial) {
    auto a = pick(), b = pick(), c = pick();
    CHECK(embeds(a, a) == Embedding::continuous);
    auto ab = embeds(a, b), bc = embeds(b, c);
    if (ab != Embedding::none && bc != Embedding::none) {
      CHECK(embeds(a, c) != Embedding::none);
      if (ab == Embedding::compact || bc == Embedding::compact) CHECK(embeds(a, c) != Embedding::none);
      if (ab == Embedding::compact && bc == Embedding::compact) CHECK(embeds(a, c) == Embedding::compact);
    }
    if (ab != Embedding::none && embeds(b, a) != Embedding::none) CHECK(a == b);
  }
}

TEST_CASE("dual exponent bookkeeping is an involution") {
  auto g = oracle::rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    SpaceParams a = random_params(g, 1 + trial % 3, oracle::uniform(g, 1.01, 20));
    SpaceParams d = a.dual();
    CHECK(1 / a.p + 1 / d.p == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.s == -a.s);
    CHECK(d.gamma == -a.gamma);
    SpaceParams dd = d.dual();
    CHECK(dd.s == a.s);
    CHECK(dd.gamma == a.gamma);
    CHECK(dd.n == a.n);
    CHECK(dd.p == doctest::Approx(a.p).epsilon(1e-12));
  }
  CHECK(SpaceParams{1, 0.5, 2.0, 1}.dual() == SpaceParams{-1, -0.5, 2.0, 1});
}

TEST_CASE("refinement stability matches membership") {
  auto g = oracle::rng(1234);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 3, k = trial % 3;
    SpaceParams P{trial % 2, oracle::uniform(g, -1.5, 1.5), 2.0, n};
    double margin = oracle::uniform(g, 0.3, 2.0) * (trial % 4 < 2 ? 1 : -1);
    ModelFunction u{P.critical_exponent() - margin, k, 0, {}};
    auto study = refinement_study(u, P, sphere_spectrum(n, 1));
    CHECK(study.stable == membership(u, P));
    for (std::size_t i = 1; i < study.norms_p.size(); ++i) CHECK(study.norms_p[i] >= study.norms_p[i - 1]);
    ++checked;
  }
  CHECK(checked == 40);
  // critical cases: log-divergent for every k
  for (int k = 0; k < 4; ++k) {
    SpaceParams P{1, 0.25, 2.0, 2};
    ModelFunction u{P.critical_exponent(), k, 0, {}};
    auto study = refinement_study(u, P, sphere_spectrum(2, 1));
    CHECK_FALSE(study.stable);
    CHECK(study.ratio >= 1.0);
  }
  // norm^2 grows linearly in the lower end for the critical k = 0 case
  auto crit = refinement_study(ModelFunction{1.0, 0, 0, {}}, {0, 0.0, 2.0, 1}, circle_spectrum(0));
  CHECK(crit.ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(crit.norms_p[3] - crit.norms_p[2] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("refinement study requires its own grid") {
  LogGrid other(-40, 0.25, 100);
  PerModeFunction u{{0.0, SampledFunction::zeros(other)}};
  CHECK_THROWS_AS(refinement_study(u, {0, 0.0, 2.0, 1}, circle_spectrum(0)), InvalidArgument);
  CHECK_THROWS_AS(refinement_study(PerModeFunction{}, {0, 0.0, 2.0, 1}, circle_spectrum(0)), InvalidArgument);
  auto grid = refinement_grid(CutoffSpec{});
  CHECK(grid.s_min() == -40.0);
  CHECK(grid.spacing() == doctest::Approx(kRefinementSpacing).epsilon(1e-14));
  CHECK(grid.s_max() >= 0.25);
}

TEST_CASE("mapping check for the Laplacian") {
  auto cs = circle_spectrum(2);
  auto op = build_laplace_beltrami(ConeMetric(cs));
  SpaceParams P{0, 0.0, 2.0, 1};
  // t^3 omega on mode 1: input in H^{2,2}, output in H^{0,0}
  ModelFunction u{-3.0, 0, 1, {}};
  auto rep = mapping_check(op, u, P, cs);
  CHECK(rep.input_stable);
  CHECK(rep.output_stable);
  CHECK(std::isfinite(rep.norm_in));
  CHECK(std::isfinite(rep.norm_out));
  CHECK(rep.norm_in > 0);
  CHECK(rep.norm_out > 0);

  LogGrid grid = refinement_grid(CutoffSpec{});
  PerModeFunction zero{{-1.0, SampledFunction::zeros(grid)}};
  auto z = mapping_check(op, zero, P, cs);
  CHECK(z.norm_in == 0.0);
  CHECK(z.norm_out == 0.0);

  // at the critical exponent of the source space the input norm diverges
  ModelFunction edge{-1.0, 0, 1, {}};
  auto bad = mapping_check(op, edge, P, cs);
  CHECK_FALSE(bad.input_stable);

  // per-mode overload agrees with the model form on the same grid
  PerModeFunction sampled{{cs.eigenvalue(1), u.sample(grid)}};
  auto direct = mapping_check(op, sampled, P, cs);
  CHECK(direct.norm_in == doctest::Approx(rep.norm_in).epsilon(1e-10));
  CHECK(direct.norm_out == doctest::Approx(rep.norm_out).epsilon(1e-10));
}
