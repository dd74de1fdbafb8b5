#include <doctest.h>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

#include "conecalc/cone_operator.hpp"
#include "oracles.hpp"

using namespace conecalc;
using oracle::pi;

namespace {

ConeOperator straight_laplacian(CrossSectionSpectrum s) { return build_laplace_beltrami(ConeMetric(std::move(s))); }

CrossSectionSpectrum random_spectrum(std::mt19937_64& g) {
  switch (std::uniform_int_distribution<int>(0, 2)(g)) {
    case 0: return interval_dirichlet_spectrum(oracle::uniform(g, 0.2, 2 * pi - 0.2), 6);
    case 1: return circle_spectrum(6);
    default: return sphere_spectrum(std::uniform_int_distribution<int>(1, 5)(g), 6);
  }
}

int max_mode_index(const CrossSectionSpectrum& s) {
  return static_cast<int>(s.count()) - 1 + (s.closed() ? 0 : s.first_index());
}

}  // namespace

TEST_CASE("Laplace-Beltrami coefficients of straight cones") {
  for (int n : {1, 2, 3}) {
    auto op = straight_laplacian(sphere_spectrum(n, 3));
    CHECK(op.mu() == 2);
    CHECK(op.t_independent());
    for (double t : {0.0, 0.3, 0.9})
      for (double lam : {0.0, -2.0, -6.0}) {
        CHECK(op.coefficient(2).on_mode(t, lam) == complex(1.0));
        CHECK(op.coefficient(1).on_mode(t, lam) == complex(-(n - 1.0)));
        CHECK(op.coefficient(0).on_mode(t, lam) == complex(lam));
      }
  }
  ConeMetric straight(circle_spectrum(2));
  for (double t : {0.0, 0.4, 1.0}) CHECK(warp_factor_F(straight, t) == 0.0);
}

TEST_CASE("circle mode operator is the planar Laplacian in polar coordinates") {
  // Delta r^a e^{ij theta} = (a^2 - j^2) r^{a-2} e^{ij theta}; t^{-q} has a = -q.
  auto op = straight_laplacian(circle_spectrum(4));
  auto g = oracle::rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    double a = oracle::uniform(g, -4, 4), r = oracle::uniform(g, 0.05, 1.0);
    int j = trial % 5;
    complex got = apply_to_power(op, -double(j * j), -a, r);
    double want = (a * a - j * j) * std::pow(r, a - 2);
    CHECK(std::abs(got - want) <= 1e-12 * (1 + std::abs(want)));
  }
}

TEST_CASE("wedge operator is t^-2((t dt)^2 + d_theta^2)") {
  const double alpha = 3 * pi / 4;
  auto op = straight_laplacian(interval_dirichlet_spectrum(alpha, 4));
  CHECK(op.n() == 1);
  for (int j = 1; j <= 4; ++j) {
    double lam = -std::pow(j * pi / alpha, 2);
    for (double q : {-1.3, 0.0, 2.5}) {
      // (t dt)^2 t^{-q} = q^2 t^{-q}; d_theta^2 sin(j pi theta / alpha) = lam sin(...)
      complex got = apply_to_power(op, lam, q, 0.7);
      double want = (q * q + lam) * std::pow(0.7, -2 - q);
      CHECK(std::abs(got - want) <= 1e-12 * (1 + std::abs(want)));
    }
  }
}

TEST_CASE("warp factor of conformal and tabulated warps") {
  auto c = [](double t) { return 1.0 + t; };
  ConeMetric m(circle_spectrum(2), ConformalWarp{c, [](double) { return 1.0; }});
  CHECK(warp_factor_F(m, 0.0) == 0.0);
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(warp_factor_F(m, t) == doctest::Approx(t / (1 + t)).epsilon(1e-14));
    // finite-difference check of (1/2) t d/dt ln det h with det h = c^2
    const double h = 1e-5;
    double fd = 0.5 * t * (2 * std::log(c(t + h)) - 2 * std::log(c(t - h))) / (2 * h);
    CHECK(std::abs(warp_factor_F(m, t) - fd) <= 1e-8);
  }
  CHECK(m.conformal_factor(0.5) == doctest::Approx(1.5));

  TabulatedWarp tab;
  for (int i = 0; i <= 2000; ++i) {
    double t = i / 2000.0;
    tab.t.push_back(t);
    tab.det_h.push_back(c(t) * c(t));
  }
  ConeMetric mt(circle_spectrum(2), tab);
  for (double t : {0.0, 0.05, 0.37, 0.8, 1.0}) CHECK(std::abs(warp_factor_F(mt, t) - t / (1 + t)) <= 1e-6);
  CHECK(mt.conformal_factor(0.37) == doctest::Approx(1.37).epsilon(1e-6));
  CHECK_THROWS_AS(warp_factor_F(mt, 1.2), InvalidArgument);
  CHECK_THROWS_AS(warp_factor_F(mt, -0.1), InvalidArgument);
}

TEST_CASE("warp factor is O(t) for random admissible warps") {
  auto g = oracle::rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    double a = oracle::uniform(g, -0.5, 0.5), b = oracle::uniform(g, 0.5, 4.0);
    int n = 1 + trial % 3;
    ConformalWarp w{[=](double t) { return 1.0 + a * std::sin(b * t); },
                    [=](double t) { return a * b * std::cos(b * t); }};
    ConeMetric m(sphere_spectrum(n, 2), w);
    double bound = n * std::abs(a) * b / (1 - std::abs(a)) + 1e-12;
    for (double t : {1e-8, 1e-4, 1e-2, 0.3, 1.0}) CHECK(std::abs(warp_factor_F(m, t) / t) <= bound);
  }
}

TEST_CASE("metric validation") {
  auto one = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(ConeMetric(circle_spectrum(1), ConformalWarp{[](double t) { return 2.0 + t; }, one}),
                  InvalidArgument);
  CHECK_THROWS_AS(ConeMetric(circle_spectrum(1), ConformalWarp{[](double t) { return 1.0 - 2 * t; },
                                                               [](double) { return -2.0; }}),
                  MetricDegeneracyError);
  CHECK_NOTHROW(ConeMetric(circle_spectrum(1), ConformalWarp{one, zero}));
  CHECK_THROWS_AS(ConeMetric(circle_spectrum(1), TabulatedWarp{{0.0, 0.5, 1.0}, {1.0, -1.0, 1.0}}),
                  MetricDegeneracyError);
  CHECK_THROWS_AS(ConeMetric(circle_spectrum(1), TabulatedWarp{{0.0, 0.5}, {1.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(ConeMetric(circle_spectrum(1), TabulatedWarp{{0.0, 0.2, 0.5}, {1.0, 1.0, 1.0}}), InvalidArgument);
}

TEST_CASE("operator order invariant") {
  CoefficientFamily bad{3, [](double, double) { return complex(1.0); }, nullptr, std::nullopt, true};
  CoefficientFamily ok{0, [](double, double) { return complex(1.0); }, nullptr, std::nullopt, true};
  CHECK_THROWS_AS(ConeOperator(2, {ok, bad, ok}, 1, 1.0, {0.0}), InvalidArgument);
  CHECK_NOTHROW(ConeOperator(2, {ok, ok, ok}, 1, 1.0, {0.0}));
}

TEST_CASE("principal and rescaled symbols") {
  auto op = straight_laplacian(sphere_spectrum(2, 2));
  CHECK(std::abs(principal_symbol(op, 0.5, 2.0, 3.0) - complex(-(0.25 * 4 + 9) / 0.25)) <= 1e-12);
  CHECK(principal_symbol(op, 0.5, 0.0, 0.0) == complex(0.0));
  CHECK_THROWS_AS(principal_symbol(op, 0.0, 1.0, 1.0), InvalidArgument);
  CHECK(rescaled_symbol(op.negated(), 0.0, 1.0, 0.0) == complex(1.0));
  CHECK(rescaled_symbol(op.negated(), 0.3, 1.0, 0.0) == complex(1.0));

  auto c = [](double t) { return 1.0 + 0.5 * t; };
  auto warped = build_laplace_beltrami(ConeMetric(sphere_spectrum(2, 2), ConformalWarp{c, [](double) { return 0.5; }}));
  auto g = oracle::rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    double t = oracle::uniform(g, 0.01, 1.0), tau = oracle::uniform(g, -5, 5), xi = oracle::uniform(g, 0, 5);
    double k = oracle::uniform(g, 0.1, 10);
    for (const auto* A : {&op, &warped}) {
      complex s = principal_symbol(*A, t, tau, xi);
      CHECK(std::abs(principal_symbol(*A, t, k * tau, k * xi) - k * k * s) <= 1e-12 * k * k * (1 + std::abs(s)));
      complex r = rescaled_symbol(*A, t, tau, xi);
      CHECK(std::abs(t * t * principal_symbol(*A, t, tau / t, xi) - r) <= 1e-12 * (1 + std::abs(r)));
    }
    // -Delta_g: tau^2 + |xi|^2_{h*(t)} = tau^2 + xi^2 / c^2
    complex r = rescaled_symbol(warped.negated(), t, tau, xi);
    CHECK(std::abs(r - (tau * tau + xi * xi / (c(t) * c(t)))) <= 1e-12 * (1 + std::abs(r)));
    // positivity with c_min = min 1/c^2 on [0, 1]
    CHECK(r.real() >= (1.0 / 2.25) * (tau * tau + xi * xi) * (1 - 1e-12));
  }
}

TEST_CASE("conormal symbol") {
  for (int n : {1, 2, 3}) {
    auto op = straight_laplacian(sphere_spectrum(n, 3));
    CHECK(std::abs(conormal_symbol(op, complex(0.0), 0.0)) == 0.0);
    CHECK(std::abs(conormal_symbol(op, complex(n - 1.0), 0.0)) == 0.0);
    complex z{0.3, -1.7};
    for (double lam : op.mode_eigenvalues())
      CHECK(std::abs(conormal_symbol(op, z, lam) - (z * z - (n - 1.0) * z + lam)) <= 1e-13);
    auto all = conormal_symbol(op, z);
    REQUIRE(all.size() == op.mode_eigenvalues().size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == conormal_symbol(op, z, op.mode_eigenvalues()[i]));
  }
}

TEST_CASE("matrix conormal symbol") {
  auto base = sturm_liouville_discretize([](double th) { return 1.0 + 0.2 * std::cos(th); }, 2 * pi, 64,
                                         BoundaryCondition::periodic);
  ConeMetric m(spectrum_from_matrix(base));
  m.set_base_operator(base);
  auto op = build_laplace_beltrami(m);
  REQUIRE(op.base_operator() != nullptr);
  complex z{0.4, 2.0};
  auto M = conormal_symbol_matrix(op, z);
  REQUIRE(M.size() == base.size * base.size);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size; ++i)
    for (std::size_t j = 0; j < base.size; ++j) {
      complex want = base(i, j) + (i == j ? z * z : complex(0.0));
      worst = std::max(worst, std::abs(M[i * base.size + j] - want));
    }
  CHECK(worst <= 1e-10);
  auto no_base = straight_laplacian(circle_spectrum(2));
  CHECK_THROWS_AS(conormal_symbol_matrix(no_base, z), InvalidArgument);
}

TEST_CASE("singular exponents: wedge, circle and S^2") {
  for (double alpha : {pi / 2, pi, 3 * pi / 2, 0.7}) {
    auto set = singular_exponents(interval_dirichlet_spectrum(alpha, 5), 5);
    REQUIRE(set.exponents.size() == 10);
    std::vector<double> want;
    for (int j = -5; j <= 5; ++j)
      if (j != 0) want.push_back(j * pi / alpha);
    for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(set.values()[i] - want[i]) <= 1e-12 * (1 + std::abs(want[i])));
    CHECK_FALSE(set.contains(0.0));
  }
  auto circ = singular_exponents(circle_spectrum(3), 3);
  REQUIRE(circ.exponents.size() == 7);
  CHECK(circ.exponents[3].q == 0.0);
  CHECK(circ.exponents[3].order == 2);
  CHECK(circ.exponents[3].sign == ExponentSign::both);
  CHECK(circ.values() == std::vector<double>{-3, -2, -1, 0, 1, 2, 3});

  auto s2 = singular_exponents(sphere_spectrum(2, 1), 1);
  CHECK(s2.values() == std::vector<double>{-1, 0, 1, 2});
  CHECK(s2.exponents[0].j == 1);
  CHECK(s2.exponents[0].sign == ExponentSign::minus);
  CHECK(s2.exponents[3].j == 1);
  CHECK(s2.exponents[3].sign == ExponentSign::plus);
  CHECK(singular_exponents(ConeMetric(sphere_spectrum(2, 3)), 1).values() == s2.values());
  CHECK_THROWS_AS(singular_exponents(circle_spectrum(2), 5), InvalidArgument);
}

TEST_CASE("r^{-2} Y_1 and r Y_1 are harmonic in R^3") {
  auto s = sphere_spectrum(2, 1);
  auto set = singular_exponents(s, 1);
  auto harmonic_defect = [&](double q, int copy, std::array<double, 3> x) {
    auto u = [&](std::array<double, 3> p) {
      double r = std::hypot(p[0], p[1], p[2]);
      std::array<double, 2> ang{std::acos(p[2] / r), std::atan2(p[1], p[0])};
      return std::pow(r, -q) * s.eigenfunction(1, copy, ang);
    };
    const double h = 1e-3;
    double lap = 0.0, scale = std::abs(u(x));
    for (int d = 0; d < 3; ++d) {
      auto xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      lap += (u(xp) - 2 * u(x) + u(xm)) / (h * h);
    }
    return std::abs(lap) / (1 + scale);
  };
  for (const auto& e : set.exponents) {
    if (e.j != 1) continue;
    for (int copy = 0; copy < 3; ++copy)
      for (auto x : {std::array<double, 3>{0.3, -0.4, 0.5}, std::array<double, 3>{-0.6, 0.2, 0.35}})
        CHECK(harmonic_defect(e.q, copy, x) <= 1e-4);
  }
}

TEST_CASE("kernel property and exponent symmetry on random spectra") {
  auto g = oracle::rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_spectrum(g);
    int J = max_mode_index(s);
    auto set = singular_exponents(s, J);
    auto op = straight_laplacian(s);
    const int n = s.dimension();
    for (std::size_t i = 1; i < set.exponents.size(); ++i) CHECK(set.exponents[i - 1].q <= set.exponents[i].q);
    for (const auto& e : set.exponents) {
      std::size_t pos = static_cast<std::size_t>(e.j - (s.closed() ? 0 : s.first_index()));
      double lam = s.eigenvalue(pos);
      CHECK(std::abs(conormal_symbol(op, complex(e.q), lam)) <= 1e-12 * (1 + std::abs(lam)));
      double partner = n - 1 - e.q;
      bool found = false;
      for (const auto& f : set.exponents)
        if (f.j == e.j && std::abs(f.q - partner) <= 1e-12 * (1 + std::abs(partner))) found = true;
      CHECK(found);
      CHECK(std::abs(e.q * partner - lam) <= 1e-10 * (1 + std::abs(lam)));
      CHECK((e.order == 2) == (e.sign == ExponentSign::both));
    }
  }
}

TEST_CASE("ellipticity: circle at beta = 1/2 against the probe-grid oracle") {
  auto op = straight_laplacian(circle_spectrum(6));
  auto rep = is_elliptic_on_line(op, WeightLine{0.5});
  CHECK(rep.elliptic);
  CHECK(rep.decided_exactly);
  CHECK_FALSE(rep.inconclusive);
  double oracle_min = INFINITY;
  for (double tau : default_tau_probe())
    for (int j = 0; j <= 6; ++j) {
      complex z{0.5, tau};
      oracle_min = std::min(oracle_min, std::abs(z * z - double(j * j)));
    }
  CHECK(oracle_min == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rep.margin == doctest::Approx(oracle_min).epsilon(1e-12));
  CHECK(rep.rescaled_margin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ellipticity fails on beta = 0 for every n") {
  for (int n : {1, 2, 3, 4}) {
    auto rep = is_elliptic_on_line(straight_laplacian(sphere_spectrum(n, 3)), WeightLine{0.0});
    CHECK_FALSE(rep.elliptic);
    CHECK(rep.margin <= 1e-12);
    CHECK_FALSE(is_elliptic_on_line(straight_laplacian(sphere_spectrum(n, 3)), WeightLine{n - 1.0}).elliptic);
  }
  CHECK_FALSE(is_elliptic_on_line(straight_laplacian(interval_dirichlet_spectrum(pi / 2, 3)), WeightLine{2.0}).elliptic);
  CHECK(is_elliptic_on_line(straight_laplacian(interval_dirichlet_spectrum(pi / 2, 3)), WeightLine{0.0}).elliptic);
}

TEST_CASE("ellipticity holds exactly off the exponent set") {
  auto g = oracle::rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_spectrum(g);
    auto op = straight_laplacian(s);
    auto set = singular_exponents(s, max_mode_index(s));
    auto v = set.values();
    // strictly between consecutive exponents
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, v.size() - 2)(g);
    if (v[i + 1] - v[i] < 1e-6) continue;
    double beta = oracle::uniform(g, v[i], v[i + 1]);
    if (std::min(beta - v[i], v[i + 1] - beta) < 1e-3) continue;
    auto rep = is_elliptic_on_line(op, WeightLine{beta});
    CHECK(rep.elliptic);
    CHECK(rep.margin > 0);
    CHECK_FALSE(is_elliptic_on_line(op, WeightLine{v[i]}).elliptic);
  }
}

TEST_CASE("ellipticity in matrix form") {
  auto base = sturm_liouville_discretize([](double) { return 1.0; }, 2 * pi, 64, BoundaryCondition::periodic);
  ConeMetric m(spectrum_from_matrix(base));
  m.set_base_operator(base);
  auto op = build_laplace_beltrami(m);
  std::vector<double> probe{-3.0, -0.5, 0.0, 0.25, 2.0};
  auto rep = is_elliptic_on_line(op, WeightLine{0.5}, probe);
  CHECK(rep.elliptic);
  CHECK_FALSE(rep.decided_exactly);
  // oracle: smallest singular value of the assembled matrix by Eigen's SVD
  double oracle_min = INFINITY;
  for (double tau : probe) {
    auto M = conormal_symbol_matrix(op, complex{0.5, tau});
    Eigen::MatrixXcd A(base.size, base.size);
    for (std::size_t i = 0; i < base.size; ++i)
      for (std::size_t j = 0; j < base.size; ++j) A(i, j) = M[i * base.size + j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    oracle_min = std::min(oracle_min, svd.singularValues().minCoeff());
  }
  CHECK(rep.margin == doctest::Approx(oracle_min).epsilon(1e-8));
  auto zero_line = is_elliptic_on_line(op, WeightLine{0.0}, probe);
  CHECK_FALSE(zero_line.elliptic);
}

TEST_CASE("admissible weight intervals") {
  auto wedge = singular_exponents(interval_dirichlet_spectrum(pi / 2, 4), 4);
  auto iv = admissible_weight_intervals(wedge, -5, 5, 1);
  // cuts at gamma = 1 - q for q = 4, 2, -2 (q = -4 lands on the range end)
  REQUIRE(iv.size() == 4);
  CHECK(iv[0].lo == -5.0);
  CHECK_FALSE(iv[0].bounded_lo.has_value());
  CHECK(iv[0].hi == doctest::Approx(-3.0));
  CHECK(*iv[0].bounded_hi == doctest::Approx(4.0));
  // beta in (0, 2) sits inside the interval around gamma = 0, which runs from beta = 2 down to beta = -2
  CHECK(iv[2].lo == doctest::Approx(-1.0));
  CHECK(iv[2].hi == doctest::Approx(3.0));
  CHECK(*iv[2].bounded_lo == doctest::Approx(2.0));
  CHECK(*iv[2].bounded_hi == doctest::Approx(-2.0));
  CHECK(iv[3].hi == 5.0);

  auto none = admissible_weight_intervals(wedge, -0.5, 0.5, 1);
  REQUIRE(none.size() == 1);
  CHECK(none[0].lo == -0.5);
  CHECK(none[0].hi == 0.5);
  CHECK_FALSE(none[0].bounded_lo.has_value());
  CHECK_FALSE(none[0].bounded_hi.has_value());

  auto circ = admissible_weight_intervals(singular_exponents(circle_spectrum(1), 1), 0.5, 1.5, 1);
  REQUIRE(circ.size() == 2);
  CHECK(circ[0].hi == 1.0);
  CHECK(circ[1].lo == 1.0);
  CHECK(*circ[0].bounded_hi == 0.0);

  CHECK_THROWS_AS(admissible_weight_intervals(wedge, 1.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(admissible_weight_intervals(wedge, 2.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("every admissible gamma gives an elliptic line") {
  auto g = oracle::rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_spectrum(g);
    auto op = straight_laplacian(s);
    const int n = s.dimension();
    auto iv = admissible_weight_intervals(singular_exponents(s, max_mode_index(s)), -6, 6, n);
    for (const auto& I : iv) {
      double gamma = oracle::uniform(g, I.lo, I.hi);
      if (std::min(gamma - I.lo, I.hi - gamma) < 1e-9) continue;
      CHECK(is_elliptic_on_line(op, WeightLine::from_gamma(gamma, n)).elliptic);
    }
  }
}

TEST_CASE("application to singular powers and to zero") {
  auto g = oracle::rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = random_spectrum(g);
    auto op = straight_laplacian(s);
    auto set = singular_exponents(s, max_mode_index(s));
    for (const auto& e : set.exponents) {
      double lam = s.eigenvalue(static_cast<std::size_t>(e.j - (s.closed() ? 0 : s.first_index())));
      for (double t : {0.01, 0.5})
        CHECK(std::abs(apply_to_power(op, lam, e.q, t)) <= 1e-8 * (1 + std::abs(lam)) * std::pow(t, -2 - e.q));
    }
  }
  auto op = straight_laplacian(circle_spectrum(2));
  LogGrid grid(-6, 2, 512);
  PerModeFunction zero{{0.0, SampledFunction::zeros(grid)}, {-1.0, SampledFunction::zeros(grid)}};
  for (const auto& c : apply_cone_operator(op, zero)) CHECK(c.radial.max_abs() == 0.0);
}

TEST_CASE("finite-difference application converges on powers") {
  // interior error of the fourth-order stencil shrinks by ~16 per halving
  auto op = straight_laplacian(sphere_spectrum(2, 2));
  auto err = [&](std::size_t N) {
    LogGrid grid(-3, 0, N);
    const double q = 0.7, lam = -2.0;
    PerModeFunction u{{lam, SampledFunction::sample(grid, [&](double t) { return complex(std::pow(t, -q)); })}};
    auto v = apply_cone_operator(op, u);
    double worst = 0.0;
    for (std::size_t k = N / 4; k < 3 * N / 4; ++k)
      worst = std::max(worst, std::abs(v[0].radial.values[k] - apply_to_power(op, lam, q, grid.t(k))));
    return worst;
  };
  double e1 = err(129), e2 = err(257);
  CHECK(e2 <= 1e-5);
  CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("Mellin and finite-difference application agree") {
  // The Mellin route on line beta is an identity in the weighted space
  // e^{(beta + mu) s}; compared there, rounding amplified by e^{-beta s} t^{-mu}
  // in the decayed tail does not count against it.
  auto op = straight_laplacian(sphere_spectrum(3, 2));
  LogGrid grid(-10, 5, 2048);
  oracle::LogGaussian bump{-3.0, 0.8};
  PerModeFunction u;
  for (double lam : {0.0, -3.0, -8.0}) u.push_back({lam, SampledFunction::sample(grid, [&](double t) { return complex(bump(t)); })});
  for (double beta : {-1.0, 0.5, 2.0}) {
    auto a = apply_cone_operator(op, u);
    auto b = apply_cone_operator_mellin(op, u, WeightLine{beta});
    for (std::size_t i = 0; i < u.size(); ++i) {
      std::vector<complex> wa(grid.size()), wb(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) {
        double w = std::exp((beta + op.mu()) * grid.s(k));
        wa[k] = w * a[i].radial.values[k];
        wb[k] = w * b[i].radial.values[k];
      }
      CHECK(oracle::rel_inf(wb, wa) <= 1e-5);
    }
  }
  auto warped = build_laplace_beltrami(
      ConeMetric(sphere_spectrum(3, 2), ConformalWarp{[](double t) { return 1 + t; }, [](double) { return 1.0; }}));
  CHECK_FALSE(warped.t_independent());
  CHECK_THROWS_AS(apply_cone_operator_mellin(warped, u, WeightLine{0.5}), InvalidArgument);
}
