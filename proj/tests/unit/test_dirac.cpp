#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdem/dirac.hpp"
#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/operators.hpp"

using namespace pdem;

namespace {

constexpr cplx I{0.0, 1.0};

DiracModel free_model(const Grid& g, double m0) { return {ComplexField(g), MassProfile::constant(m0)}; }

DiracModel well_model(const Grid& g, double depth, double width, double shift = 0.0) {
  return {kernels::serial::sample(g, [=](double x) { return cplx(shift - depth / std::pow(std::cosh(x / width), 2)); }),
          MassProfile::constant(1.0)};
}

// Oracle: lowest-Re eigenvalues of the reduced operator from the dense solver, no tracking.
double g_dense(const DiracModel& m, double eps, int k) {
  const Spectrum s = eig_dense(discretize_dirac_reduced(m.mass, m.v, eps), {2000, false});
  return s.eigenvalues[k].real() - eps * eps;
}

// Oracle: scan eps on a fine lattice, then bisect the first sign change of g_k.
std::optional<double> scan_root(const DiracModel& m, int k, double lo, double hi, int steps) {
  double prev_e = lo;
  double prev_g = g_dense(m, lo, k);
  for (int i = 1; i <= steps; ++i) {
    const double e = lo + (hi - lo) * i / steps;
    const double ge = g_dense(m, e, k);
    if (prev_g * ge <= 0.0) {
      double a = prev_e;
      double b = e;
      double ga = prev_g;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g_dense(m, mid, k);
        if (ga * gm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          ga = gm;
        }
      }
      return 0.5 * (a + b);
    }
    prev_e = e;
    prev_g = ge;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("zero upper component gives zero lower component") {
  const Grid g(-1.0, 1.0, 21);
  const DiracModel m = free_model(g, 1.0);
  CHECK(theta_from_phi(ComplexField(g), m, 0.7).max_abs() == 0.0);
}

TEST_CASE("plane wave lower component is (eps - k_h)/m0 times phi") {
  const Grid g(0.0, 10.0, 1001);
  const double k = 1.3;
  const double m0 = 0.8;
  const double eps = 2.0;
  const DiracModel m = free_model(g, m0);
  const ComplexField phi = kernels::serial::sample(g, [k](double x) { return std::exp(I * k * x); });
  const ComplexField theta = theta_from_phi(phi, m, eps);
  // Central differences see the wavenumber sin(kh)/h.
  const double kh = std::sin(k * g.h()) / g.h();
  for (int i = 1; i < g.n() - 1; ++i) CHECK(std::abs(theta[i] - (eps - kh) / m0 * phi[i]) < 1e-12);
  // And the continuum value to O(h^2).
  CHECK(std::abs(theta[500] - (eps - k) / m0 * phi[500]) < 1e-4);
}

TEST_CASE("plane wave on the discrete mass shell has zero residual") {
  const Grid g(0.0, 10.0, 1001);
  const double k = 1.3;
  const double m0 = 0.8;
  const double kh = std::sin(k * g.h()) / g.h();
  const DiracModel m = free_model(g, m0);
  const ComplexField phi = kernels::serial::sample(g, [k](double x) { return std::exp(I * k * x); });
  for (double sign : {1.0, -1.0}) {
    const double eps = sign * std::sqrt(kh * kh + m0 * m0);
    const Spinor s{phi, theta_from_phi(phi, m, eps), eps};
    // Entries of size 1/h cancel; rounding leaves ~1e-11.
    CHECK(dirac_residual(s, m) < 1e-10);
    CHECK(dirac_residual_lower(s, m) < 1e-10);
  }
}

TEST_CASE("plane wave off the mass shell leaves |eps^2 - k^2 - m0^2|/m0") {
  const Grid g(0.0, 10.0, 1001);
  const double k = 1.3;
  const double m0 = 0.8;
  const double eps = 2.5;
  const double kh = std::sin(k * g.h()) / g.h();
  const DiracModel m = free_model(g, m0);
  const ComplexField phi = kernels::serial::sample(g, [k](double x) { return std::exp(I * k * x); });
  const Spinor s{phi, theta_from_phi(phi, m, eps), eps};
  const double scale = std::max(1.0, std::abs(eps - kh) / m0);
  CHECK(dirac_residual(s, m) == doctest::Approx(std::abs(eps * eps - kh * kh - m0 * m0) / m0 / scale).epsilon(1e-9));
}

TEST_CASE("lower component is linear in the upper one") {
  const Grid g(-3.0, 3.0, 61);
  const DiracModel m = well_model(g, 0.5, 1.0);
  const ComplexField a = kernels::serial::sample(g, [](double x) { return cplx(std::exp(-x * x), x); });
  const ComplexField b = kernels::serial::sample(g, [](double x) { return cplx(std::cos(x), 0.0); });
  const cplx s(0.4, -2.0);
  const ComplexField lhs = theta_from_phi(a * s + b, m, 0.6);
  const ComplexField rhs = theta_from_phi(a, m, 0.6) * s + theta_from_phi(b, m, 0.6);
  CHECK(max_abs_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("spinors on a foreign grid are rejected") {
  const DiracModel m = free_model(Grid(0.0, 1.0, 11), 1.0);
  CHECK_THROWS_AS(theta_from_phi(ComplexField(Grid(0.0, 1.0, 12)), m, 0.5), DimensionError);
}

TEST_CASE("free box: eps = sqrt(E_box + m0^2)") {
  const Grid g(0.0, std::numbers::pi, 201);
  const double m0 = 1.0;
  const DiracModel m = free_model(g, m0);
  const auto box = [&](int k) { return 4.0 / (g.h() * g.h()) * std::pow(std::sin(k * g.h() / 2.0), 2); };
  const DiracSolution s0 = solve_dirac_energy(m, 0, {m0, 2.0 * m0});
  CHECK(s0.eps == doctest::Approx(std::sqrt(box(1) + m0 * m0)).epsilon(1e-8));
  const DiracSolution s1 = solve_dirac_energy(m, 1, {2.0, 3.0});
  CHECK(s1.eps == doctest::Approx(std::sqrt(box(2) + m0 * m0)).epsilon(1e-8));
  CHECK(std::abs(s0.g) < 1e-7);
}

TEST_CASE("reduced levels on a fine grid follow their own index") {
  // odd, slowly varying levels are nearly orthogonal to smooth start vectors
  const Grid g(-15.0, 15.0, 1201);
  const auto h = g.h();
  for (int j = 1; j <= 3; ++j) {
    const double k = j * std::numbers::pi / 30.0;
    const double box = 2.0 * (1.0 - std::cos(k * h)) / (h * h);
    const auto [lambda, phi] = reduced_level(free_model(g, 1.0), 1.01, j - 1);
    CHECK(lambda.real() - 1.0 == doctest::Approx(box).epsilon(1e-9));
  }
}

TEST_CASE("secant solve matches a dense eps-scan with bisection") {
  const Grid g(-10.0, 10.0, 201);
  const DiracModel m = well_model(g, 0.5, 1.0);
  const std::optional<double> oracle = scan_root(m, 0, 1e-3, 1.0 - 1e-6, 40);
  REQUIRE(oracle.has_value());
  const DiracSolution s = solve_dirac_energy(m, 0, {1e-3, 1.0 - 1e-6});
  CHECK(s.eps == doctest::Approx(*oracle).epsilon(1e-7));
  // Weak binding: just below the rest mass.
  CHECK(s.eps > 0.7);
  CHECK(s.eps < 1.0);
  CHECK(std::abs(s.lambda.imag()) < 1e-8);
}

TEST_CASE("deeper well: the excited level lies above the ground level") {
  const Grid g(-10.0, 10.0, 201);
  const DiracModel m = well_model(g, 1.5, 2.0);
  const std::optional<double> e0 = scan_root(m, 0, -1.0 + 1e-6, 1.0 - 1e-6, 40);
  const std::optional<double> e1 = scan_root(m, 1, -1.0 + 1e-6, 1.0 - 1e-6, 40);
  REQUIRE(e0.has_value());
  REQUIRE(e1.has_value());
  CHECK(*e0 < *e1);
  const DiracSolution s0 = solve_dirac_energy(m, 0, {*e0 - 0.05, *e0 + 0.05});
  const DiracSolution s1 = solve_dirac_energy(m, 1, {*e1 - 0.05, *e1 + 0.05});
  CHECK(s0.eps == doctest::Approx(*e0).epsilon(1e-7));
  CHECK(s1.eps == doctest::Approx(*e1).epsilon(1e-7));
}

TEST_CASE("shifting v and eps by the same constant leaves g unchanged") {
  const Grid g(-10.0, 10.0, 201);
  const double c = 0.3;
  const DiracModel base = well_model(g, 0.5, 1.0);
  const DiracModel shifted = well_model(g, 0.5, 1.0, c);
  for (double eps : {0.2, 0.6, 0.9}) {
    const double g0 = reduced_level(base, eps, 0).first.real() - eps * eps;
    const double g1 = reduced_level(shifted, eps + c, 0).first.real() - (eps + c) * (eps + c);
    CHECK(std::abs(g1 - g0) < 1e-9);
  }
  const DiracSolution a = solve_dirac_energy(base, 0, {1e-3, 1.0 - 1e-6});
  const DiracSolution b = solve_dirac_energy(shifted, 0, {1e-3 + c, 1.0 - 1e-6 + c});
  CHECK(b.eps - a.eps == doctest::Approx(c).epsilon(1e-7));
}

TEST_CASE("bound-state residual falls at second order") {
  const DiracSolution a = solve_dirac_energy(well_model(Grid(-15.0, 15.0, 601), 0.5, 1.0), 0, {1e-3, 1.0 - 1e-6});
  const DiracSolution b = solve_dirac_energy(well_model(Grid(-15.0, 15.0, 1201), 0.5, 1.0), 0, {1e-3, 1.0 - 1e-6});
  CHECK(a.residual_upper / b.residual_upper >= 3.5);
  CHECK(a.residual_upper / b.residual_upper <= 4.5);
  CHECK(b.residual_upper <= 1e-3);
  // Lower spinor decays at both ends.
  CHECK(std::abs(b.spinor.theta[3]) < 1e-3);
  CHECK(std::abs(b.spinor.theta[1197]) < 1e-3);
}

TEST_CASE("bracket without a sign change is an error") {
  const DiracModel m = free_model(Grid(0.0, std::numbers::pi, 101), 1.0);
  CHECK_THROWS_AS(solve_dirac_energy(m, 0, {2.0, 3.0}), BracketError);
  CHECK_THROWS_AS(solve_dirac_energy(m, 0, {2.0, 1.0}), BracketError);
}
