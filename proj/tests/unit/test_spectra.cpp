#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/models.hpp"
#include "pdem/operators.hpp"
#include "pdem/spectra.hpp"

using namespace pdem;

namespace {

constexpr cplx I{0.0, 1.0};

BandedMatrix two_by_two(cplx a, cplx b, cplx c, cplx d) {
  DenseMatrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return BandedMatrix::from_dense(m);
}

BandedMatrix toeplitz(int n, cplx sub, cplx diag, cplx super) {
  BandedMatrix m(n, 1, 1);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = diag;
    if (i > 0) m.at(i, i - 1) = sub;
    if (i + 1 < n) m.at(i, i + 1) = super;
  }
  return m;
}

// Closest eigenvalue distance, used for multiset comparisons.
double nearest(const std::vector<cplx>& set, cplx z) {
  double best = INFINITY;
  for (cplx w : set) best = std::min(best, std::abs(w - z));
  return best;
}

Spectrum raw_spectrum(std::vector<cplx> values) {
  Spectrum s;
  s.eigenvalues = std::move(values);
  s.residual_norms.assign(s.eigenvalues.size(), 0.0);
  return s;
}

}  // namespace

TEST_CASE("swap matrix has eigenvalues -1 and +1") {
  const Spectrum s = eig_dense(two_by_two(0.0, 1.0, 1.0, 0.0));
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues[0] - (-1.0)) < 1e-15);
  CHECK(std::abs(s.eigenvalues[1] - 1.0) < 1e-15);
}

TEST_CASE("[[ia, 1], [1, -ia]]: real pair for a = 0.5, conjugate pair for a = 2") {
  const Spectrum unbroken = eig_dense(two_by_two(0.5 * I, 1.0, 1.0, -0.5 * I));
  CHECK(std::abs(unbroken.eigenvalues[0] + std::sqrt(0.75)) < 1e-14);
  CHECK(std::abs(unbroken.eigenvalues[1] - std::sqrt(0.75)) < 1e-14);
  const Spectrum broken = eig_dense(two_by_two(2.0 * I, 1.0, 1.0, -2.0 * I));
  CHECK(std::abs(broken.eigenvalues[0] + I * std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(broken.eigenvalues[1] - I * std::sqrt(3.0)) < 1e-14);
  for (double r : broken.residual_norms) CHECK(r < 1e-12);
}

TEST_CASE("complex Toeplitz tridiagonal matches its closed-form spectrum") {
  const int n = 120;
  const cplx a(1.0, 0.5);
  const cplx b(2.0, 0.0);
  const cplx c(0.5, 0.0);
  const Spectrum s = eig_dense(toeplitz(n, c, a, b));
  REQUIRE(s.eigenvalues.size() == static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const cplx exact = a + 2.0 * std::sqrt(b * c) * std::cos(k * std::numbers::pi / (n + 1));
    CHECK(nearest(s.eigenvalues, exact) < 1e-10);
  }
  for (double r : s.residual_norms) CHECK(r <= 1e-8 * s.matrix_norm);
}

TEST_CASE("eigenvalues come sorted by real then imaginary part") {
  const Spectrum s = eig_dense(toeplitz(30, cplx(1.0, 0.2), cplx(0.0, 1.0), -1.0));
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
    const cplx p = s.eigenvalues[i - 1];
    const cplx q = s.eigenvalues[i];
    CHECK((p.real() < q.real() || (p.real() == q.real() && p.imag() <= q.imag())));
  }
}

TEST_CASE("upper triangular Hessenberg input returns its diagonal") {
  DenseMatrix h(3);
  h(0, 0) = 3.0;
  h(0, 1) = 7.0;
  h(1, 1) = cplx(0.0, -2.0);
  h(1, 2) = 1.0;
  h(2, 2) = -1.0;
  std::vector<cplx> ev = hessenberg_qr_eigenvalues(h);
  REQUIRE(ev.size() == 3);
  for (cplx z : {cplx(3.0), cplx(0.0, -2.0), cplx(-1.0)}) CHECK(nearest(ev, z) < 1e-14);
}

TEST_CASE("real tridiagonal fast path agrees with the dense solver") {
  const Grid g(-10.0, 10.0, 301);
  const ComplexField v = kernels::serial::sample(g, [](double x) { return cplx(-3.0 / std::pow(std::cosh(x), 2)); });
  const DiscreteOperator h = discretize_schrodinger_q(v);
  bool fast = false;
  const Spectrum a = eig_auto(h, {}, &fast);
  CHECK(fast);
  const Spectrum b = eig_dense(h);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-9 * (1.0 + std::abs(b.eigenvalues[i])));
  }
  // Nonsymmetric but sign-compatible off-diagonals still qualify.
  CHECK(eig_tridiagonal_real(toeplitz(10, 0.5, 1.0, 2.0)).has_value());
  CHECK_FALSE(eig_tridiagonal_real(toeplitz(10, -0.5, 1.0, 2.0)).has_value());
  CHECK_FALSE(eig_tridiagonal_real(toeplitz(10, 0.5, I, 2.0)).has_value());
}

TEST_CASE("adding cI shifts the classified spectrum by c") {
  const Grid g(-8.0, 8.0, 201);
  const ComplexField v = evaluate_model(PotentialModel::pt_poschl_teller(6.25, 2.5), g);
  const DiscreteOperator h = discretize_schrodinger_q(v);
  DiscreteOperator hs = h;
  hs.matrix = h.matrix.shifted(1.5);
  hs.matrix.at(0, 0) = 1.0;
  hs.matrix.at(g.n() - 1, g.n() - 1) = 1.0;
  const Spectrum a = classify_spectrum(eig_dense(h), 0.0, 1e-6);
  const Spectrum b = classify_spectrum(eig_dense(hs), 1.5, 1e-6);
  REQUIRE(a.real_levels.size() == b.real_levels.size());
  REQUIRE(a.real_levels.size() == 2);
  for (std::size_t i = 0; i < a.real_levels.size(); ++i) {
    CHECK(b.real_levels[i] - a.real_levels[i] == doctest::Approx(1.5).epsilon(1e-9));
  }
}

TEST_CASE("diagonal similarity leaves eigenvalues unchanged") {
  const int n = 40;
  BandedMatrix a(n, 1, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = a.col_begin(i); j < a.col_end(i); ++j) a.at(i, j) = cplx(std::sin(i + 2.0 * j), std::cos(3.0 * i - j));
  }
  BandedMatrix b = a;
  for (int i = 0; i < n; ++i) {
    const double wi = 1.0 + 0.05 * i;
    for (int j = b.col_begin(i); j < b.col_end(i); ++j) b.at(i, j) *= std::sqrt(wi / (1.0 + 0.05 * j));
  }
  const Spectrum sa = eig_dense(a);
  const Spectrum sb = eig_dense(b);
  for (cplx z : sa.eigenvalues) CHECK(nearest(sb.eigenvalues, z) < 1e-10);
}

TEST_CASE("PT-symmetric operator has a conjugation-closed spectrum") {
  const Grid g(-8.0, 8.0, 241);
  const ComplexField v = evaluate_model(PotentialModel::pt_poschl_teller(4.0, 10.0), g);
  const Spectrum s = eig_dense(discretize_schrodinger_q(v));
  for (cplx z : s.eigenvalues) CHECK(nearest(s.eigenvalues, std::conj(z)) < 1e-8 * (1.0 + std::abs(z)));
  const Spectrum c = classify_spectrum(s, 0.0, 1e-6);
  CHECK(c.real_levels.empty());
  REQUIRE_FALSE(c.complex_pairs.empty());
  for (const auto& p : c.complex_pairs) CHECK(p.partner.has_value());
}

TEST_CASE("backward errors stay below 1e-8 of the matrix norm") {
  const Grid g(-12.0, 12.0, 601);
  const Spectrum s = eig_dense(discretize_schrodinger_q(evaluate_model(PotentialModel::pseudo_pt(2.5), g)));
  REQUIRE(s.residual_norms.size() == s.eigenvalues.size());
  CHECK(s.matrix_norm > 0.0);
  for (double r : s.residual_norms) CHECK(r <= 1e-8 * s.matrix_norm);
}

TEST_CASE("dense solver refuses matrices above the cap") {
  EigOptions opt;
  opt.dimension_cap = 10;
  CHECK_THROWS_AS(eig_dense(toeplitz(11, 1.0, 0.0, 1.0), opt), DimensionError);
  CHECK_NOTHROW(eig_dense(toeplitz(10, 1.0, 0.0, 1.0), opt));
}

TEST_CASE("tiny imaginary parts classify as real") {
  const Spectrum s = classify_spectrum(raw_spectrum({cplx(1.0, 1e-12)}), 5.0, 1e-6);
  CHECK(s.real_levels == std::vector<double>{1.0});
  CHECK(s.complex_pairs.empty());
  CHECK(s.classified);
}

TEST_CASE("2 +/- i form one conjugate pair") {
  const Spectrum s = classify_spectrum(raw_spectrum({cplx(2.0, -1.0), cplx(2.0, 1.0)}), 5.0, 1e-6);
  CHECK(s.real_levels.empty());
  REQUIRE(s.complex_pairs.size() == 1);
  CHECK(s.complex_pairs[0].value == cplx(2.0, 1.0));
  CHECK(s.complex_pairs[0].partner == cplx(2.0, -1.0));
}

TEST_CASE("unpaired complex values are singletons") {
  const Spectrum s = classify_spectrum(raw_spectrum({cplx(2.0, 1.0), cplx(3.0, -0.5)}), 5.0, 1e-6);
  REQUIRE(s.complex_pairs.size() == 2);
  for (const auto& p : s.complex_pairs) CHECK_FALSE(p.partner.has_value());
}

TEST_CASE("threshold cut on the box spectrum keeps 1 and 4") {
  const Spectrum s = classify_spectrum(raw_spectrum({1.0, 4.0, 9.0, 16.0}), 5.0, 1e-6);
  CHECK(s.real_levels == std::vector<double>{1.0, 4.0});
  CHECK(s.continuum_count == 2);
  CHECK(default_im_tol(0.0) == 1e-6);
  CHECK(default_im_tol(110.25) == doctest::Approx(1.1025e-4));
}

TEST_CASE("spectrum comparison examples") {
  AnalyticSpectrum two;
  two.levels = {{0, std::nullopt, -4.0}, {1, std::nullopt, -1.0}};
  const auto numeric = [](std::vector<cplx> v) { return classify_spectrum(raw_spectrum(std::move(v)), 0.0, 1e-6); };

  const SpectrumComparison ok = spectrum_compare(numeric({-4.001, -0.9998}), two, 0.01, 0.0);
  CHECK(ok.pass);
  REQUIRE(ok.matches.size() == 2);
  CHECK(ok.matches[0].abs_error == doctest::Approx(0.001));

  const SpectrumComparison empty = spectrum_compare(numeric({}), AnalyticSpectrum{}, 0.01, 0.0);
  CHECK(empty.pass);

  const SpectrumComparison missing = spectrum_compare(numeric({-4.0}), two, 0.01, 0.0);
  CHECK_FALSE(missing.pass);
  CHECK(missing.unmatched_analytic == std::vector<double>{-1.0});

  const SpectrumComparison extra = spectrum_compare(numeric({-4.0, -2.5, -1.0}), two, 0.01, 0.0);
  CHECK_FALSE(extra.pass);
  CHECK(extra.unmatched_numeric == std::vector<double>{-2.5});
}

TEST_CASE("shooting refines the box level 0.9 to 1") {
  const cplx e = refine_shoot([](double) { return cplx(0.0); }, 0.9, 0.0, std::numbers::pi);
  CHECK(std::abs(e - 1.0) < 1e-8);
}

TEST_CASE("shooting and the dense solver agree on the contour ground state") {
  // pseudo_pt itself has no level below threshold; the V1 = V2^2 member of the
  // contour Poschl-Teller family carries the -4, -1 tower.
  const PotentialModel m = PotentialModel::pt_poschl_teller(6.25, 2.5);
  const Grid g(-12.0, 12.0, 801);
  const Spectrum s = classify_spectrum(eig_dense(discretize_schrodinger_q(evaluate_model(m, g))), 0.0, 1e-6);
  REQUIRE_FALSE(s.real_levels.empty());
  const double dense = s.real_levels.front();
  ShootOptions opt;
  opt.ends = ShootOptions::EndCondition::decaying;
  const cplx shot = refine_shoot([&](double x) { return m(x); }, dense, -12.0, 12.0, opt);
  CHECK(std::abs(shot - dense) <= 1e-4 * std::abs(dense));
  CHECK(std::abs(shot - (-4.0)) < 1e-6);
}

TEST_CASE("shooting finds the Eckart zero mode from 0.1") {
  const PotentialModel m = PotentialModel::eckart_hermitian(2.0, 25.0);
  ShootOptions opt;
  opt.ends = ShootOptions::EndCondition::regular_singular;
  opt.steps = 200000;
  const cplx e = refine_shoot([&](double q) { return m(q); }, 0.1, 1e-3, 10.0, opt);
  CHECK(std::abs(e) < 1e-6);
  // A plain Dirichlet wall at the same point shifts the level by about 1e6 q^3.
  opt.ends = ShootOptions::EndCondition::dirichlet;
  const cplx walled = refine_shoot([&](double q) { return m(q); }, 0.1, 1e-3, 10.0, opt);
  CHECK(walled.real() > 1e-4);
}

TEST_CASE("shooting reports runaway iterations") {
  ShootOptions opt;
  opt.max_newton = 2;
  opt.tolerance = 1e-300;
  CHECK_THROWS_AS(refine_shoot([](double) { return cplx(0.0); }, 2.4, 0.0, std::numbers::pi, opt), Error);
}
