#include "pdem/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/operators.hpp"

namespace pdem {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_same_grid(const ComplexField& f, const DiracModel& model) {
  if (!(f.grid() == model.grid())) throw DimensionError("spinor and model live on different grids");
}

double interior_max(const std::vector<cplx>& r, int trim) {
  double best = 0.0;
  const int n = static_cast<int>(r.size());
  for (int i = trim; i < n - trim; ++i) best = std::max(best, std::abs(r[i]));
  return best;
}

double spinor_scale(const Spinor& s) { return std::max(s.phi.max_abs(), s.theta.max_abs()); }

ComplexField resample(const ComplexField& f, const Grid& coarse) {
  const Grid& g = f.grid();
  std::vector<cplx> out(static_cast<std::size_t>(coarse.n()));
  for (int i = 0; i < coarse.n(); ++i) {
    const double t = (coarse.point(i) - g.a()) / g.h();
    const int j = std::clamp(static_cast<int>(std::floor(t)), 0, g.n() - 2);
    const double w = t - j;
    out[i] = (1.0 - w) * f[j] + w * f[j + 1];
  }
  return ComplexField(coarse, std::move(out));
}

// Shifted inverse iteration converging to the eigenvalue closest to the starting shift.
// The shift is held for the first few steps so the iterate is dominated by the target
// mode before the shift starts following it.
std::pair<cplx, std::vector<cplx>> track_level(const BandedMatrix& a, cplx shift) {
  constexpr int kFixedSteps = 3;
  const int n = a.n();
  std::vector<cplx> x(static_cast<std::size_t>(n));
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto& xi : x) xi = unit(rng);
  cplx sigma = shift;
  const BandedLU fixed(a.shifted(-sigma));
  for (int it = 0; it < kFixedSteps; ++it) {
    fixed.solve(x);
    double nx = 0.0;
    for (const auto& xi : x) nx += std::norm(xi);
    nx = std::sqrt(nx);
    for (auto& xi : x) xi /= nx;
  }
  for (int it = 0; it < 40; ++it) {
    std::vector<cplx> y = x;
    BandedLU(a.shifted(-sigma)).solve(y);
    cplx yx{};
    double yy = 0.0;
    for (int i = 0; i < n; ++i) {
      yx += std::conj(y[i]) * x[i];
      yy += std::norm(y[i]);
    }
    const cplx mu = yx / yy;
    const double ny = std::sqrt(yy);
    for (int i = 0; i < n; ++i) x[i] = y[i] / ny;
    sigma += mu;
    if (std::abs(mu) <= 1e-14 * std::max(1.0, std::abs(sigma))) break;
  }
  return {sigma, x};
}

}  // namespace

ComplexField theta_from_phi(const ComplexField& phi, const DiracModel& model, double eps) {
  require_same_grid(phi, model);
  const ComplexField dphi = central_derivative(phi);
  const MassSamples s = model.mass.sample(phi.grid());
  std::vector<cplx> theta(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    theta[i] = (kI * dphi[i] + (eps - model.v[i]) * phi[i]) / s.mass[i];
  }
  return ComplexField(phi.grid(), std::move(theta));
}

double dirac_residual(const Spinor& spinor, const DiracModel& model, int trim) {
  require_same_grid(spinor.phi, model);
  require_same_grid(spinor.theta, model);
  const double scale = spinor_scale(spinor);
  if (scale == 0.0) return 0.0;
  const ComplexField dtheta = central_derivative(spinor.theta);
  const MassSamples s = model.mass.sample(model.grid());
  std::vector<cplx> r(spinor.phi.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = -kI * dtheta[i] + (spinor.eps - model.v[i]) * spinor.theta[i] - s.mass[i] * spinor.phi[i];
  }
  return interior_max(r, trim) / scale;
}

double dirac_residual_lower(const Spinor& spinor, const DiracModel& model, int trim) {
  require_same_grid(spinor.phi, model);
  require_same_grid(spinor.theta, model);
  const double scale = spinor_scale(spinor);
  if (scale == 0.0) return 0.0;
  const ComplexField dphi = central_derivative(spinor.phi);
  const MassSamples s = model.mass.sample(model.grid());
  std::vector<cplx> r(spinor.phi.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = kI * dphi[i] + (spinor.eps - model.v[i]) * spinor.phi[i] - s.mass[i] * spinor.theta[i];
  }
  return interior_max(r, trim) / scale;
}

std::pair<cplx, std::vector<cplx>> reduced_level(const DiracModel& model, double eps, int level_index,
                                                 const DiracOptions& options) {
  const Grid& g = model.grid();
  if (level_index < 0 || level_index >= g.n() - 2) throw DomainError("reduced_level: level index out of range");
  const Grid coarse = g.n() <= options.coarse_n ? g : Grid(g.a(), g.b(), options.coarse_n);
  const ComplexField v_coarse = coarse == g ? model.v : resample(model.v, coarse);
  EigOptions eig;
  eig.residuals = false;
  const Spectrum guess = eig_dense(discretize_dirac_reduced(model.mass, v_coarse, eps), eig);
  if (level_index >= static_cast<int>(guess.eigenvalues.size())) {
    throw DomainError("reduced_level: level index beyond the coarse spectrum");
  }
  const cplx shift = guess.eigenvalues[level_index];

  const DiscreteOperator op = discretize_dirac_reduced(model.mass, model.v, eps);
  const BandedMatrix block = op.spectral_block();
  auto [lambda, interior] = track_level(block, shift);
  std::vector<cplx> phi(static_cast<std::size_t>(g.n()), cplx{});
  std::copy(interior.begin(), interior.end(), phi.begin() + 1);
  return {lambda, std::move(phi)};
}

DiracSolution solve_dirac_energy(const DiracModel& model, int level_index, std::pair<double, double> bracket,
                                 const DiracOptions& options) {
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw BracketError("solve_dirac_energy: empty bracket");
  auto g_of = [&](double eps) { return reduced_level(model, eps, level_index, options).first.real() - eps * eps; };
  auto converged = [&](double g, double eps) { return std::abs(g) < options.tolerance * std::max(1.0, eps * eps); };

  double g_lo = g_of(lo);
  double g_hi = g_of(hi);
  if (g_lo * g_hi > 0.0) throw BracketError("solve_dirac_energy: g has no sign change on the bracket");

  double root = std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
  double g_root = std::min(std::abs(g_lo), std::abs(g_hi)) == std::abs(g_lo) ? g_lo : g_hi;
  double prev = root == lo ? hi : lo;
  double g_prev = root == lo ? g_hi : g_lo;
  int it = 0;
  while (!converged(g_root, root)) {
    if (++it > options.max_iterations) throw ConvergenceError("solve_dirac_energy: iteration budget exhausted");
    double next = g_root != g_prev ? root - g_root * (root - prev) / (g_root - g_prev) : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double g_next = g_of(next);
    if (g_next * g_lo < 0.0) {
      hi = next;
      g_hi = g_next;
    } else {
      lo = next;
      g_lo = g_next;
    }
    prev = root;
    g_prev = g_root;
    root = next;
    g_root = g_next;
    // Fall back to bisection when the secant stalls at one end of the bracket.
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(root))) break;
  }

  auto [lambda, phi_values] = reduced_level(model, root, level_index, options);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < phi_values.size(); ++i) {
    if (std::abs(phi_values[i]) > std::abs(phi_values[peak])) peak = i;
  }
  const cplx norm = phi_values[peak];
  for (auto& p : phi_values) p /= norm;

  ComplexField phi(model.grid(), std::move(phi_values));
  ComplexField theta = theta_from_phi(phi, model, root);
  DiracSolution out{root, Spinor{std::move(phi), std::move(theta), root}, lambda, lambda.real() - root * root, it};
  out.residual_upper = dirac_residual(out.spinor, model, options.trim);
  out.residual_lower = dirac_residual_lower(out.spinor, model, options.trim);
  return out;
}

}  // namespace pdem
