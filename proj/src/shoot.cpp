#include <algorithm>
#include <array>
#include <cmath>

#include "pdem/errors.hpp"
#include "pdem/spectra.hpp"

namespace pdem {

namespace {

// (psi, psi', d psi/dE, d psi'/dE) for psi'' = (V - E) psi.
using State = std::array<cplx, 4>;

State rhs(const State& y, cplx v, cplx e) {
  const cplx k = v - e;
  return {y[1], k * y[0], y[3], k * y[2] - y[0]};
}

State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

// RK4 from x0 to x1 in `steps` steps; rescales to keep magnitudes bounded (the
// mismatch ratio m / m' is invariant under a common factor).
State integrate(const std::function<cplx(double)>& v, cplx e, State y, double x0, double x1, int steps) {
  const double h = (x1 - x0) / steps;
  cplx v_lo = v(x0);
  for (int i = 0; i < steps; ++i) {
    const double x = x0 + i * h;
    const cplx v_mid = v(x + 0.5 * h);
    const cplx v_hi = v(i + 1 == steps ? x1 : x + h);
    const State k1 = rhs(y, v_lo, e);
    const State k2 = rhs(axpy(y, 0.5 * h, k1), v_mid, e);
    const State k3 = rhs(axpy(y, 0.5 * h, k2), v_mid, e);
    const State k4 = rhs(axpy(y, h, k3), v_hi, e);
    for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    v_lo = v_hi;
    const double size = std::abs(y[0]) + std::abs(y[1]);
    if (size > 1e100) {
      for (auto& c : y) c /= size;
    }
  }
  return y;
}

State initial_state(const ShootOptions& options, const std::function<cplx(double)>& v, cplx v_end, cplx e,
                    double x_end, double direction) {
  using End = ShootOptions::EndCondition;
  if (options.ends == End::regular_singular) {
    if (direction < 0.0) return {0.0, direction, 0.0, 0.0};
    // Frobenius start psi = x^s (1 + c x) for V = s(s-1)/x^2 + b/x + O(1); s and b come from
    // x^2 V sampled at a and 2a. Neither depends on E.
    const double a = x_end;
    const cplx w1 = v_end * a * a;
    const cplx w2 = v(2.0 * a) * 4.0 * a * a;
    const cplx w0 = 2.0 * w1 - w2;
    const cplx b = (w2 - w1) / a;
    cplx s = 0.5 + std::sqrt(0.25 + w0);
    if (s.real() < 0.5) s = 1.0 - s;
    const cplx c = b / (2.0 * s);
    return {1.0 + c * a, s / a + c * (s + 1.0), 0.0, 0.0};
  }
  if (options.ends == End::dirichlet) return {0.0, direction, 0.0, 0.0};
  // Decaying data psi ~ exp(kappa |x|) inward, kappa = sqrt(V(end) - E) with Re kappa > 0.
  cplx kappa = std::sqrt(v_end - e);
  if (kappa.real() < 0.0) kappa = -kappa;
  const cplx dkappa = -0.5 / kappa;
  return {1.0, direction * kappa, 0.0, direction * dkappa};
}

double default_match_point(const std::function<cplx(double)>& v, double a, double b) {
  constexpr int samples = 2001;
  double best_x = 0.5 * (a + b);
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = a + (b - a) * i / (samples - 1);
    const double re = v(x).real();
    if (re < best_v) {
      best_v = re;
      best_x = x;
    }
  }
  // Keep both integration legs nontrivial.
  const double margin = 0.1 * (b - a);
  return std::clamp(best_x, a + margin, b - margin);
}

}  // namespace

cplx refine_shoot(const std::function<cplx(double)>& v, cplx e0, double a, double b, const ShootOptions& options) {
  if (!(a < b)) throw DomainError("refine_shoot: empty interval");
  const double xm = options.match_point ? *options.match_point : default_match_point(v, a, b);
  if (!(xm > a && xm < b)) throw DomainError("refine_shoot: match point outside the interval");
  const int steps_left = std::max(10, static_cast<int>(std::lround(options.steps * (xm - a) / (b - a))));
  const int steps_right = std::max(10, options.steps - steps_left);
  const double basin = std::max(1.0, 0.5 * std::abs(e0));
  const cplx v_a = v(a);
  const cplx v_b = v(b);

  cplx e = e0;
  for (int it = 0; it < options.max_newton; ++it) {
    const State left = integrate(v, e, initial_state(options, v, v_a, e, a, 1.0), a, xm, steps_left);
    const State right = integrate(v, e, initial_state(options, v, v_b, e, b, -1.0), b, xm, steps_right);
    const cplx m = left[0] * right[1] - left[1] * right[0];
    const cplx dm = left[2] * right[1] + left[0] * right[3] - left[3] * right[0] - left[1] * right[2];
    const double scale = std::abs(left[0] * right[1]) + std::abs(left[1] * right[0]);
    if (std::abs(m) < options.tolerance * scale) return e;
    if (dm == cplx{}) throw ConvergenceError("refine_shoot: flat mismatch");
    const cplx step = m / dm;
    e -= step;
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()) || std::abs(e - e0) > basin) {
      throw BasinError("refine_shoot: iteration left the basin of the starting value");
    }
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(e))) return e;
  }
  throw ConvergenceError("refine_shoot: Newton budget exhausted");
}

}  // namespace pdem
