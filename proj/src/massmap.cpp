#include "pdem/massmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"

namespace pdem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear interpolation of samples ys over increasing abscissae xs.
cplx interpolate(std::span<const double> xs, std::span<const cplx> ys, double x) {
  const double slack = 1e-12 * std::max({1.0, std::abs(xs.front()), std::abs(xs.back())});
  if (x < xs.front() - slack || x > xs.back() + slack) throw DomainError("interpolation point outside range");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  k = std::min(k, xs.size() - 2);
  const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
  return ys[k] + t * (ys[k + 1] - ys[k]);
}

}  // namespace

MassProfile MassProfile::constant(double m0) {
  if (!(m0 > 0.0)) throw DomainError("constant mass must be positive");
  return MassProfile(Kind::constant, m0, -kInf, kInf);
}

MassProfile MassProfile::rational_x2m1(double m0) {
  if (!(m0 > 0.0)) throw DomainError("mass scale must be positive");
  return MassProfile(Kind::rational_x2m1, m0, 1.0, kInf);
}

MassProfile MassProfile::custom(const Grid& grid, std::vector<double> mass) {
  if (mass.size() != static_cast<std::size_t>(grid.n())) throw DimensionError("custom mass: sample count");
  for (double m : mass) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("custom mass must be positive and finite");
  }
  MassProfile out(Kind::custom, 1.0, grid.a(), grid.b());
  out.custom_points_ = grid.points();
  out.custom_mass_ = std::move(mass);
  return out;
}

double MassProfile::mass(double x) const {
  switch (kind_) {
    case Kind::constant:
      return m0_;
    case Kind::rational_x2m1:
      return m0_ * 2.0 * x / (x * x - 1.0);
    case Kind::custom: {
      auto it = std::find(custom_points_.begin(), custom_points_.end(), x);
      if (it == custom_points_.end()) throw DomainError("custom mass queried off its grid");
      return custom_mass_[static_cast<std::size_t>(it - custom_points_.begin())];
    }
  }
  return 0.0;
}

double MassProfile::dmass(double x) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::rational_x2m1: {
      const double d = x * x - 1.0;
      return -2.0 * m0_ * (x * x + 1.0) / (d * d);
    }
    case Kind::custom:
      throw DomainError("custom mass has no closed-form derivative; use sample()");
  }
  return 0.0;
}

double MassProfile::integral(double from, double to) const {
  switch (kind_) {
    case Kind::constant:
      return m0_ * (to - from);
    case Kind::rational_x2m1:
      if (!(from > lo_ && to > lo_)) throw DomainError("mass integral leaves the domain");
      return m0_ * std::log((to * to - 1.0) / (from * from - 1.0));
    case Kind::custom:
      break;
  }
  throw DomainError("custom mass has no closed-form integral");
}

MassSamples MassProfile::sample(const Grid& grid) const {
  if (grid.a() <= lo_ || grid.b() >= hi_) {
    if (kind_ != Kind::custom || grid.a() < lo_ || grid.b() > hi_) {
      throw DomainError("grid leaves the mass domain");
    }
  }
  const auto n = static_cast<std::size_t>(grid.n());
  MassSamples s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  if (kind_ == Kind::custom) {
    if (custom_points_ != grid.points()) throw DimensionError("custom mass sampled on a different grid");
    std::vector<cplx> m(custom_mass_.begin(), custom_mass_.end());
    const ComplexField dm = central_derivative(ComplexField(grid, std::move(m)));
    for (std::size_t i = 0; i < n; ++i) {
      s.mass[i] = custom_mass_[i];
      s.dmass[i] = dm[i].real();
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.point(static_cast<int>(i));
      s.mass[i] = mass(x);
      s.dmass[i] = dmass(x);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.mass[i] > 0.0) || !std::isfinite(s.mass[i])) throw DomainError("mass is not positive on the grid");
    s.mu[i] = 1.0 / s.mass[i];
    s.dmu[i] = -s.dmass[i] / (s.mass[i] * s.mass[i]);
  }
  return s;
}

double Chart::inverse(double qv) const {
  std::vector<cplx> xs(grid_x.n());
  for (int i = 0; i < grid_x.n(); ++i) xs[i] = grid_x.point(i);
  return interpolate(q, xs, qv).real();
}

double Chart::forward(double x) const {
  const std::vector<double> xs = grid_x.points();
  std::vector<cplx> qs(q.begin(), q.end());
  return interpolate(xs, qs, x).real();
}

Chart chart_from_mass(const MassProfile& mass, const Grid& grid_x, double x0) {
  const MassSamples s = mass.sample(grid_x);
  std::vector<cplx> m(s.mass.begin(), s.mass.end());
  const bool inside = x0 >= grid_x.a() && x0 <= grid_x.b();
  const double offset = inside ? 0.0 : mass.integral(x0, grid_x.a());
  const ComplexField q = cumulative_integral(ComplexField(grid_x, std::move(m)), inside ? x0 : grid_x.a()) +
                         ComplexField(grid_x, std::vector<cplx>(grid_x.n(), offset));
  Chart chart{grid_x, std::vector<double>(q.size()), std::vector<double>(q.size()), x0};
  for (std::size_t i = 0; i < q.size(); ++i) {
    chart.q[i] = q[i].real();
    chart.f[i] = std::exp(chart.q[i]);
    if (i > 0 && !(chart.q[i] > chart.q[i - 1])) throw MonotonicityError("chart q(x) is not strictly increasing");
  }
  return chart;
}

ComplexField pullback_potential(const ClosedFormPotential& v_eff, const Chart& chart) {
  std::vector<cplx> out(chart.q.size());
  for (std::size_t i = 0; i < chart.q.size(); ++i) {
    const double qv = chart.q[i];
    for (double s : v_eff.singular_points) {
      if (std::abs(qv - s) <= 1e-12 * std::max(1.0, std::abs(s))) {
        throw DomainError("pullback: q(x) hits a singularity of the potential");
      }
    }
    out[i] = v_eff.of_f ? v_eff.of_f(chart.f[i]) : v_eff.of_q(qv);
  }
  return ComplexField(chart.grid_x, std::move(out));
}

ComplexField interpolate_to_x(const ComplexField& v_q, const Chart& chart) {
  const std::vector<double> qs = v_q.grid().points();
  std::vector<cplx> out(chart.q.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = interpolate(qs, v_q.values(), chart.q[i]);
  return ComplexField(chart.grid_x, std::move(out));
}

ComplexField interpolate_to_q(const ComplexField& v_x, const Chart& chart, const Grid& q_grid) {
  const std::vector<double> xs = chart.grid_x.points();
  std::vector<cplx> out(static_cast<std::size_t>(q_grid.n()));
  for (int j = 0; j < q_grid.n(); ++j) out[j] = interpolate(xs, v_x.values(), chart.inverse(q_grid.point(j)));
  return ComplexField(q_grid, std::move(out));
}

FrameData frame_equivalence_data(const MassProfile& mass, const Grid& grid_x, double x0,
                                 const ClosedFormPotential& v_eff) {
  Chart chart = chart_from_mass(mass, grid_x, x0);
  const Grid q_grid(chart.q_lo(), chart.q_hi(), grid_x.n());
  ComplexField v_x = pullback_potential(v_eff, chart);
  ComplexField v_q = kernels::sample(q_grid, [&](double qv) { return v_eff.of_q(qv); });
  return FrameData{std::move(chart), q_grid, std::move(v_x), std::move(v_q)};
}

}  // namespace pdem
