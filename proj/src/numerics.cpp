#include "pdem/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "pdem/errors.hpp"

namespace pdem {

Grid::Grid(double a, double b, int n) : a_(a), b_(b), n_(n), h_(0.0) {
  if (!(a < b)) throw DomainError("grid: need a < b");
  if (n < 3) throw DomainError("grid: need at least 3 points");
  h_ = (b - a) / (n - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[i] = point(i);
  return out;
}

Grid make_uniform_grid(double a, double b, int n) { return Grid(a, b, n); }

ComplexField::ComplexField(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.n())) {
    throw DimensionError("field: value count does not match grid");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("field: non-finite sample (singular point on grid?)");
    }
  }
}

ComplexField::ComplexField(Grid grid) : grid_(grid), values_(static_cast<std::size_t>(grid.n())) {}

ComplexField ComplexField::operator+(const ComplexField& rhs) const {
  if (!(grid_ == rhs.grid_)) throw DimensionError("field: grid mismatch");
  std::vector<cplx> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + rhs.values_[i];
  return {grid_, std::move(out)};
}

ComplexField ComplexField::operator-(const ComplexField& rhs) const {
  if (!(grid_ == rhs.grid_)) throw DimensionError("field: grid mismatch");
  std::vector<cplx> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] - rhs.values_[i];
  return {grid_, std::move(out)};
}

ComplexField ComplexField::operator*(cplx s) const {
  std::vector<cplx> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * s;
  return {grid_, std::move(out)};
}

ComplexField ComplexField::conj() const {
  std::vector<cplx> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(values_[i]);
  return {grid_, std::move(out)};
}

double ComplexField::max_abs() const {
  double best = 0.0;
  for (const auto& v : values_) best = std::max(best, std::abs(v));
  return best;
}

ComplexField central_derivative(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const double inv2h = 1.0 / (2.0 * g.h());
  std::vector<cplx> d(static_cast<std::size_t>(n));
  for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
  return {g, std::move(d)};
}

ComplexField cumulative_integral(const ComplexField& f, double x0) {
  const Grid& g = f.grid();
  if (x0 < g.a() || x0 > g.b()) throw DomainError("cumulative_integral: anchor outside grid");
  const int n = g.n();
  const double h = g.h();
  std::vector<cplx> c(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) c[i] = c[i - 1] + 0.5 * h * (f[i - 1] + f[i]);

  int k = static_cast<int>(std::floor((x0 - g.a()) / h));
  k = std::clamp(k, 0, n - 2);
  const double dx = x0 - g.point(k);
  const double t = dx / h;
  const cplx f0 = f[k] + t * (f[k + 1] - f[k]);
  const cplx anchor = c[k] + 0.5 * dx * (f[k] + f0);

  for (auto& v : c) v -= anchor;
  return {g, std::move(c)};
}

double max_abs_diff(const ComplexField& a, const ComplexField& b, int trim) {
  if (!(a.grid() == b.grid())) throw DimensionError("field: grid mismatch");
  double best = 0.0;
  const int n = static_cast<int>(a.size());
  for (int i = trim; i < n - trim; ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

}  // namespace pdem
