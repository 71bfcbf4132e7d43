#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pdem {

using cplx = std::complex<double>;

/// Uniformly spaced sample points a = x_0 < x_1 < ... < x_{n-1} = b.
class Grid {
 public:
  Grid(double a, double b, int n);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return n_; }
  double h() const { return h_; }

  double point(int i) const { return i == n_ - 1 ? b_ : a_ + i * h_; }
  std::vector<double> points() const;

  /// True when a == -b, so that x_{n-1-i} mirrors x_i.
  bool symmetric() const { return a_ == -b_; }

  /// Grid over the same interval with 2(n-1)+1 points.
  Grid refined() const { return Grid(a_, b_, 2 * n_ - 1); }

  bool operator==(const Grid& other) const = default;

 private:
  double a_;
  double b_;
  int n_;
  double h_;
};

Grid make_uniform_grid(double a, double b, int n);

/// Complex samples, one per grid point. All values are finite.
class ComplexField {
 public:
  ComplexField(Grid grid, std::vector<cplx> values);
  /// Field of zeros.
  explicit ComplexField(Grid grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  ComplexField operator+(const ComplexField& rhs) const;
  ComplexField operator-(const ComplexField& rhs) const;
  ComplexField operator*(cplx s) const;
  ComplexField conj() const;

  double max_abs() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// Second-order central differences; one-sided second-order stencils at both ends.
ComplexField central_derivative(const ComplexField& f);

/// Trapezoid antiderivative F with F(x0) = 0. The partial cell up to x0 is integrated
/// against the linear interpolant of f, so the result is exact for linear f.
ComplexField cumulative_integral(const ComplexField& f, double x0);

/// max_i |a_i - b_i| restricted to [trim, n - trim).
double max_abs_diff(const ComplexField& a, const ComplexField& b, int trim = 0);

}  // namespace pdem
