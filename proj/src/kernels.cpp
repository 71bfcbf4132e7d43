#include "pdem/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "pdem/errors.hpp"

namespace pdem::kernels {

namespace {

void check_same_size(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.n() != b.n()) throw DimensionError("kernels: matrix size mismatch");
}

void product_row(const BandedMatrix& a, const BandedMatrix& b, BandedMatrix& c, int i) {
  for (int j = c.col_begin(i); j < c.col_end(i); ++j) {
    const int k_lo = std::max({a.col_begin(i), j - b.ku(), 0});
    const int k_hi = std::min({a.col_end(i), j + b.kl() + 1, a.n()});
    cplx s{};
    for (int k = k_lo; k < k_hi; ++k) s += a(i, k) * b(k, j);
    c.at(i, j) = s;
  }
}

cplx apply_row(const BandedMatrix& a, std::span<const cplx> x, int i) {
  cplx s{};
  for (int j = a.col_begin(i); j < a.col_end(i); ++j) s += a(i, j) * x[j];
  return s;
}

double row_max_diff(const BandedMatrix& a, const BandedMatrix& b, int i, int lo, int hi) {
  const int j_lo = std::max(std::min(a.col_begin(i), b.col_begin(i)), lo);
  const int j_hi = std::min(std::max(a.col_end(i), b.col_end(i)), hi);
  double best = 0.0;
  for (int j = j_lo; j < j_hi; ++j) best = std::max(best, std::abs(a(i, j) - b(i, j)));
  return best;
}

double row_max(const BandedMatrix& a, int i, int lo, int hi) {
  double best = 0.0;
  for (int j = std::max(a.col_begin(i), lo); j < std::min(a.col_end(i), hi); ++j) {
    best = std::max(best, std::abs(a(i, j)));
  }
  return best;
}

}  // namespace

namespace serial {

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b) {
  check_same_size(a, b);
  BandedMatrix c(a.n(), a.kl() + b.kl(), a.ku() + b.ku());
  for (int i = 0; i < a.n(); ++i) product_row(a, b, c, i);
  return c;
}

std::vector<cplx> apply(const BandedMatrix& a, std::span<const cplx> x) {
  if (static_cast<int>(x.size()) != a.n()) throw DimensionError("kernels::apply: size mismatch");
  std::vector<cplx> y(x.size());
  for (int i = 0; i < a.n(); ++i) y[i] = apply_row(a, x, i);
  return y;
}

double max_abs_diff(const BandedMatrix& a, const BandedMatrix& b, int lo, int hi) {
  check_same_size(a, b);
  double best = 0.0;
  for (int i = lo; i < hi; ++i) best = std::max(best, row_max_diff(a, b, i, lo, hi));
  return best;
}

double max_abs(const BandedMatrix& a, int lo, int hi) {
  double best = 0.0;
  for (int i = lo; i < hi; ++i) best = std::max(best, row_max(a, i, lo, hi));
  return best;
}

}  // namespace serial

namespace parallel {

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b) {
  check_same_size(a, b);
  BandedMatrix c(a.n(), a.kl() + b.kl(), a.ku() + b.ku());
  const int n = a.n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) product_row(a, b, c, i);
  return c;
}

std::vector<cplx> apply(const BandedMatrix& a, std::span<const cplx> x) {
  if (static_cast<int>(x.size()) != a.n()) throw DimensionError("kernels::apply: size mismatch");
  std::vector<cplx> y(x.size());
  const int n = a.n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = apply_row(a, x, i);
  return y;
}

double max_abs_diff(const BandedMatrix& a, const BandedMatrix& b, int lo, int hi) {
  check_same_size(a, b);
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (int i = lo; i < hi; ++i) best = std::max(best, row_max_diff(a, b, i, lo, hi));
  return best;
}

double max_abs(const BandedMatrix& a, int lo, int hi) {
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (int i = lo; i < hi; ++i) best = std::max(best, row_max(a, i, lo, hi));
  return best;
}

}  // namespace parallel

}  // namespace pdem::kernels
