#pragma once

// Data-parallel building blocks. Each kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; both produce
// bitwise-identical results (no reassociation across threads).

#include <span>
#include <vector>

#include "pdem/banded.hpp"
#include "pdem/numerics.hpp"

namespace pdem::kernels {

namespace serial {

template <typename Fn>
ComplexField sample(const Grid& grid, Fn&& fn) {
  std::vector<cplx> values(static_cast<std::size_t>(grid.n()));
  for (int i = 0; i < grid.n(); ++i) values[i] = fn(grid.point(i));
  return ComplexField(grid, std::move(values));
}

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);
std::vector<cplx> apply(const BandedMatrix& a, std::span<const cplx> x);
/// max |a_ij - b_ij| over the principal block [lo, hi) x [lo, hi).
double max_abs_diff(const BandedMatrix& a, const BandedMatrix& b, int lo, int hi);
double max_abs(const BandedMatrix& a, int lo, int hi);

}  // namespace serial

namespace parallel {

template <typename Fn>
ComplexField sample(const Grid& grid, Fn&& fn) {
  std::vector<cplx> values(static_cast<std::size_t>(grid.n()));
  const int n = grid.n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) values[i] = fn(grid.point(i));
  return ComplexField(grid, std::move(values));
}

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);
std::vector<cplx> apply(const BandedMatrix& a, std::span<const cplx> x);
double max_abs_diff(const BandedMatrix& a, const BandedMatrix& b, int lo, int hi);
double max_abs(const BandedMatrix& a, int lo, int hi);

}  // namespace parallel

using parallel::apply;
using parallel::max_abs;
using parallel::max_abs_diff;
using parallel::multiply;
using parallel::sample;

}  // namespace pdem::kernels
