#include "pdem/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdem/errors.hpp"

namespace pdem {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), data_(static_cast<std::size_t>(n) * (kl + ku + 1)) {
  if (n < 0 || kl < 0 || ku < 0) throw DimensionError("BandedMatrix: negative dimension or bandwidth");
}

BandedMatrix BandedMatrix::from_dense(const DenseMatrix& dense) {
  const int n = dense.n();
  int kl = 0;
  int ku = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dense(i, j) != cplx{}) {
        kl = std::max(kl, i - j);
        ku = std::max(ku, j - i);
      }
    }
  }
  BandedMatrix out(n, kl, ku);
  for (int i = 0; i < n; ++i) {
    for (int j = out.col_begin(i); j < out.col_end(i); ++j) out.at(i, j) = dense(i, j);
  }
  return out;
}

BandedMatrix BandedMatrix::identity(int n) {
  BandedMatrix out(n, 0, 0);
  for (int i = 0; i < n; ++i) out.at(i, i) = 1.0;
  return out;
}

cplx BandedMatrix::operator()(int i, int j) const {
  if (!in_band(i, j)) return {};
  return data_[index(i, j)];
}

cplx& BandedMatrix::at(int i, int j) {
  if (!in_band(i, j) || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw DimensionError("BandedMatrix::at: index outside band");
  }
  return data_[index(i, j)];
}

DenseMatrix BandedMatrix::to_dense() const {
  DenseMatrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = col_begin(i); j < col_end(i); ++j) out(i, j) = data_[index(i, j)];
  }
  return out;
}

BandedMatrix BandedMatrix::block(int lo, int hi) const {
  if (lo < 0 || hi > n_ || lo > hi) throw DimensionError("BandedMatrix::block: bad range");
  BandedMatrix out(hi - lo, kl_, ku_);
  for (int i = lo; i < hi; ++i) {
    for (int j = std::max(col_begin(i), lo); j < std::min(col_end(i), hi); ++j) {
      out.at(i - lo, j - lo) = data_[index(i, j)];
    }
  }
  return out;
}

BandedMatrix BandedMatrix::operator*(cplx s) const {
  BandedMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

namespace {

BandedMatrix combine(const BandedMatrix& a, const BandedMatrix& b, double sign) {
  if (a.n() != b.n()) throw DimensionError("BandedMatrix: size mismatch");
  BandedMatrix out(a.n(), std::max(a.kl(), b.kl()), std::max(a.ku(), b.ku()));
  for (int i = 0; i < a.n(); ++i) {
    for (int j = out.col_begin(i); j < out.col_end(i); ++j) out.at(i, j) = a(i, j) + sign * b(i, j);
  }
  return out;
}

}  // namespace

BandedMatrix BandedMatrix::operator+(const BandedMatrix& rhs) const { return combine(*this, rhs, 1.0); }
BandedMatrix BandedMatrix::operator-(const BandedMatrix& rhs) const { return combine(*this, rhs, -1.0); }

BandedMatrix BandedMatrix::shifted(cplx s) const {
  BandedMatrix out = *this;
  for (int i = 0; i < n_; ++i) out.at(i, i) += s;
  return out;
}

double BandedMatrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int j = col_begin(i); j < col_end(i); ++j) row += std::abs(data_[index(i, j)]);
    best = std::max(best, row);
  }
  return best;
}

bool BandedMatrix::is_real() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

bool BandedMatrix::operator==(const BandedMatrix& other) const {
  if (n_ != other.n_) return false;
  const int kl = std::max(kl_, other.kl_);
  const int ku = std::max(ku_, other.ku_);
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - kl); j < std::min(n_, i + ku + 1); ++j) {
      if ((*this)(i, j) != other(i, j)) return false;
    }
  }
  return true;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n()), kl_(a.kl()), ku_(a.ku()), lu_(a.n(), a.kl(), a.kl() + a.ku()), pivot_(a.n()) {
  for (int i = 0; i < n_; ++i) {
    for (int j = a.col_begin(i); j < a.col_end(i); ++j) lu_.at(i, j) = a(i, j);
  }
  tiny_ = std::numeric_limits<double>::epsilon() * std::max(a.norm_inf(), 1e-300);
  const int uw = kl_ + ku_;
  for (int k = 0; k < n_; ++k) {
    const int last_row = std::min(n_ - 1, k + kl_);
    const int last_col = std::min(n_ - 1, k + uw);
    int p = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i <= last_row; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    pivot_[k] = p;
    if (p != k) {
      for (int j = k; j <= last_col; ++j) std::swap(lu_.at(k, j), lu_.at(p, j));
    }
    cplx& pivot = lu_.at(k, k);
    if (std::abs(pivot) < tiny_) pivot = tiny_;
    for (int i = k + 1; i <= last_row; ++i) {
      const cplx l = lu_(i, k) / pivot;
      lu_.at(i, k) = l;
      if (l == cplx{}) continue;
      for (int j = k + 1; j <= last_col; ++j) lu_.at(i, j) -= l * lu_(k, j);
    }
  }
}

void BandedLU::solve(std::vector<cplx>& b) const {
  if (static_cast<int>(b.size()) != n_) throw DimensionError("BandedLU::solve: size mismatch");
  for (int k = 0; k < n_; ++k) {
    if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
    const int last_row = std::min(n_ - 1, k + kl_);
    for (int i = k + 1; i <= last_row; ++i) b[i] -= lu_(i, k) * b[k];
  }
  const int uw = kl_ + ku_;
  for (int k = n_ - 1; k >= 0; --k) {
    cplx s = b[k];
    const int last_col = std::min(n_ - 1, k + uw);
    for (int j = k + 1; j <= last_col; ++j) s -= lu_(k, j) * b[j];
    b[k] = s / lu_(k, k);
  }
}

}  // namespace pdem
