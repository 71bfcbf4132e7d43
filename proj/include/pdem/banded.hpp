#pragma once

#include <vector>

#include "pdem/numerics.hpp"

namespace pdem {

/// Row-major dense complex matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  int n() const { return n_; }
  cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  cplx* row(int i) { return data_.data() + static_cast<std::size_t>(i) * n_; }
  const cplx* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }

 private:
  int n_ = 0;
  std::vector<cplx> data_;
};

/// Square complex matrix with kl sub- and ku super-diagonals. Entries outside the band read as 0.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku);

  static BandedMatrix from_dense(const DenseMatrix& dense);
  static BandedMatrix identity(int n);

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  cplx operator()(int i, int j) const;
  /// Mutable access; (i, j) must lie in the band.
  cplx& at(int i, int j);

  /// First and one-past-last column index stored for row i.
  int col_begin(int i) const { return i - kl_ > 0 ? i - kl_ : 0; }
  int col_end(int i) const { return i + ku_ + 1 < n_ ? i + ku_ + 1 : n_; }

  DenseMatrix to_dense() const;
  /// Principal sub-block rows/cols [lo, hi).
  BandedMatrix block(int lo, int hi) const;

  BandedMatrix operator*(cplx s) const;
  BandedMatrix operator+(const BandedMatrix& rhs) const;
  BandedMatrix operator-(const BandedMatrix& rhs) const;
  BandedMatrix shifted(cplx s) const;

  /// Frobenius-free size measure: max row sum of |a_ij|.
  double norm_inf() const;
  bool is_real() const;

  bool operator==(const BandedMatrix& other) const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (kl_ + ku_ + 1) + (j - i + kl_);
  }

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  std::vector<cplx> data_;
};

/// LU factorization of a banded matrix with partial pivoting (upper band grows to kl + ku).
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& a);

  /// Solves A x = b in place. Exactly singular pivots are replaced by `tiny`.
  void solve(std::vector<cplx>& b) const;
  int n() const { return n_; }

 private:
  int n_;
  int kl_;
  int ku_;
  BandedMatrix lu_;
  std::vector<int> pivot_;
  double tiny_;
};

}  // namespace pdem
