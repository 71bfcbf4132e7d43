#include <algorithm>
#include <cmath>
#include <limits>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/spectra.hpp"

namespace pdem {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

double cabs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Diagonal similarity D^{-1} A D with power-of-two entries, equalizing row and column norms.
void balance(DenseMatrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const int n = a.n();
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(a(j, i));
        r += cabs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= inv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form. Columns already zero below the
// subdiagonal are skipped, so tridiagonal input costs nothing.
void reduce_to_hessenberg(DenseMatrix& a) {
  const int n = a.n();
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (int k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (int i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    const int m = n - k - 1;
    v[0] = x0 - alpha;
    for (int i = 1; i < m; ++i) v[i] = a(k + 1 + i, k);
    double vnorm2 = 0.0;
    for (int i = 0; i < m; ++i) vnorm2 += std::norm(v[i]);
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (int i = 0; i < m; ++i) v[i] *= inv;

    // A <- (I - 2 v v^*) A on rows k+1.., all columns from k.
    for (int j = k; j < n; ++j) {
      cplx s{};
      for (int i = 0; i < m; ++i) s += std::conj(v[i]) * a(k + 1 + i, j);
      s *= 2.0;
      for (int i = 0; i < m; ++i) a(k + 1 + i, j) -= v[i] * s;
    }
    // A <- A (I - 2 v v^*) on columns k+1.., all rows.
    for (int i = 0; i < n; ++i) {
      cplx* row = a.row(i) + k + 1;
      cplx s{};
      for (int j = 0; j < m; ++j) s += row[j] * v[j];
      s *= 2.0;
      for (int j = 0; j < m; ++j) row[j] -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Rotation [[c, s], [-conj(s), c]] mapping (x, y) to (r, 0), c real.
struct Givens {
  double c;
  cplx s;
  cplx r;
};

Givens make_givens(cplx x, cplx y) {
  if (y == cplx{}) return {1.0, 0.0, x};
  if (x == cplx{}) {
    const double ay = std::abs(y);
    return {0.0, std::conj(y) / ay, ay};
  }
  const double ax = std::abs(x);
  const double norm = std::hypot(ax, std::abs(y));
  const cplx phase = x / ax;
  return {ax / norm, phase * std::conj(y) / norm, phase * norm};
}

void eigenvalues_2x2(cplx a, cplx b, cplx c, cplx d, cplx& lo, cplx& hi) {
  const cplx half_tr = 0.5 * (a + d);
  const cplx half_diff = 0.5 * (a - d);
  const cplx disc = std::sqrt(half_diff * half_diff + b * c);
  lo = half_tr - disc;
  hi = half_tr + disc;
}

std::vector<cplx> start_vector(int n) {
  std::vector<cplx> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.5 * std::sin(0.7 * i + 0.3), 0.25 * std::cos(1.3 * i));
  return x;
}

double norm2(const std::vector<cplx>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

void sort_eigenvalues(std::vector<cplx>& w) {
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

Spectrum finish_spectrum(const BandedMatrix& a, std::vector<cplx> w, const EigOptions& options) {
  sort_eigenvalues(w);
  Spectrum s;
  s.matrix_norm = a.norm_inf();
  if (options.residuals) {
    s.residual_norms.reserve(w.size());
    for (const auto& lambda : w) s.residual_norms.push_back(backward_error(a, lambda));
  }
  s.eigenvalues = std::move(w);
  return s;
}

// Implicit QL on a symmetric tridiagonal matrix (diagonal d, off-diagonal e, e.back() = 0).
void symmetric_tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  const int max_iter = 30 * std::max(n, 1);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kUlp * dd) break;
      }
      if (m != l) {
        if (++iter > max_iter) throw ConvergenceError("tridiagonal QL: iteration budget exceeded");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<cplx> hessenberg_qr_eigenvalues(DenseMatrix h) {
  const int n = h.n();
  std::vector<cplx> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  double hnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j < n; ++j) hnorm = std::max(hnorm, cabs1(h(i, j)));
  }
  const long max_sweeps = 30L * n;
  long sweeps = 0;
  int its = 0;
  int ihi = n - 1;
  while (ihi >= 0) {
    int l = ihi;
    for (; l > 0; --l) {
      double tst = cabs1(h(l - 1, l - 1)) + cabs1(h(l, l));
      if (tst == 0.0) tst = hnorm;
      if (cabs1(h(l, l - 1)) <= kUlp * tst) {
        h(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == ihi) {
      w[ihi] = h(ihi, ihi);
      --ihi;
      its = 0;
      continue;
    }
    if (l == ihi - 1) {
      eigenvalues_2x2(h(l, l), h(l, ihi), h(ihi, l), h(ihi, ihi), w[l], w[ihi]);
      ihi -= 2;
      its = 0;
      continue;
    }
    if (++sweeps > max_sweeps) throw ConvergenceError("Hessenberg QR: sweep budget exceeded");

    cplx shift;
    if (its == 10) {
      shift = 0.75 * std::abs(h(l + 1, l).real()) + h(l, l);
    } else if (its == 20) {
      shift = 0.75 * std::abs(h(ihi, ihi - 1).real()) + h(ihi, ihi);
    } else {
      cplx lo;
      cplx hi;
      eigenvalues_2x2(h(ihi - 1, ihi - 1), h(ihi - 1, ihi), h(ihi, ihi - 1), h(ihi, ihi), lo, hi);
      shift = std::abs(lo - h(ihi, ihi)) < std::abs(hi - h(ihi, ihi)) ? lo : hi;
    }
    ++its;

    cplx x = h(l, l) - shift;
    cplx y = h(l + 1, l);
    for (int k = l; k < ihi; ++k) {
      if (k > l) {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const Givens g = make_givens(x, y);
      if (k > l) {
        h(k, k - 1) = g.r;
        h(k + 1, k - 1) = 0.0;
      }
      const cplx sc = std::conj(g.s);
      cplx* rk = h.row(k);
      cplx* rk1 = h.row(k + 1);
      for (int j = k; j <= ihi; ++j) {
        const cplx t1 = rk[j];
        const cplx t2 = rk1[j];
        rk[j] = g.c * t1 + g.s * t2;
        rk1[j] = g.c * t2 - sc * t1;
      }
      const int last = std::min(k + 2, ihi);
      for (int i = l; i <= last; ++i) {
        cplx* ri = h.row(i);
        const cplx t1 = ri[k];
        const cplx t2 = ri[k + 1];
        ri[k] = g.c * t1 + sc * t2;
        ri[k + 1] = g.c * t2 - g.s * t1;
      }
    }
  }
  return w;
}

std::vector<cplx> inverse_iteration(const BandedMatrix& a, cplx lambda, int iterations) {
  const BandedLU lu(a.shifted(-lambda));
  std::vector<cplx> x = start_vector(a.n());
  for (int it = 0; it < iterations; ++it) {
    lu.solve(x);
    const double nx = norm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) break;
    for (auto& v : x) v /= nx;
  }
  return x;
}

double backward_error(const BandedMatrix& a, cplx lambda) {
  const std::vector<cplx> x = inverse_iteration(a, lambda);
  std::vector<cplx> r = kernels::serial::apply(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * x[i];
  return norm2(r) / norm2(x);
}

Spectrum eig_dense(const BandedMatrix& a, const EigOptions& options) {
  if (a.n() > options.dimension_cap) {
    throw DimensionError("eig_dense: dimension " + std::to_string(a.n()) + " exceeds cap " +
                         std::to_string(options.dimension_cap));
  }
  DenseMatrix work = a.to_dense();
  balance(work);
  reduce_to_hessenberg(work);
  return finish_spectrum(a, hessenberg_qr_eigenvalues(std::move(work)), options);
}

Spectrum eig_dense(const DiscreteOperator& op, const EigOptions& options) {
  return eig_dense(op.spectral_block(), options);
}

std::optional<Spectrum> eig_tridiagonal_real(const BandedMatrix& a, const EigOptions& options) {
  const int n = a.n();
  if (!a.is_real()) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    for (int j = a.col_begin(i); j < a.col_end(i); ++j) {
      if (std::abs(i - j) > 1 && a(i, j) != cplx{}) return std::nullopt;
    }
  }
  std::vector<double> d(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (int i = 0; i + 1 < n; ++i) {
    const double prod = a(i, i + 1).real() * a(i + 1, i).real();
    if (!(prod > 0.0)) return std::nullopt;
    e[i] = std::sqrt(prod);
  }
  symmetric_tridiagonal_ql(d, e);
  std::vector<cplx> w(d.begin(), d.end());
  return finish_spectrum(a, std::move(w), options);
}

Spectrum eig_auto(const DiscreteOperator& op, const EigOptions& options, bool* fast_path) {
  const BandedMatrix block = op.spectral_block();
  if (auto fast = eig_tridiagonal_real(block, options)) {
    if (fast_path) *fast_path = true;
    return *std::move(fast);
  }
  if (fast_path) *fast_path = false;
  return eig_dense(block, options);
}

}  // namespace pdem
