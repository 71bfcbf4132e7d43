#include "pdem/operators.hpp"

#include <algorithm>
#include <cmath>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"

namespace pdem {

namespace {

constexpr cplx kI{0.0, 1.0};

void set_boundary_rows(BandedMatrix& m, Boundary bc) {
  if (bc != Boundary::dirichlet) return;
  const int n = m.n();
  for (int i : {0, n - 1}) {
    for (int j = m.col_begin(i); j < m.col_end(i); ++j) m.at(i, j) = 0.0;
    m.at(i, i) = 1.0;
  }
}

void require_dirichlet(Boundary bc) {
  if (bc != Boundary::dirichlet) throw DomainError("Hamiltonian operators support Dirichlet boundaries only");
}

}  // namespace

BandedMatrix DiscreteOperator::spectral_block() const {
  if (bc == Boundary::dirichlet) return matrix.block(1, matrix.n() - 1);
  return matrix;
}

DiscreteOperator discretize_schrodinger_q(const ComplexField& v, Boundary bc) {
  const Grid& g = v.grid();
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  require_dirichlet(bc);
  BandedMatrix m(n, 1, 1);
  for (int i = 1; i < n - 1; ++i) {
    m.at(i, i - 1) = -inv_h2;
    m.at(i, i) = 2.0 * inv_h2 + v[i];
    m.at(i, i + 1) = -inv_h2;
  }
  set_boundary_rows(m, bc);
  return {std::move(m), g, std::vector<double>(static_cast<std::size_t>(n), 1.0), bc};
}

DiscreteOperator discretize_pdem_x(const MassProfile& mass, const ComplexField& v, Boundary bc) {
  const Grid& g = v.grid();
  const int n = g.n();
  const MassSamples s = mass.sample(g);
  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  require_dirichlet(bc);
  BandedMatrix m(n, 1, 1);
  for (int i = 1; i < n - 1; ++i) {
    const double mu2 = s.mu[i] * s.mu[i];
    const double drift = s.mu[i] * s.dmu[i];
    m.at(i, i - 1) = -mu2 * inv_h2 + drift * inv_2h;
    m.at(i, i) = 2.0 * mu2 * inv_h2 + v[i];
    m.at(i, i + 1) = -mu2 * inv_h2 - drift * inv_2h;
  }
  set_boundary_rows(m, bc);
  return {std::move(m), g, s.mass, bc};
}

DiscreteOperator discretize_dirac_reduced(const MassProfile& mass, const ComplexField& v, double eps, Boundary bc) {
  require_dirichlet(bc);
  const Grid& g = v.grid();
  const int n = g.n();
  const MassSamples s = mass.sample(g);
  const ComplexField dv = central_derivative(v);
  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  BandedMatrix m(n, 1, 1);
  for (int i = 1; i < n - 1; ++i) {
    const double log_dm = s.dmass[i] / s.mass[i];
    const cplx pot = 2.0 * eps * v[i] - v[i] * v[i] - kI * dv[i] - kI * log_dm * (eps - v[i]) +
                     s.mass[i] * s.mass[i];
    m.at(i, i - 1) = -inv_h2 - log_dm * inv_2h;
    m.at(i, i) = 2.0 * inv_h2 + pot;
    m.at(i, i + 1) = -inv_h2 + log_dm * inv_2h;
  }
  set_boundary_rows(m, bc);
  return {std::move(m), g, std::vector<double>(static_cast<std::size_t>(n), 1.0), bc};
}

DiscreteOperator discretize_eta(const ComplexField& f, const MassProfile& mass, EtaKind which) {
  const Grid& g = f.grid();
  const int n = g.n();
  const MassSamples s = mass.sample(g);
  const double inv_2h = 1.0 / (2.0 * g.h());
  BandedMatrix m(n, 2, 2);
  for (int i = 1; i < n - 1; ++i) {
    m.at(i, i - 1) = -s.mu[i] * inv_2h;
    m.at(i, i) = kI * f[i];
    m.at(i, i + 1) = s.mu[i] * inv_2h;
  }
  m.at(0, 0) = s.mu[0] * -3.0 * inv_2h + kI * f[0];
  m.at(0, 1) = s.mu[0] * 4.0 * inv_2h;
  m.at(0, 2) = s.mu[0] * -1.0 * inv_2h;
  m.at(n - 1, n - 1) = s.mu[n - 1] * 3.0 * inv_2h + kI * f[n - 1];
  m.at(n - 1, n - 2) = s.mu[n - 1] * -4.0 * inv_2h;
  m.at(n - 1, n - 3) = s.mu[n - 1] * 1.0 * inv_2h;
  if (which == EtaKind::first) m = m * -kI;
  return {std::move(m), g, s.mass, Boundary::none};
}

DiscreteOperator weighted_adjoint(const DiscreteOperator& a) {
  const BandedMatrix& src = a.matrix;
  const int n = src.n();
  BandedMatrix m(n, src.ku(), src.kl());
  for (int i = 0; i < n; ++i) {
    for (int j = m.col_begin(i); j < m.col_end(i); ++j) {
      const cplx v = std::conj(src(j, i));
      m.at(i, j) = a.weight[j] == a.weight[i] ? v : v * (a.weight[j] / a.weight[i]);
    }
  }
  return {std::move(m), a.grid, a.weight, a.bc};
}

double intertwining_residual(const DiscreteOperator& h, const DiscreteOperator& eta, int trim) {
  if (!(h.grid == eta.grid) || h.dimension() != eta.dimension()) {
    throw DimensionError("intertwining_residual: operators live on different grids");
  }
  if (h.weight != eta.weight) throw DimensionError("intertwining_residual: inner-product weights differ");
  if (trim < 2) throw DomainError("intertwining_residual: trim must be at least 2");
  const int n = h.dimension();
  if (n <= 2 * trim) throw DimensionError("intertwining_residual: grid too small for trim");
  const BandedMatrix left = kernels::multiply(eta.matrix, h.matrix);
  const BandedMatrix right = kernels::multiply(weighted_adjoint(h).matrix, eta.matrix);
  const double num = kernels::max_abs_diff(left, right, trim, n - trim);
  const double den = kernels::max_abs(left, trim, n - trim);
  if (den == 0.0) return num == 0.0 ? 0.0 : num;
  return num / den;
}

double self_adjoint_residual(const DiscreteOperator& a, int trim) {
  const int n = a.dimension();
  if (n <= 2 * trim) throw DimensionError("self_adjoint_residual: grid too small for trim");
  const DiscreteOperator adj = weighted_adjoint(a);
  const double num = kernels::max_abs_diff(a.matrix, adj.matrix, trim, n - trim);
  const double den = kernels::max_abs(a.matrix, trim, n - trim);
  return den > 0.0 ? num / den : num;
}

double pt_residual(const ComplexField& v) {
  const Grid& g = v.grid();
  if (!g.symmetric()) throw DomainError("pt_residual: grid must be symmetric (a = -b)");
  const int n = g.n();
  double best = 0.0;
  for (int i = 0; i < n; ++i) best = std::max(best, std::abs(v[i] - std::conj(v[n - 1 - i])));
  return best;
}

}  // namespace pdem
