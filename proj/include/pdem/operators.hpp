#pragma once

#include <vector>

#include "pdem/banded.hpp"
#include "pdem/massmap.hpp"
#include "pdem/numerics.hpp"

namespace pdem {

enum class Boundary {
  /// First and last rows are identity rows (psi = 0); spectra use the interior block only.
  dirichlet,
  /// Every row carries the stencil (one-sided at the ends).
  none,
};

/// Banded discretization of a differential operator on a grid, with the weights of the
/// discrete inner product <phi, psi> = sum_i w_i conj(phi_i) psi_i h.
struct DiscreteOperator {
  BandedMatrix matrix;
  Grid grid;
  std::vector<double> weight;
  Boundary bc = Boundary::dirichlet;

  int dimension() const { return matrix.n(); }
  /// The block the eigensolver sees: without the identity rows under Dirichlet.
  BandedMatrix spectral_block() const;
};

/// -d^2/dq^2 + V on a uniform q grid; weight 1.
DiscreteOperator discretize_schrodinger_q(const ComplexField& v, Boundary bc = Boundary::dirichlet);

/// -mu^2 d^2/dx^2 - mu mu' d/dx + V; weight M(x).
DiscreteOperator discretize_pdem_x(const MassProfile& mass, const ComplexField& v,
                                   Boundary bc = Boundary::dirichlet);

/// Upper-spinor operator of the 1D Dirac system with the M^2 term on the left:
/// -d^2 + (M'/M) d + [2 eps v - v^2 - i v' - i (M'/M)(eps - v) + M^2]; its eigenvalue is eps^2.
DiscreteOperator discretize_dirac_reduced(const MassProfile& mass, const ComplexField& v, double eps,
                                          Boundary bc = Boundary::dirichlet);

enum class EtaKind { first = 1, second = 2 };

/// second: mu d/dx + i F.  first: -i (mu d/dx) + F, i.e. -i times the second.
DiscreteOperator discretize_eta(const ComplexField& f, const MassProfile& mass, EtaKind which);

/// W^{-1} A^* W with W = diag(weight).
DiscreteOperator weighted_adjoint(const DiscreteOperator& a);

/// max |eta H - H^+ eta| / max |eta H| over the interior block with `trim` rows and
/// columns dropped at each end.
double intertwining_residual(const DiscreteOperator& h, const DiscreteOperator& eta, int trim = 2);

/// max |A - A^+| / max |A| over the trimmed interior block.
double self_adjoint_residual(const DiscreteOperator& a, int trim = 2);

/// max_i |V(x_i) - conj(V(-x_i))| on a symmetric grid.
double pt_residual(const ComplexField& v);

}  // namespace pdem
