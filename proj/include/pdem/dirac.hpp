#pragma once

#include <utility>

#include "pdem/massmap.hpp"
#include "pdem/numerics.hpp"
#include "pdem/spectra.hpp"

namespace pdem {

/// 1D Dirac particle in a scalar potential v(x) (time component only) with mass M(x).
struct DiracModel {
  ComplexField v;
  MassProfile mass;

  const Grid& grid() const { return v.grid(); }
};

/// Upper (phi) and lower (theta) components at energy eps.
struct Spinor {
  ComplexField phi;
  ComplexField theta;
  double eps;
};

/// theta = [i phi' + (eps - v) phi] / M.
ComplexField theta_from_phi(const ComplexField& phi, const DiracModel& model, double eps);

/// max over the trimmed interior of |-i theta' + (eps - v) theta - M phi|,
/// divided by max(||phi||, ||theta||).
double dirac_residual(const Spinor& spinor, const DiracModel& model, int trim = 2);

/// Same measure for i phi' + (eps - v) phi - M theta.
double dirac_residual_lower(const Spinor& spinor, const DiracModel& model, int trim = 2);

struct DiracOptions {
  /// Level identification runs the dense solver on a grid of at most this many points
  /// over the same interval; the level is then followed on the full grid by shifted
  /// inverse iteration.
  int coarse_n = 401;
  int max_iterations = 60;
  double tolerance = 1e-8;
  int trim = 2;
};

struct DiracSolution {
  double eps;
  Spinor spinor;
  cplx lambda;  // eigenvalue of the reduced operator at eps (ideally eps^2)
  double g = 0.0;
  int iterations = 0;
  double residual_upper = 0.0;  // -i theta' + (eps - v) theta - M phi
  double residual_lower = 0.0;  // i phi' + (eps - v) phi - M theta
};

/// k-th lowest eigenvalue (by real part) of the reduced operator at eps, and its eigenvector
/// on the full grid (zero at the Dirichlet ends).
std::pair<cplx, std::vector<cplx>> reduced_level(const DiracModel& model, double eps, int level_index,
                                                 const DiracOptions& options = {});

/// Real root of g(eps) = Re lambda_k(eps) - eps^2 in [lo, hi] by secant steps with a bisection
/// safeguard. Throws BracketError without a sign change and ConvergenceError after
/// max_iterations.
DiracSolution solve_dirac_energy(const DiracModel& model, int level_index, std::pair<double, double> bracket,
                                 const DiracOptions& options = {});

}  // namespace pdem
