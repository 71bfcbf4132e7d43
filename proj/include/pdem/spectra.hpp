#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pdem/banded.hpp"
#include "pdem/models.hpp"
#include "pdem/operators.hpp"

namespace pdem {

/// A non-real eigenvalue below threshold with its complex-conjugate partner, if found.
struct ConjugateGroup {
  cplx value;
  std::optional<cplx> partner;
};

struct Spectrum {
  std::vector<cplx> eigenvalues;       // sorted by (Re, Im)
  std::vector<double> residual_norms;  // ||A psi - lambda psi|| / ||psi||, one per eigenvalue
  double matrix_norm = 0.0;            // ||A||_inf of the solved block

  // Filled by classify_spectrum.
  double threshold = std::numeric_limits<double>::infinity();
  double im_tol = 0.0;
  std::vector<double> real_levels;
  std::vector<ConjugateGroup> complex_pairs;
  int continuum_count = 0;
  bool classified = false;
};

struct EigOptions {
  int dimension_cap = 2000;
  bool residuals = true;
};

/// All eigenvalues of a square matrix: balancing, Householder reduction to upper
/// Hessenberg form, then implicitly shifted complex QR with deflation.
/// Throws ConvergenceError after 30 n QR sweeps.
Spectrum eig_dense(const BandedMatrix& a, const EigOptions& options = {});
/// Eigenvalues of the operator's spectral block (Dirichlet identity rows excluded).
Spectrum eig_dense(const DiscreteOperator& op, const EigOptions& options = {});

/// Fast path for real tridiagonal matrices whose off-diagonal products are all positive:
/// those are diagonally similar to a real symmetric tridiagonal matrix, solved by implicit QL.
/// Returns nullopt when the matrix does not qualify.
std::optional<Spectrum> eig_tridiagonal_real(const BandedMatrix& a, const EigOptions& options = {});

/// eig_tridiagonal_real when it applies, eig_dense otherwise. `fast_path` reports which ran.
Spectrum eig_auto(const DiscreteOperator& op, const EigOptions& options = {}, bool* fast_path = nullptr);

/// Eigenvalues only of an upper Hessenberg matrix (entries below the subdiagonal ignored).
std::vector<cplx> hessenberg_qr_eigenvalues(DenseMatrix h);

/// Approximate eigenvector for lambda by inverse iteration on the banded matrix.
std::vector<cplx> inverse_iteration(const BandedMatrix& a, cplx lambda, int iterations = 3);

/// ||A psi - lambda psi||_2 / ||psi||_2 for the inverse-iteration vector psi.
double backward_error(const BandedMatrix& a, cplx lambda);

double default_im_tol(double threshold);

/// Partitions eigenvalues with Re < threshold into real levels (|Im| <= im_tol) and
/// complex values paired with their conjugates; the rest count as continuum.
Spectrum classify_spectrum(Spectrum raw, double threshold, double im_tol);

struct LevelMatch {
  double analytic;
  std::optional<double> numeric;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool ok = false;
};

struct SpectrumComparison {
  std::vector<LevelMatch> matches;
  std::vector<double> unmatched_numeric;
  std::vector<double> unmatched_analytic;
  double rtol = 0.0;
  double atol = 0.0;
  bool pass = false;
};

/// Greedy nearest matching of numeric real levels to analytic levels; a level passes when
/// |E_num - E| <= max(rtol |E|, atol). Passes when every level on both sides is matched.
SpectrumComparison spectrum_compare(const Spectrum& numeric, const AnalyticSpectrum& analytic, double rtol,
                                    double atol);

struct ShootOptions {
  enum class EndCondition {
    dirichlet,  // psi = 0, psi' = 1 at both ends of [a, b]
    decaying,   // psi ~ exp(-kappa |x|), kappa = sqrt(V(end) - E)
    /// Left end a > 0 next to a 1/x^2 wall: Frobenius data psi ~ x^s (1 + c x). Right end Dirichlet.
    regular_singular,
  };
  EndCondition ends = EndCondition::dirichlet;
  double threshold = 0.0;
  int steps = 20000;  // RK4 steps over the whole interval
  int max_newton = 50;
  double tolerance = 1e-10;
  /// Matching point; defaults to the minimum of Re V sampled on [a, b].
  std::optional<double> match_point;
};

/// Newton refinement of an eigenvalue of -psi'' + V psi = E psi on [a, b] by two-sided
/// shooting and a Wronskian mismatch. Throws ConvergenceError after max_newton steps and
/// BasinError when the iteration runs away from e0.
cplx refine_shoot(const std::function<cplx(double)>& v, cplx e0, double a, double b,
                  const ShootOptions& options = {});

}  // namespace pdem
