#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdem/massmap.hpp"
#include "pdem/numerics.hpp"

namespace pdem {

using ComplexFunction = std::function<cplx(cplx)>;

/// Which generator-to-potential rule to apply.
///  pseudo:    V = -F^2 - i dF/dq + alpha0
///  hermitian: V =  F^2 -   dF/dq + alpha0
enum class Convention { pseudo, hermitian };

/// First-order generator F(q) together with the integration constant alpha0.
class Generator {
 public:
  enum class Kind { cosech, coth_shift, custom };

  /// F = v2 cosech(q); v2 != 0.
  static Generator cosech(double v2, double alpha0 = 0.0);
  /// F = a coth(q) + b / a; a > 0 and b > a^2.
  static Generator coth_shift(double a, double b, double alpha0 = 0.0);
  static Generator custom(ComplexFunction f, ComplexFunction df, ComplexFunction d2f, double alpha0 = 0.0);
  /// F identically equal to c.
  static Generator constant(cplx c, double alpha0 = 0.0);

  Kind kind() const { return kind_; }
  double alpha0() const { return alpha0_; }
  Generator with_alpha0(double alpha0) const;

  cplx value(cplx q) const;
  cplx derivative(cplx q) const;
  cplx second_derivative(cplx q) const;

 private:
  Kind kind_ = Kind::custom;
  double v2_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
  double alpha0_ = 0.0;
  ComplexFunction f_;
  ComplexFunction df_;
  ComplexFunction d2f_;
};

ComplexFunction v_from_generator(const Generator& gen, Convention convention);

/// Named potentials. Contour families are evaluated at T = alpha (s - c - i gamma).
class PotentialModel {
 public:
  enum class Kind { pt_poschl_teller, pseudo_pt, eckart_hermitian, eckart_complex, constant };

  /// V1 cosech^2 T - V2 cosech T coth T; V1 > -1/4, V2 != 0 unless the single even term is wanted.
  static PotentialModel pt_poschl_teller(double v1, double v2, double alpha = 1.0, double c = 0.0,
                                         double gamma = 0.4);
  /// Built from the cosech generator in the pseudo convention: -V2^2 cosech^2 T + i V2 cosech T coth T.
  static PotentialModel pseudo_pt(double v2, double gamma = 0.4, double c = 0.0);
  /// A^2 + B^2/A^2 + A(A-1) cosech^2 q - 2B coth q.
  static PotentialModel eckart_hermitian(double a, double b);
  /// A^2 + B^2/A^2 + A(A-i) cosech^2 q - 2B coth q, with the complex coefficient as printed.
  static PotentialModel eckart_complex(double a, double b);
  /// V = alpha0 everywhere (null generator).
  static PotentialModel constant(double alpha0);

  Kind kind() const { return kind_; }
  std::string name() const;
  double v1() const { return v1_; }
  double v2() const { return v2_; }
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  double gamma() const { return gamma_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double alpha0() const { return alpha0_; }

  bool on_contour() const { return kind_ == Kind::pt_poschl_teller || kind_ == Kind::pseudo_pt; }
  /// Complexified coordinate T for a real sample point s.
  cplx shifted(double s) const;
  /// Closed form at a complexified coordinate.
  cplx at(cplx t) const;
  /// Value at the real sample coordinate s.
  cplx operator()(double s) const { return at(shifted(s)); }

  /// Limit of Re V far from the core: the continuum edge.
  double threshold() const;

  /// Generator and convention that construct this model, when one exists.
  std::optional<std::pair<Generator, Convention>> generator() const;

  /// Same model written as a function of real q, with its f = e^q form.
  ClosedFormPotential closed_form() const;

 private:
  explicit PotentialModel(Kind kind) : kind_(kind) {}

  Kind kind_;
  double v1_ = 0.0;
  double v2_ = 0.0;
  double alpha_ = 1.0;
  double c_ = 0.0;
  double gamma_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
  double alpha0_ = 0.0;
};

/// Throws DomainError for grids that touch a singularity of the model.
ComplexField evaluate_model(const PotentialModel& model, const Grid& grid);

struct AnalyticLevel {
  int n;
  std::optional<int> epsilon;
  double energy;
};

struct AnalyticSpectrum {
  std::vector<AnalyticLevel> levels;  // ascending in energy
  std::optional<int> n_max;
  double threshold = 0.0;
  /// Formula values that come out complex (broken regime); never counted as levels.
  std::vector<cplx> complex_levels;

  std::vector<double> energies() const;
};

/// Single tower E_n = -(|V2| - n - 1/2)^2, 0 <= n < |V2| - 1/2.
AnalyticSpectrum analytic_spectrum_ptpt(double v2);

/// Two quasi-parity towers of the contour Poschl-Teller potential.
AnalyticSpectrum analytic_spectrum_pt(double v1, double v2, double alpha = 1.0);

enum class EckartVariant { standard, as_printed };

/// standard: E_n = A^2 - (A+n)^2 + B^2/A^2 - B^2/(A+n)^2 for 0 <= n < sqrt(B) - A.
/// as_printed: (A+n)^2 - A^2 + B^2/A^2 - B^2 (A-n)^2 over the same n range.
AnalyticSpectrum analytic_spectrum_eckart(double a, double b, EckartVariant variant);

struct LevelCount {
  double v2;
  int count;
  std::vector<double> levels;
};

std::vector<LevelCount> level_crossing_report(std::span<const double> v2_values);

/// Consistency of W = -mu F' with the generator constraints, sampled on a chart.
struct ConstraintResiduals {
  double w_definition;     // max |2i W mu + 2i mu^2 F'|
  double w_derivative;     // max |(-i mu^2 F'' - i mu mu' F') - i mu W'_fd| over the interior
  double w_derivative_rel; // w_derivative / max |-i mu^2 F'' - i mu mu' F'|
};

/// F is evaluated at q(x_i) + shift, with x-derivatives from the chain rule.
ConstraintResiduals constraint_residuals(const Generator& gen, const MassProfile& mass, const Chart& chart,
                                         cplx shift = {}, int trim = 2);

}  // namespace pdem
