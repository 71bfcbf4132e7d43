#pragma once

#include <functional>
#include <vector>

#include "pdem/numerics.hpp"

namespace pdem {

/// Samples of the mass M, the inverse mass mu = 1/M and their x-derivatives on a grid.
struct MassSamples {
  std::vector<double> mass;
  std::vector<double> dmass;
  std::vector<double> mu;
  std::vector<double> dmu;
};

/// Position-dependent effective mass M(x) = m0 m(x), strictly positive on its domain.
class MassProfile {
 public:
  enum class Kind { constant, rational_x2m1, custom };

  static MassProfile constant(double m0);
  /// M(x) = m0 * 2x / (x^2 - 1) on x > 1, the derivative of m0 ln(x^2 - 1).
  static MassProfile rational_x2m1(double m0 = 1.0);
  /// Sampled mass; derivatives come from central differences.
  static MassProfile custom(const Grid& grid, std::vector<double> mass);

  Kind kind() const { return kind_; }
  double m0() const { return m0_; }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }

  /// Closed-form value; custom profiles only answer at their own grid points.
  double mass(double x) const;
  double dmass(double x) const;
  /// Closed-form integral of M from `from` to `to`; not available for custom profiles.
  double integral(double from, double to) const;

  /// Throws DomainError if the grid leaves the domain or M <= 0 somewhere on it.
  MassSamples sample(const Grid& grid) const;

 private:
  MassProfile(Kind kind, double m0, double lo, double hi) : kind_(kind), m0_(m0), lo_(lo), hi_(hi) {}

  Kind kind_;
  double m0_;
  double lo_;
  double hi_;
  std::vector<double> custom_points_;
  std::vector<double> custom_mass_;
};

/// Coordinate map q(x) = int_{x0}^{x} M, with f = e^q.
struct Chart {
  Grid grid_x;
  std::vector<double> q;
  std::vector<double> f;
  double x0;

  double q_lo() const { return q.front(); }
  double q_hi() const { return q.back(); }
  /// Monotone linear interpolation of x(q).
  double inverse(double qv) const;
  /// Linear interpolation of q(x).
  double forward(double x) const;
};

/// x0 may lie outside the grid for closed-form masses: the trapezoid antiderivative then
/// starts at grid_x.a() with the exact offset int_{x0}^{a} M.
Chart chart_from_mass(const MassProfile& mass, const Grid& grid_x, double x0);

/// A potential known in closed form as a function of the real q coordinate.
struct ClosedFormPotential {
  std::function<cplx(double)> of_q;
  /// Optional hyperbolic form written in f = e^q; used for pullbacks when present.
  std::function<cplx(double)> of_f;
  /// Real q values where the potential is singular.
  std::vector<double> singular_points;
};

/// V_x[i] = V_eff(q(x_i)).
ComplexField pullback_potential(const ClosedFormPotential& v_eff, const Chart& chart);

/// Samples of a field given on a uniform q grid, read back at q(x_i) by linear interpolation.
ComplexField interpolate_to_x(const ComplexField& v_q, const Chart& chart);
/// Samples of an x-frame field read at the points of a uniform q grid.
ComplexField interpolate_to_q(const ComplexField& v_x, const Chart& chart, const Grid& q_grid);

/// The x-frame and q-frame descriptions of the same constant-mass problem.
struct FrameData {
  Chart chart;
  Grid q_grid;
  ComplexField v_x;
  ComplexField v_q;
};

/// Uniform q grid spanning [q(a), q(b)] with the same point count as grid_x, plus the
/// potential sampled in both frames.
FrameData frame_equivalence_data(const MassProfile& mass, const Grid& grid_x, double x0,
                                 const ClosedFormPotential& v_eff);

}  // namespace pdem
