#include "pdem/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"

namespace pdem {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx cosech(cplx z) { return 1.0 / std::sinh(z); }
cplx coth(cplx z) { return std::cosh(z) / std::sinh(z); }

void require_contour_shift(double gamma) {
  if (!(gamma > 0.0 && gamma < std::numbers::pi)) {
    throw DomainError("contour shift gamma must lie strictly between 0 and pi");
  }
}

void require_eckart(double a, double b) {
  if (!(a > 0.0)) throw DomainError("Eckart: A must be positive");
  if (!(b > a * a)) throw DomainError("Eckart: need B > A^2");
}

}  // namespace

// ---------------------------------------------------------------- Generator

Generator Generator::cosech(double v2, double alpha0) {
  if (v2 == 0.0) throw DomainError("cosech generator: V2 must be nonzero");
  Generator g;
  g.kind_ = Kind::cosech;
  g.v2_ = v2;
  g.alpha0_ = alpha0;
  return g;
}

Generator Generator::coth_shift(double a, double b, double alpha0) {
  require_eckart(a, b);
  Generator g;
  g.kind_ = Kind::coth_shift;
  g.a_ = a;
  g.b_ = b;
  g.alpha0_ = alpha0;
  return g;
}

Generator Generator::custom(ComplexFunction f, ComplexFunction df, ComplexFunction d2f, double alpha0) {
  Generator g;
  g.kind_ = Kind::custom;
  g.f_ = std::move(f);
  g.df_ = std::move(df);
  g.d2f_ = std::move(d2f);
  g.alpha0_ = alpha0;
  return g;
}

Generator Generator::constant(cplx c, double alpha0) {
  return custom([c](cplx) { return c; }, [](cplx) { return cplx{}; }, [](cplx) { return cplx{}; }, alpha0);
}

Generator Generator::with_alpha0(double alpha0) const {
  Generator g = *this;
  g.alpha0_ = alpha0;
  return g;
}

cplx Generator::value(cplx q) const {
  switch (kind_) {
    case Kind::cosech:
      return v2_ * pdem::cosech(q);
    case Kind::coth_shift:
      return a_ * coth(q) + b_ / a_;
    case Kind::custom:
      return f_(q);
  }
  return {};
}

cplx Generator::derivative(cplx q) const {
  switch (kind_) {
    case Kind::cosech:
      return -v2_ * pdem::cosech(q) * coth(q);
    case Kind::coth_shift: {
      const cplx cs = pdem::cosech(q);
      return -a_ * cs * cs;
    }
    case Kind::custom:
      return df_(q);
  }
  return {};
}

cplx Generator::second_derivative(cplx q) const {
  switch (kind_) {
    case Kind::cosech: {
      const cplx cs = pdem::cosech(q);
      const cplx ct = coth(q);
      return v2_ * cs * (ct * ct + cs * cs);
    }
    case Kind::coth_shift: {
      const cplx cs = pdem::cosech(q);
      return 2.0 * a_ * cs * cs * coth(q);
    }
    case Kind::custom:
      return d2f_(q);
  }
  return {};
}

ComplexFunction v_from_generator(const Generator& gen, Convention convention) {
  if (convention == Convention::pseudo) {
    return [gen](cplx q) {
      const cplx f = gen.value(q);
      return -f * f - kI * gen.derivative(q) + gen.alpha0();
    };
  }
  return [gen](cplx q) {
    const cplx f = gen.value(q);
    return f * f - gen.derivative(q) + gen.alpha0();
  };
}

// ----------------------------------------------------------- PotentialModel

PotentialModel PotentialModel::pt_poschl_teller(double v1, double v2, double alpha, double c, double gamma) {
  if (!(v1 > -0.25)) throw DomainError("pt_poschl_teller: need V1 > -1/4");
  if (!(alpha > 0.0)) throw DomainError("pt_poschl_teller: alpha must be positive");
  require_contour_shift(gamma);
  PotentialModel m(Kind::pt_poschl_teller);
  m.v1_ = v1;
  m.v2_ = v2;
  m.alpha_ = alpha;
  m.c_ = c;
  m.gamma_ = gamma;
  return m;
}

PotentialModel PotentialModel::pseudo_pt(double v2, double gamma, double c) {
  if (v2 == 0.0) throw DomainError("pseudo_pt: V2 must be nonzero");
  require_contour_shift(gamma);
  PotentialModel m(Kind::pseudo_pt);
  m.v2_ = v2;
  m.v1_ = -v2 * v2;
  m.c_ = c;
  m.gamma_ = gamma;
  return m;
}

PotentialModel PotentialModel::eckart_hermitian(double a, double b) {
  require_eckart(a, b);
  PotentialModel m(Kind::eckart_hermitian);
  m.a_ = a;
  m.b_ = b;
  return m;
}

PotentialModel PotentialModel::eckart_complex(double a, double b) {
  require_eckart(a, b);
  PotentialModel m(Kind::eckart_complex);
  m.a_ = a;
  m.b_ = b;
  return m;
}

PotentialModel PotentialModel::constant(double alpha0) {
  PotentialModel m(Kind::constant);
  m.alpha0_ = alpha0;
  return m;
}

std::string PotentialModel::name() const {
  switch (kind_) {
    case Kind::pt_poschl_teller:
      return "pt_poschl_teller";
    case Kind::pseudo_pt:
      return "pseudo_pt";
    case Kind::eckart_hermitian:
      return "eckart_hermitian";
    case Kind::eckart_complex:
      return "eckart_complex";
    case Kind::constant:
      return "constant";
  }
  return "unknown";
}

cplx PotentialModel::shifted(double s) const {
  if (!on_contour()) return s;
  return alpha_ * cplx(s - c_, -gamma_);
}

namespace {

// Every model is a fixed combination of cosech^2 and cosech*coth (plus constants),
// so the same coefficients serve the sinh/cosh form and the f = e^q form.
cplx combine(const PotentialModel& m, cplx cs, cplx ct) {
  using K = PotentialModel::Kind;
  switch (m.kind()) {
    case K::pt_poschl_teller:
      return m.v1() * cs * cs - m.v2() * cs * ct;
    case K::pseudo_pt: {
      const cplx f = m.v2() * cs;
      const cplx df = -m.v2() * cs * ct;
      return -f * f - kI * df;
    }
    case K::eckart_hermitian: {
      const double a = m.a();
      const double b = m.b();
      return a * a + b * b / (a * a) + a * (a - 1.0) * cs * cs - 2.0 * b * ct;
    }
    case K::eckart_complex: {
      const double a = m.a();
      const double b = m.b();
      return a * a + b * b / (a * a) + a * (a - kI) * cs * cs - 2.0 * b * ct;
    }
    case K::constant:
      return m.alpha0();
  }
  return {};
}

}  // namespace

cplx PotentialModel::at(cplx t) const {
  if (kind_ == Kind::constant) return alpha0_;
  return combine(*this, cosech(t), coth(t));
}

double PotentialModel::threshold() const {
  switch (kind_) {
    case Kind::pt_poschl_teller:
    case Kind::pseudo_pt:
      return 0.0;
    case Kind::eckart_hermitian:
    case Kind::eckart_complex:
      return a_ * a_ + b_ * b_ / (a_ * a_) - 2.0 * b_;
    case Kind::constant:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::optional<std::pair<Generator, Convention>> PotentialModel::generator() const {
  switch (kind_) {
    case Kind::pseudo_pt:
      return std::pair{Generator::cosech(v2_), Convention::pseudo};
    case Kind::eckart_complex:
      return std::pair{Generator::coth_shift(a_, b_), Convention::pseudo};
    case Kind::eckart_hermitian: {
      const double a = a_;
      const double ba = b_ / a_;
      auto f = [a, ba](cplx q) { return -a * coth(q) + ba; };
      auto df = [a](cplx q) {
        const cplx cs = cosech(q);
        return a * cs * cs;
      };
      auto d2f = [a](cplx q) {
        const cplx cs = cosech(q);
        return -2.0 * a * cs * cs * coth(q);
      };
      return std::pair{Generator::custom(f, df, d2f), Convention::hermitian};
    }
    case Kind::constant:
      return std::pair{Generator::constant(0.0, alpha0_), Convention::pseudo};
    case Kind::pt_poschl_teller:
      return std::nullopt;
  }
  return std::nullopt;
}

ClosedFormPotential PotentialModel::closed_form() const {
  ClosedFormPotential out;
  const PotentialModel self = *this;
  out.of_q = [self](double q) { return self(q); };
  out.of_f = [self](double f) {
    if (self.kind() == Kind::constant) return cplx(self.alpha0());
    // e^{T} for T = alpha (ln f - c - i gamma); reduces to f off the contour.
    const cplx g = self.on_contour() ? std::exp(self.alpha() * cplx(std::log(f) - self.c(), -self.gamma())) : cplx(f);
    const cplx g2 = g * g;
    return combine(self, 2.0 * g / (g2 - 1.0), (g2 + 1.0) / (g2 - 1.0));
  };
  if (!on_contour() && kind_ != Kind::constant) out.singular_points = {0.0};
  return out;
}

ComplexField evaluate_model(const PotentialModel& model, const Grid& grid) {
  using K = PotentialModel::Kind;
  if ((model.kind() == K::eckart_hermitian || model.kind() == K::eckart_complex) && !(grid.a() > 0.0)) {
    throw DomainError("Eckart potentials are evaluated on q > 0 only");
  }
  return kernels::sample(grid, [&model](double s) { return model(s); });
}

// ------------------------------------------------------------ Spectra

std::vector<double> AnalyticSpectrum::energies() const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.energy);
  return out;
}

namespace {

void finish(AnalyticSpectrum& s) {
  std::sort(s.levels.begin(), s.levels.end(),
            [](const AnalyticLevel& a, const AnalyticLevel& b) { return a.energy < b.energy; });
  for (const auto& l : s.levels) s.n_max = std::max(s.n_max.value_or(l.n), l.n);
}

}  // namespace

AnalyticSpectrum analytic_spectrum_ptpt(double v2) {
  if (v2 == 0.0) throw DomainError("analytic_spectrum_ptpt: V2 must be nonzero");
  AnalyticSpectrum s;
  s.threshold = 0.0;
  const double top = std::abs(v2) - 0.5;
  for (int n = 0; n < top; ++n) {
    const double k = top - n;
    s.levels.push_back({n, std::nullopt, -k * k});
  }
  finish(s);
  return s;
}

AnalyticSpectrum analytic_spectrum_pt(double v1, double v2, double alpha) {
  if (!(v1 > -0.25)) throw DomainError("analytic_spectrum_pt: need V1 > -1/4");
  AnalyticSpectrum s;
  s.threshold = 0.0;
  const double a2 = alpha * alpha;
  const double base = v1 / a2 + 0.25;
  const double split = std::abs(v2) / a2;
  const double sp = std::sqrt(base + split);
  if (base - split >= 0.0) {
    const double sm = std::sqrt(base - split);
    for (int eps : {+1, -1}) {
      const double t = 0.5 * (sp + eps * sm);
      for (int n = 0; t - n - 0.5 > 0.0; ++n) {
        const double k = t - n - 0.5;
        s.levels.push_back({n, eps, -a2 * k * k});
      }
    }
  } else {
    const double sm = std::sqrt(split - base);
    for (int eps : {+1, -1}) {
      const cplx t = 0.5 * cplx(sp, eps * sm);
      for (int n = 0; t.real() - n - 0.5 > 0.0; ++n) {
        const cplx k = t - (n + 0.5);
        s.complex_levels.push_back(-a2 * k * k);
      }
    }
  }
  finish(s);
  return s;
}

AnalyticSpectrum analytic_spectrum_eckart(double a, double b, EckartVariant variant) {
  require_eckart(a, b);
  AnalyticSpectrum s;
  s.threshold = a * a + b * b / (a * a) - 2.0 * b;
  const double top = std::sqrt(b) - a;
  for (int n = 0; n < top; ++n) {
    const double an = a + n;
    double e = 0.0;
    if (variant == EckartVariant::standard) {
      e = a * a - an * an + b * b / (a * a) - b * b / (an * an);
    } else {
      const double am = a - n;
      e = an * an - a * a + b * b / (a * a) - b * b * am * am;
    }
    s.levels.push_back({n, std::nullopt, e});
  }
  finish(s);
  return s;
}

std::vector<LevelCount> level_crossing_report(std::span<const double> v2_values) {
  std::vector<LevelCount> out;
  out.reserve(v2_values.size());
  for (double v2 : v2_values) {
    if (!(v2 > 0.0)) throw DomainError("level_crossing_report: V2 values must be positive");
    const AnalyticSpectrum s = analytic_spectrum_ptpt(v2);
    out.push_back({v2, static_cast<int>(s.levels.size()), s.energies()});
  }
  return out;
}

ConstraintResiduals constraint_residuals(const Generator& gen, const MassProfile& mass, const Chart& chart,
                                         cplx shift, int trim) {
  const Grid& grid = chart.grid_x;
  const MassSamples s = mass.sample(grid);
  const auto n = static_cast<std::size_t>(grid.n());
  std::vector<cplx> dfx(n);
  std::vector<cplx> d2fx(n);
  std::vector<cplx> w(n);
  ConstraintResiduals r{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = chart.q[i] + shift;
    const cplx fq = gen.derivative(z);
    const cplx fqq = gen.second_derivative(z);
    dfx[i] = s.mass[i] * fq;
    d2fx[i] = s.dmass[i] * fq + s.mass[i] * s.mass[i] * fqq;
    w[i] = -s.mu[i] * dfx[i];
    const cplx def = 2.0 * kI * w[i] * s.mu[i] + 2.0 * kI * s.mu[i] * s.mu[i] * dfx[i];
    r.w_definition = std::max(r.w_definition, std::abs(def));
  }
  const ComplexField dw = central_derivative(ComplexField(grid, w));
  double scale = 0.0;
  for (std::size_t i = static_cast<std::size_t>(trim); i + static_cast<std::size_t>(trim) < n; ++i) {
    const cplx lhs = -kI * s.mu[i] * s.mu[i] * d2fx[i] - kI * s.mu[i] * s.dmu[i] * dfx[i];
    const cplx rhs = kI * s.mu[i] * dw[i];
    r.w_derivative = std::max(r.w_derivative, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(lhs));
  }
  r.w_derivative_rel = scale > 0.0 ? r.w_derivative / scale : 0.0;
  return r;
}

}  // namespace pdem
