#include <algorithm>
#include <cmath>

#include "pdem/spectra.hpp"

namespace pdem {

double default_im_tol(double threshold) {
  return 1e-6 * std::max(1.0, std::isfinite(threshold) ? std::abs(threshold) : 1.0);
}

Spectrum classify_spectrum(Spectrum raw, double threshold, double im_tol) {
  Spectrum s = std::move(raw);
  s.threshold = threshold;
  s.im_tol = im_tol;
  s.real_levels.clear();
  s.complex_pairs.clear();
  s.continuum_count = 0;

  std::vector<cplx> complex_values;
  for (const auto& z : s.eigenvalues) {
    if (!(z.real() < threshold)) {
      ++s.continuum_count;
    } else if (std::abs(z.imag()) <= im_tol) {
      s.real_levels.push_back(z.real());
    } else {
      complex_values.push_back(z);
    }
  }
  std::sort(s.real_levels.begin(), s.real_levels.end());

  // Pair each upper-half-plane value with the closest unused conjugate.
  std::vector<bool> used(complex_values.size(), false);
  for (std::size_t i = 0; i < complex_values.size(); ++i) {
    if (used[i] || complex_values[i].imag() < 0.0) continue;
    used[i] = true;
    const cplx target = std::conj(complex_values[i]);
    const double pair_tol = std::max(im_tol, 1e-6 * std::max(1.0, std::abs(target)));
    std::size_t best = complex_values.size();
    double best_dist = pair_tol;
    for (std::size_t j = 0; j < complex_values.size(); ++j) {
      if (used[j] || complex_values[j].imag() >= 0.0) continue;
      const double d = std::abs(complex_values[j] - target);
      if (d <= best_dist) {
        best_dist = d;
        best = j;
      }
    }
    ConjugateGroup group{complex_values[i], std::nullopt};
    if (best < complex_values.size()) {
      used[best] = true;
      group.partner = complex_values[best];
    }
    s.complex_pairs.push_back(group);
  }
  for (std::size_t i = 0; i < complex_values.size(); ++i) {
    if (!used[i]) s.complex_pairs.push_back({complex_values[i], std::nullopt});
  }
  s.classified = true;
  return s;
}

SpectrumComparison spectrum_compare(const Spectrum& numeric, const AnalyticSpectrum& analytic, double rtol,
                                    double atol) {
  SpectrumComparison out;
  out.rtol = rtol;
  out.atol = atol;
  const std::vector<double> expected = analytic.energies();
  std::vector<bool> taken(numeric.real_levels.size(), false);
  bool all_ok = true;
  for (double e : expected) {
    LevelMatch m{e, std::nullopt};
    std::size_t best = numeric.real_levels.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < numeric.real_levels.size(); ++j) {
      if (taken[j]) continue;
      const double d = std::abs(numeric.real_levels[j] - e);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best < numeric.real_levels.size()) {
      taken[best] = true;
      m.numeric = numeric.real_levels[best];
      m.abs_error = best_dist;
      m.rel_error = e != 0.0 ? best_dist / std::abs(e) : best_dist;
      m.ok = best_dist <= std::max(rtol * std::abs(e), atol);
    } else {
      out.unmatched_analytic.push_back(e);
    }
    all_ok = all_ok && m.ok;
    out.matches.push_back(m);
  }
  for (std::size_t j = 0; j < numeric.real_levels.size(); ++j) {
    if (!taken[j]) out.unmatched_numeric.push_back(numeric.real_levels[j]);
  }
  out.pass = all_ok && out.unmatched_numeric.empty() && out.unmatched_analytic.empty();
  return out;
}

}  // namespace pdem
