#include "pdem/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <numbers>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/operators.hpp"
#include "pdem/spectra.hpp"

namespace pdem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExact = 1e-14;  // residuals below this count as exactly zero

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Gate make_gate(std::string name, double value, double lo, double hi) {
  const bool ok = std::isfinite(value) && value >= lo && value <= hi;
  return Gate{std::move(name), value, lo, hi, ok};
}

std::string convention_note() {
  return "potential from generator: V = -F^2 - i dF/dq + alpha0 (pseudo) or V = F^2 - dF/dq + alpha0 (hermitian)";
}

Json notes_for(const PotentialModel& model, const RunConfig& c) {
  Json notes = Json::array();
  notes.push_back(convention_note());
  if (model.on_contour()) notes.push_back("contour coordinate T = alpha (s - c - i gamma)");
  if (!c.mass.is_unit()) {
    notes.push_back("x-frame operator -mu^2 D2 - mu mu' D1 + V(q(x)); adjoint weighted by M(x)");
  } else {
    notes.push_back("q-frame operator -D2 + V; adjoint with unit weight");
  }
  if (model.kind() == PotentialModel::Kind::pseudo_pt) {
    notes.push_back("reference levels E_n = -(|V2| - n - 1/2)^2, negative sign, n < |V2| - 1/2");
  }
  if (model.kind() == PotentialModel::Kind::eckart_hermitian || model.kind() == PotentialModel::Kind::eckart_complex) {
    notes.push_back("Eckart reference: standard shape-invariance levels; the as-printed variant is listed for comparison");
  }
  notes.push_back("Dirichlet boundary rows are excluded from the eigenproblem");
  return notes;
}

struct Problem {
  DiscreteOperator op;
  std::string frame;
};

Problem build_problem(const RunConfig& c, const PotentialModel& model, const Grid& grid) {
  if (c.mass.is_unit()) return {discretize_schrodinger_q(evaluate_model(model, grid)), "q"};
  const MassProfile mass = c.mass.build();
  const Chart chart = chart_from_mass(mass, grid, c.mass.x0);
  return {discretize_pdem_x(mass, pullback_potential(model.closed_form(), chart)), "x"};
}

std::optional<AnalyticSpectrum> analytic_for(const PotentialModel& m) {
  switch (m.kind()) {
    case PotentialModel::Kind::pseudo_pt:
      return analytic_spectrum_ptpt(m.v2());
    case PotentialModel::Kind::pt_poschl_teller:
      return analytic_spectrum_pt(m.v1(), m.v2(), m.alpha());
    case PotentialModel::Kind::eckart_hermitian:
      return analytic_spectrum_eckart(m.a(), m.b(), EckartVariant::standard);
    default:
      return std::nullopt;
  }
}

const char* eigen_class(const Spectrum& s, cplx z) {
  if (!(z.real() < s.threshold)) return "continuum";
  return std::abs(z.imag()) <= s.im_tol ? "real" : "complex";
}

Json spectrum_json(const Spectrum& s, bool fast_path) {
  Json eig = Json::array();
  for (const auto& z : s.eigenvalues) eig.push_back(complex_json(z));
  Json pairs = Json::array();
  for (const auto& p : s.complex_pairs) {
    pairs.push_back({{"value", complex_json(p.value)}, {"partner", p.partner ? complex_json(*p.partner) : Json()}});
  }
  double worst = 0.0;
  for (double r : s.residual_norms) worst = std::max(worst, r);
  return Json{{"solver", fast_path ? "real_tridiagonal_ql" : "hessenberg_qr"},
              {"dimension", s.eigenvalues.size()},
              {"threshold", s.threshold},
              {"im_tol", s.im_tol},
              {"matrix_norm", s.matrix_norm},
              {"max_residual", worst},
              {"real_levels", s.real_levels},
              {"complex_pairs", pairs},
              {"continuum_count", s.continuum_count},
              {"eigenvalues", eig},
              {"residual_norms", s.residual_norms}};
}

Json analytic_json(const AnalyticSpectrum& a) {
  Json levels = Json::array();
  for (const auto& l : a.levels) {
    levels.push_back({{"n", l.n}, {"epsilon", l.epsilon ? Json(*l.epsilon) : Json()}, {"energy", l.energy}});
  }
  Json cl = Json::array();
  for (const auto& z : a.complex_levels) cl.push_back(complex_json(z));
  return Json{{"threshold", a.threshold},
              {"n_max", a.n_max ? Json(*a.n_max) : Json()},
              {"levels", levels},
              {"complex_levels", cl}};
}

Json comparison_json(const SpectrumComparison& cmp) {
  Json levels = Json::array();
  for (const auto& m : cmp.matches) {
    levels.push_back({{"analytic", m.analytic},
                      {"numeric", m.numeric ? Json(*m.numeric) : Json()},
                      {"abs_error", m.abs_error},
                      {"rel_error", m.rel_error},
                      {"ok", m.ok}});
  }
  return Json{{"rtol", cmp.rtol},
              {"atol", cmp.atol},
              {"pass", cmp.pass},
              {"levels", levels},
              {"unmatched_numeric", cmp.unmatched_numeric},
              {"unmatched_analytic", cmp.unmatched_analytic}};
}

int mismatches(const SpectrumComparison& cmp) {
  int bad = static_cast<int>(cmp.unmatched_numeric.size() + cmp.unmatched_analytic.size());
  for (const auto& m : cmp.matches) bad += m.numeric && !m.ok ? 1 : 0;
  return bad;
}

Json model_json(const RunConfig& c, const PotentialModel& model, const Grid& grid, const std::string& frame) {
  return Json{{"name", model.name()},
              {"threshold", model.threshold()},
              {"frame", frame},
              {"grid", {{"a", grid.a()}, {"b", grid.b()}, {"n", grid.n()}, {"h", grid.h()}}},
              {"mass", c.mass.kind == MassProfile::Kind::rational_x2m1 ? "rational_x2m1" : "constant"}};
}

struct IntertwiningRun {
  int n;
  double h;
  double eta2;
  double eta1;
  double w_definition;
  double w_derivative_rel;
};

IntertwiningRun intertwining_at(const RunConfig& c, const PotentialModel& model, const Generator& gen,
                                Convention convention, const Grid& grid) {
  const MassProfile mass = c.mass.build();
  const Chart chart = chart_from_mass(mass, grid, c.mass.x0);
  const cplx shift = model.on_contour() ? model.shifted(0.0) : cplx{};
  const ComplexFunction vfn = v_from_generator(gen, convention);
  std::vector<cplx> v(static_cast<std::size_t>(grid.n()));
  std::vector<cplx> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx z = chart.q[i] + shift;
    v[i] = vfn(z);
    f[i] = gen.value(z);
  }
  const ComplexField vf(grid, std::move(v));
  const ComplexField ff(grid, std::move(f));
  const DiscreteOperator h = c.mass.is_unit() ? discretize_schrodinger_q(vf) : discretize_pdem_x(mass, vf);
  const int trim = c.solver.trim;
  const double r2 = intertwining_residual(h, discretize_eta(ff, mass, EtaKind::second), trim);
  const double r1 = intertwining_residual(h, discretize_eta(ff, mass, EtaKind::first), trim);
  const ConstraintResiduals cr = constraint_residuals(gen, mass, chart, shift, trim);
  return {grid.n(), grid.h(), r2, r1, cr.w_definition, cr.w_derivative_rel};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool ResultDocument::pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.pass; });
}

int scan_workers() {
  const char* env = std::getenv("PDEM_WORKERS");
  if (!env || !*env) return std::max(1, omp_get_max_threads());
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw ConfigError(std::string("PDEM_WORKERS must be a positive integer, got '") + env + "'");
  return static_cast<int>(n);
}

ResultDocument run_solve(const RunConfig& c) {
  const PotentialModel model = c.model.build();
  const Grid grid = c.grid.build();
  const Problem p = build_problem(c, model, grid);
  EigOptions eo;
  eo.dimension_cap = c.solver.dimension_cap;
  bool fast = false;
  const Spectrum s = classify_spectrum(eig_auto(p.op, eo, &fast), model.threshold(), c.solver.im_tol);

  ResultDocument doc{Command::solve, render_config(c), Json::object(), {}, {}};
  doc.body["model"] = model_json(c, model, grid, p.frame);
  doc.body["spectrum"] = spectrum_json(s, fast);

  if (auto analytic = analytic_for(model)) {
    const SpectrumComparison cmp = spectrum_compare(s, *analytic, c.solver.rtol, c.solver.atol);
    doc.body["analytic"] = analytic_json(*analytic);
    doc.body["comparison"] = comparison_json(cmp);
    // Closed forms describe the full q line; an x-frame window only matches them approximately.
    if (c.mass.is_unit()) doc.gates.push_back(make_gate("analytic_levels_mismatched", mismatches(cmp), 0.0, 0.0));
  }
  if (model.kind() == PotentialModel::Kind::eckart_hermitian || model.kind() == PotentialModel::Kind::eckart_complex) {
    const AnalyticSpectrum standard = analytic_spectrum_eckart(model.a(), model.b(), EckartVariant::standard);
    const AnalyticSpectrum printed = analytic_spectrum_eckart(model.a(), model.b(), EckartVariant::as_printed);
    const SpectrumComparison a = spectrum_compare(s, standard, c.solver.rtol, c.solver.atol);
    const SpectrumComparison b = spectrum_compare(s, printed, c.solver.rtol, c.solver.atol);
    doc.body["eckart_variants"] = {{"standard", comparison_json(a)},
                                   {"as_printed", comparison_json(b)},
                                   {"matching_variant", a.pass ? "standard" : b.pass ? "as_printed" : "none"}};
  }
  doc.body["notes"] = notes_for(model, c);

  doc.table.header = {"index", "re", "im", "residual", "class"};
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const cplx z = s.eigenvalues[i];
    doc.table.rows.push_back({std::to_string(i), format_double(z.real()), format_double(z.imag()),
                              i < s.residual_norms.size() ? format_double(s.residual_norms[i]) : "",
                              eigen_class(s, z)});
  }
  return doc;
}

ResultDocument run_verify(const RunConfig& c) {
  const PotentialModel model = c.model.build();
  const Grid grid = c.grid.build();
  ResultDocument doc{Command::verify, render_config(c), Json::object(), {}, {}};
  doc.body["model"] = model_json(c, model, grid, c.mass.is_unit() ? "q" : "x");
  Json checks = Json::object();
  Json convergence = Json::array();

  const auto gen = model.generator();
  if (gen && gen->second == Convention::pseudo && !(model.on_contour() && model.alpha() != 1.0)) {
    const IntertwiningRun coarse = intertwining_at(c, model, gen->first, gen->second, grid);
    const IntertwiningRun fine = intertwining_at(c, model, gen->first, gen->second, grid.refined());
    for (const auto& r : {coarse, fine}) {
      convergence.push_back({{"n", r.n},
                             {"h", r.h},
                             {"intertwining", r.eta2},
                             {"intertwining_eta1", r.eta1},
                             {"constraint_derivative_rel", r.w_derivative_rel}});
    }
    const bool exact = coarse.eta2 <= kExact;
    const double ratio = exact ? 0.0 : coarse.eta2 / fine.eta2;
    checks["intertwining"] = {{"residual", coarse.eta2},
                              {"residual_eta1", coarse.eta1},
                              {"residual_refined", fine.eta2},
                              {"ratio", exact ? Json() : Json(ratio)},
                              {"exact", exact}};
    checks["constraints"] = {{"w_definition", coarse.w_definition}, {"w_derivative_rel", coarse.w_derivative_rel}};
    doc.gates.push_back(make_gate("intertwining", coarse.eta2, 0.0, c.verify.intertwining_tol));
    if (!exact) doc.gates.push_back(make_gate("intertwining_order", ratio, c.verify.ratio_lo, c.verify.ratio_hi));
  } else {
    checks["intertwining"] = nullptr;
  }

  if (gen && gen->second == Convention::hermitian) {
    const Problem p = build_problem(c, model, grid);
    const double r = self_adjoint_residual(p.op, c.solver.trim);
    checks["hermitian"] = {{"residual", r}};
    if (c.mass.is_unit()) doc.gates.push_back(make_gate("hermitian", r, 0.0, c.verify.hermitian_tol));
  }

  if (model.on_contour() && grid.symmetric() && c.mass.is_unit()) {
    const ComplexField v = evaluate_model(model, grid);
    double max_im = 0.0;
    for (const auto& z : v.values()) max_im = std::max(max_im, std::abs(z.imag()));
    const double pt = pt_residual(v);
    checks["pt"] = {{"residual", pt}, {"max_abs_im", max_im}, {"relative", max_im > 0.0 ? pt / max_im : 0.0},
                    {"pt_symmetric", pt <= c.verify.pt_tol}};
    if (model.kind() == PotentialModel::Kind::pt_poschl_teller && model.c() == 0.0) {
      doc.gates.push_back(make_gate("pt_symmetry", pt, 0.0, c.verify.pt_tol));
    }
  }

  doc.body["checks"] = checks;
  doc.body["convergence"] = convergence;
  doc.body["notes"] = notes_for(model, c);

  doc.table.header = {"gate", "value", "lo", "hi", "pass"};
  for (const auto& g : doc.gates) {
    doc.table.rows.push_back(
        {g.name, format_double(g.value), format_double(g.lo), format_double(g.hi), g.pass ? "true" : "false"});
  }
  return doc;
}

ResultDocument run_scan(const RunConfig& c) {
  struct Row {
    double param = 0.0;
    Spectrum spectrum;
    std::optional<AnalyticSpectrum> analytic;
    std::optional<SpectrumComparison> comparison;
    std::string error;
  };
  const Grid grid = c.grid.build();
  std::vector<double> values = c.scan.values;
  std::sort(values.begin(), values.end());
  std::vector<Row> rows(values.size());
  const int workers = scan_workers();
  const int count = static_cast<int>(values.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (int i = 0; i < count; ++i) {
    Row& row = rows[i];
    row.param = values[i];
    try {
      ModelParams mp = c.model;
      mp.set(c.scan.parameter, values[i]);
      const PotentialModel model = mp.build();
      EigOptions eo;
      eo.dimension_cap = c.solver.dimension_cap;
      eo.residuals = false;
      const Problem p = build_problem(c, model, grid);
      row.spectrum = classify_spectrum(eig_auto(p.op, eo), model.threshold(), c.solver.im_tol);
      row.analytic = analytic_for(model);
      if (row.analytic) row.comparison = spectrum_compare(row.spectrum, *row.analytic, c.solver.rtol, c.solver.atol);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  for (const auto& row : rows) {
    if (!row.error.empty()) throw Error("scan at " + c.scan.parameter + " = " + format_double(row.param) + ": " + row.error);
  }

  ResultDocument doc{Command::scan, render_config(c), Json::object(), {}, {}};
  Json table = Json::array();
  doc.table.header = {"param", "count", "E0", "E1", "E2", "E3"};
  for (const auto& row : rows) {
    const auto& levels = row.spectrum.real_levels;
    Json entry{{"param", row.param},
               {"count", levels.size()},
               {"levels", levels},
               {"complex_count", row.spectrum.complex_pairs.size()}};
    if (row.analytic) {
      entry["analytic_count"] = row.analytic->levels.size();
      entry["analytic_levels"] = row.analytic->energies();
      entry["comparison_pass"] = row.comparison->pass;
      if (c.mass.is_unit()) {
        doc.gates.push_back(make_gate("levels_mismatched[" + c.scan.parameter + "=" + format_double(row.param) + "]",
                                      mismatches(*row.comparison), 0.0, 0.0));
      }
    }
    table.push_back(entry);
    std::vector<std::string> csv{format_double(row.param), std::to_string(levels.size())};
    for (std::size_t k = 0; k < 4; ++k) csv.push_back(k < levels.size() ? format_double(levels[k]) : "");
    doc.table.rows.push_back(std::move(csv));
  }
  doc.body["scan"] = {{"parameter", c.scan.parameter},
                      {"grid", {{"a", grid.a()}, {"b", grid.b()}, {"n", grid.n()}}},
                      {"rows", table}};
  doc.body["notes"] = notes_for(c.model.build(), c);
  return doc;
}

ResultDocument run_dirac(const RunConfig& c) {
  const Grid grid = c.grid.build();
  DiracOptions opts;
  opts.trim = c.solver.trim;
  struct Run {
    Grid grid;
    DiracSolution sol;
  };
  std::vector<Run> runs;
  for (const Grid& g : {grid, grid.refined()}) {
    const DiracModel dm = build_dirac_model(c, g);
    runs.push_back({g, solve_dirac_energy(dm, c.dirac.level, {c.dirac.eps_lo, c.dirac.eps_hi}, opts)});
  }
  const double ratio = runs[0].sol.residual_upper / runs[1].sol.residual_upper;

  ResultDocument doc{Command::dirac, render_config(c), Json::object(), {}, {}};
  Json runs_json = Json::array();
  doc.table.header = {"n", "eps", "lambda_re", "lambda_im", "residual_upper", "residual_lower"};
  for (const auto& r : runs) {
    runs_json.push_back({{"n", r.grid.n()},
                         {"h", r.grid.h()},
                         {"eps", r.sol.eps},
                         {"lambda", complex_json(r.sol.lambda)},
                         {"g", r.sol.g},
                         {"iterations", r.sol.iterations},
                         {"residual_upper", r.sol.residual_upper},
                         {"residual_lower", r.sol.residual_lower}});
    doc.table.rows.push_back({std::to_string(r.grid.n()), format_double(r.sol.eps),
                              format_double(r.sol.lambda.real()), format_double(r.sol.lambda.imag()),
                              format_double(r.sol.residual_upper), format_double(r.sol.residual_lower)});
  }
  Json dirac{{"well", c.dirac.well == DiracWell::sech2 ? "sech2" : "zero"},
             {"level", c.dirac.level},
             {"runs", runs_json},
             {"residual_ratio", ratio}};
  if (c.dirac.well == DiracWell::zero && c.mass.kind == MassProfile::Kind::constant) {
    const double k = (c.dirac.level + 1) * std::numbers::pi / (grid.b() - grid.a());
    const double exact = k * k + c.mass.m0 * c.mass.m0;
    Json disp = Json::array();
    for (const auto& r : runs) {
      disp.push_back({{"n", r.grid.n()}, {"eps_squared", r.sol.eps * r.sol.eps}, {"k2_plus_m2", exact},
                      {"error", std::abs(r.sol.eps * r.sol.eps - exact)}});
    }
    dirac["dispersion"] = disp;
  }
  const Spinor& sp = runs[0].sol.spinor;
  Json x = Json::array(), phi = Json::array(), theta = Json::array();
  for (int i = 0; i < grid.n(); ++i) {
    x.push_back(grid.point(i));
    phi.push_back(complex_json(sp.phi[i]));
    theta.push_back(complex_json(sp.theta[i]));
  }
  dirac["spinor"] = {{"x", x}, {"phi", phi}, {"theta", theta}};
  doc.body["dirac"] = dirac;
  doc.body["notes"] = Json::array(
      {"reduced upper-spinor equation: -phi'' + (M'/M) phi' + [2 eps v - v^2 - i v' - i (M'/M)(eps - v) + M^2] phi = "
       "eps^2 phi, with a plain -phi'' term re-derived from the first-order system",
       "spinor normalized so that max |phi| = 1", "only real eps roots are searched"});

  doc.gates.push_back(make_gate("dirac_residual", runs[0].sol.residual_upper, 0.0, c.dirac.residual_tol));
  doc.gates.push_back(make_gate("dirac_residual_order", ratio, c.dirac.ratio_lo, c.dirac.ratio_hi));
  return doc;
}

ResultDocument run(const RunConfig& c) {
  switch (c.command) {
    case Command::solve:
      return run_solve(c);
    case Command::verify:
      return run_verify(c);
    case Command::scan:
      return run_scan(c);
    case Command::dirac:
      return run_dirac(c);
  }
  throw Error("unknown command");
}

}  // namespace pdem
