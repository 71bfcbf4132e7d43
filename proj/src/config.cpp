#include "pdem/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pdem/errors.hpp"
#include "pdem/kernels.hpp"
#include "pdem/spectra.hpp"

namespace pdem {

namespace {

struct Entry {
  std::string value;
  int line;
};

// section -> key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string> kSections = {"", "model", "mass", "grid", "solver", "verify", "scan", "dirac", "output"};

Document tokenize(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty() || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!kSections.contains(section) || section.empty()) {
        throw ConfigError("unknown section [" + section + "]", line);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for key '" + key + "'", line);
    auto& sec = doc[section];
    if (sec.contains(key)) throw ConfigError("duplicate key '" + key + "'", line);
    sec[key] = Entry{value, line};
  }
  return doc;
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

// Typed reads that consume keys, so leftovers can be reported as unknown.
class Reader {
 public:
  explicit Reader(Document doc) : doc_(std::move(doc)) {}

  bool has_section(const std::string& section) const { return doc_.contains(section); }
  bool has(const std::string& section, const std::string& key) const {
    auto it = doc_.find(section);
    return it != doc_.end() && it->second.contains(key);
  }
  int line_of(const std::string& section, const std::string& key) const {
    auto it = doc_.find(section);
    if (it == doc_.end()) return 0;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? 0 : jt->second.line;
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) {
    auto it = doc_.find(section);
    if (it == doc_.end()) return std::nullopt;
    auto jt = it->second.find(key);
    if (jt == it->second.end()) return std::nullopt;
    last_line_ = jt->second.line;
    std::string v = jt->second.value;
    it->second.erase(jt);
    return v;
  }

  std::optional<double> real(const std::string& section, const std::string& key) {
    auto v = text(section, key);
    if (!v) return std::nullopt;
    return to_double(*v, qualified(section, key));
  }

  std::optional<int> integer(const std::string& section, const std::string& key) {
    auto v = text(section, key);
    if (!v) return std::nullopt;
    int out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
      throw ConfigError("'" + qualified(section, key) + "' expects an integer, got '" + *v + "'", last_line_);
    }
    return out;
  }

  std::vector<double> list(const std::string& section, const std::string& key) {
    auto v = text(section, key);
    std::vector<double> out;
    if (!v) return out;
    std::istringstream in(*v);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(to_double(trim(item), qualified(section, key)));
    return out;
  }

  /// Throws on the first key nobody consumed.
  void reject_leftovers(const std::set<std::string>& ignored_sections) const {
    const Entry* first = nullptr;
    std::string name;
    for (const auto& [section, keys] : doc_) {
      if (ignored_sections.contains(section)) continue;
      for (const auto& [key, entry] : keys) {
        if (!first || entry.line < first->line) {
          first = &entry;
          name = qualified(section, key);
        }
      }
    }
    if (first) throw ConfigError("unknown key '" + name + "'", first->line);
  }

  int last_line() const { return last_line_; }

 private:
  double to_double(const std::string& s, const std::string& name) const {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out)) {
      throw ConfigError("'" + name + "' expects a finite number, got '" + s + "'", last_line_);
    }
    return out;
  }

  Document doc_;
  int last_line_ = 0;
};

const std::map<std::string, PotentialModel::Kind> kModelKinds = {
    {"pseudo_pt", PotentialModel::Kind::pseudo_pt},
    {"pt_poschl_teller", PotentialModel::Kind::pt_poschl_teller},
    {"eckart_hermitian", PotentialModel::Kind::eckart_hermitian},
    {"eckart_complex", PotentialModel::Kind::eckart_complex},
    {"constant", PotentialModel::Kind::constant},
};

std::string model_kind_name(PotentialModel::Kind kind) {
  for (const auto& [name, k] : kModelKinds) {
    if (k == kind) return name;
  }
  return "?";
}

std::vector<std::string> model_keys(PotentialModel::Kind kind) {
  switch (kind) {
    case PotentialModel::Kind::pseudo_pt:
      return {"v2", "gamma", "c"};
    case PotentialModel::Kind::pt_poschl_teller:
      return {"v1", "v2", "alpha", "c", "gamma"};
    case PotentialModel::Kind::eckart_hermitian:
    case PotentialModel::Kind::eckart_complex:
      return {"a", "b"};
    case PotentialModel::Kind::constant:
      return {"alpha0"};
  }
  return {};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

void require(bool ok, const std::string& message, int line) {
  if (!ok) throw ConfigError(message, line);
}

// Model invariants, phrased for the config surface.
void validate_model(const ModelParams& m, int line) {
  using K = PotentialModel::Kind;
  if (m.kind == K::pseudo_pt || m.kind == K::pt_poschl_teller) {
    require(m.v2 != 0.0, "model.v2 must be nonzero", line);
    require(m.gamma > 0.0 && m.gamma < std::numbers::pi, "model.gamma must lie in (0, pi)", line);
  }
  if (m.kind == K::pt_poschl_teller) {
    require(m.v1 > -0.25, "model.v1 must exceed -1/4", line);
    require(m.alpha > 0.0, "model.alpha must be positive", line);
  }
  if (m.kind == K::eckart_hermitian || m.kind == K::eckart_complex) {
    require(m.a > 0.0, "model.a must be positive", line);
    require(m.b > m.a * m.a, "model.b must exceed a^2", line);
  }
}

GridParams default_grid(const RunConfig& c) {
  if (c.command == Command::dirac) return {-15.0, 15.0, 1201};
  if (c.mass.kind == MassProfile::Kind::rational_x2m1) return {1.5, 5.0, 801};
  if (c.model.kind == PotentialModel::Kind::eckart_hermitian || c.model.kind == PotentialModel::Kind::eckart_complex) {
    return {0.05, 10.0, 1500};
  }
  return {-12.0, 12.0, 1201};
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::solve:
      return "solve";
    case Command::verify:
      return "verify";
    case Command::scan:
      return "scan";
    case Command::dirac:
      return "dirac";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::solve, Command::verify, Command::scan, Command::dirac}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

PotentialModel ModelParams::build() const {
  switch (kind) {
    case PotentialModel::Kind::pseudo_pt:
      return PotentialModel::pseudo_pt(v2, gamma, c);
    case PotentialModel::Kind::pt_poschl_teller:
      return PotentialModel::pt_poschl_teller(v1, v2, alpha, c, gamma);
    case PotentialModel::Kind::eckart_hermitian:
      return PotentialModel::eckart_hermitian(a, b);
    case PotentialModel::Kind::eckart_complex:
      return PotentialModel::eckart_complex(a, b);
    case PotentialModel::Kind::constant:
      return PotentialModel::constant(alpha0);
  }
  throw DomainError("unknown model kind");
}

bool ModelParams::has(const std::string& name) const {
  for (const auto& k : model_keys(kind)) {
    if (k == name) return true;
  }
  return false;
}

void ModelParams::set(const std::string& name, double value) {
  if (name == "v1") v1 = value;
  else if (name == "v2") v2 = value;
  else if (name == "alpha") alpha = value;
  else if (name == "c") c = value;
  else if (name == "gamma") gamma = value;
  else if (name == "a") a = value;
  else if (name == "b") b = value;
  else if (name == "alpha0") alpha0 = value;
  else throw DomainError("unknown model parameter '" + name + "'");
}

MassProfile MassParams::build() const {
  return kind == MassProfile::Kind::rational_x2m1 ? MassProfile::rational_x2m1(m0) : MassProfile::constant(m0);
}

RunConfig parse_config(const std::string& text, std::optional<Command> command) {
  Reader r(tokenize(text));
  RunConfig c;

  const int command_line = r.line_of("", "command");
  if (auto name = r.text("", "command")) {
    auto parsed = parse_command(*name);
    require(parsed.has_value(), "unknown command '" + *name + "'", command_line);
    require(!command || *command == *parsed, "config command '" + *name + "' disagrees with the command line",
            command_line);
    c.command = *parsed;
  } else if (command) {
    c.command = *command;
  } else {
    throw ConfigError("no command given");
  }

  // Model.
  if (c.command != Command::dirac) {
    require(r.has_section("model"), "missing [model] section", 0);
    const int kind_line = r.line_of("model", "kind");
    auto kind = r.text("model", "kind");
    require(kind.has_value(), "model.kind is required", 0);
    auto it = kModelKinds.find(*kind);
    require(it != kModelKinds.end(), "unknown model.kind '" + *kind + "'", kind_line);
    c.model.kind = it->second;
    const std::set<std::string> required = [&]() -> std::set<std::string> {
      switch (c.model.kind) {
        case PotentialModel::Kind::pseudo_pt:
          return {"v2"};
        case PotentialModel::Kind::pt_poschl_teller:
          return {"v1", "v2"};
        case PotentialModel::Kind::eckart_hermitian:
        case PotentialModel::Kind::eckart_complex:
          return {"a", "b"};
        case PotentialModel::Kind::constant:
          return {};
      }
      return {};
    }();
    int last = kind_line;
    for (const auto& key : model_keys(c.model.kind)) {
      if (auto v = r.real("model", key)) {
        c.model.set(key, *v);
        last = std::max(last, r.last_line());
      } else {
        require(!required.contains(key), "model." + key + " is required for " + *kind, kind_line);
      }
    }
    validate_model(c.model, last);
  }

  // Mass.
  if (auto kind = r.text("mass", "kind")) {
    if (*kind == "constant") {
      c.mass.kind = MassProfile::Kind::constant;
    } else if (*kind == "rational_x2m1") {
      c.mass.kind = MassProfile::Kind::rational_x2m1;
    } else {
      throw ConfigError("unknown mass.kind '" + *kind + "'", r.last_line());
    }
  }
  if (auto v = r.real("mass", "m0")) {
    require(*v > 0.0, "mass.m0 must be positive", r.last_line());
    c.mass.m0 = *v;
  }
  c.mass.x0 = c.mass.kind == MassProfile::Kind::rational_x2m1 ? std::numbers::sqrt2 : 0.0;
  if (auto v = r.real("mass", "x0")) {
    c.mass.x0 = *v;
    require(c.mass.kind != MassProfile::Kind::rational_x2m1 || *v > 1.0, "mass.x0 must exceed 1", r.last_line());
  }

  // Grid.
  c.grid = default_grid(c);
  if (auto v = r.real("grid", "a")) c.grid.a = *v;
  if (auto v = r.real("grid", "b")) c.grid.b = *v;
  if (auto v = r.integer("grid", "n")) c.grid.n = *v;
  const int grid_line = std::max({r.line_of("grid", "a"), r.line_of("grid", "b"), r.line_of("grid", "n")});
  require(c.grid.a < c.grid.b, "grid.a must be below grid.b", grid_line);
  require(c.grid.n >= 3, "grid.n must be at least 3", grid_line);
  if (c.mass.kind == MassProfile::Kind::rational_x2m1) {
    require(c.grid.a > 1.0, "rational_x2m1 mass needs grid.a > 1", grid_line);
  }
  if (c.command != Command::dirac && (c.model.kind == PotentialModel::Kind::eckart_hermitian ||
                                      c.model.kind == PotentialModel::Kind::eckart_complex)) {
    const double q_lo = c.mass.build().integral(c.mass.x0, c.grid.a);
    require(q_lo > 0.0, "Eckart models need q > 0 on the whole grid", grid_line);
  }

  // Solver.
  c.solver.im_tol = c.command == Command::dirac ? 1e-6 : default_im_tol(c.model.build().threshold());
  if (auto v = r.real("solver", "im_tol")) {
    require(*v >= 0.0, "solver.im_tol must be nonnegative", r.last_line());
    c.solver.im_tol = *v;
  }
  if (auto v = r.integer("solver", "trim")) {
    require(*v >= 2, "solver.trim must be at least 2", r.last_line());
    c.solver.trim = *v;
  }
  if (auto v = r.integer("solver", "dimension_cap")) {
    require(*v >= 3, "solver.dimension_cap must be at least 3", r.last_line());
    c.solver.dimension_cap = *v;
  }
  if (auto v = r.real("solver", "rtol")) {
    require(*v >= 0.0, "solver.rtol must be nonnegative", r.last_line());
    c.solver.rtol = *v;
  }
  if (auto v = r.real("solver", "atol")) {
    require(*v >= 0.0, "solver.atol must be nonnegative", r.last_line());
    c.solver.atol = *v;
  }
  require(c.grid.n - 2 <= c.solver.dimension_cap, "grid.n - 2 exceeds solver.dimension_cap", grid_line);

  // Verify gates.
  if (auto v = r.real("verify", "intertwining_tol")) c.verify.intertwining_tol = *v;
  if (auto v = r.real("verify", "ratio_lo")) c.verify.ratio_lo = *v;
  if (auto v = r.real("verify", "ratio_hi")) c.verify.ratio_hi = *v;
  if (auto v = r.real("verify", "pt_tol")) c.verify.pt_tol = *v;
  if (auto v = r.real("verify", "hermitian_tol")) c.verify.hermitian_tol = *v;
  require(c.verify.ratio_lo < c.verify.ratio_hi, "verify.ratio_lo must be below verify.ratio_hi",
          r.line_of("verify", "ratio_hi"));

  // Scan.
  if (auto p = r.text("scan", "parameter")) c.scan.parameter = *p;
  const int values_line = r.line_of("scan", "values");
  c.scan.values = r.list("scan", "values");
  {
    auto from = r.real("scan", "from");
    auto to = r.real("scan", "to");
    auto steps = r.integer("scan", "steps");
    if (from || to || steps) {
      require(from && to && steps, "scan.from, scan.to and scan.steps go together", r.last_line());
      require(c.scan.values.empty(), "give either scan.values or scan.from/to/steps", r.last_line());
      require(*steps >= 1, "scan.steps must be at least 1", r.last_line());
      for (int i = 0; i <= *steps; ++i) c.scan.values.push_back(*from + (*to - *from) * i / *steps);
    }
  }
  if (c.command == Command::scan) {
    require(!c.scan.values.empty(), "scan needs scan.values or scan.from/to/steps", values_line);
    require(c.model.has(c.scan.parameter),
            "scan.parameter '" + c.scan.parameter + "' is not a parameter of " + model_kind_name(c.model.kind),
            r.line_of("scan", "parameter"));
    for (double v : c.scan.values) {
      ModelParams m = c.model;
      m.set(c.scan.parameter, v);
      validate_model(m, values_line);
    }
  }

  // Dirac.
  if (auto w = r.text("dirac", "well")) {
    if (*w == "sech2") {
      c.dirac.well = DiracWell::sech2;
    } else if (*w == "zero") {
      c.dirac.well = DiracWell::zero;
    } else {
      throw ConfigError("unknown dirac.well '" + *w + "'", r.last_line());
    }
  }
  if (auto v = r.real("dirac", "depth")) c.dirac.depth = *v;
  if (auto v = r.real("dirac", "width")) {
    require(*v > 0.0, "dirac.width must be positive", r.last_line());
    c.dirac.width = *v;
  }
  if (auto v = r.integer("dirac", "level")) {
    require(*v >= 0 && *v < c.grid.n - 2, "dirac.level out of range", r.last_line());
    c.dirac.level = *v;
  }
  const double m0 = c.mass.m0;
  c.dirac.eps_lo = c.dirac.well == DiracWell::zero ? m0 : 1e-3 * m0;
  c.dirac.eps_hi = c.dirac.well == DiracWell::zero ? 2.0 * m0 : (1.0 - 1e-6) * m0;
  if (auto v = r.real("dirac", "eps_lo")) c.dirac.eps_lo = *v;
  if (auto v = r.real("dirac", "eps_hi")) c.dirac.eps_hi = *v;
  require(c.dirac.eps_lo < c.dirac.eps_hi, "dirac.eps_lo must be below dirac.eps_hi", r.line_of("dirac", "eps_hi"));
  if (auto v = r.real("dirac", "residual_tol")) c.dirac.residual_tol = *v;
  if (auto v = r.real("dirac", "ratio_lo")) c.dirac.ratio_lo = *v;
  if (auto v = r.real("dirac", "ratio_hi")) c.dirac.ratio_hi = *v;

  // Output.
  if (auto p = r.text("output", "path")) c.out_path = *p;
  if (auto f = r.text("output", "format")) {
    if (*f == "json") {
      c.format = OutputFormat::json;
    } else if (*f == "csv") {
      c.format = OutputFormat::csv;
    } else {
      throw ConfigError("unknown output.format '" + *f + "'", r.last_line());
    }
  }

  r.reject_leftovers({});
  return c;
}

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  out << "command = " << to_string(c.command) << "\n";
  if (c.command != Command::dirac) {
    out << "\n[model]\nkind = " << model_kind_name(c.model.kind) << "\n";
    ModelParams probe = c.model;
    for (const auto& key : model_keys(c.model.kind)) {
      const double v = key == "v1"       ? probe.v1
                       : key == "v2"     ? probe.v2
                       : key == "alpha"  ? probe.alpha
                       : key == "c"      ? probe.c
                       : key == "gamma"  ? probe.gamma
                       : key == "a"      ? probe.a
                       : key == "b"      ? probe.b
                                         : probe.alpha0;
      out << key << " = " << fmt(v) << "\n";
    }
  }
  out << "\n[mass]\nkind = " << (c.mass.kind == MassProfile::Kind::rational_x2m1 ? "rational_x2m1" : "constant")
      << "\nm0 = " << fmt(c.mass.m0) << "\nx0 = " << fmt(c.mass.x0) << "\n";
  out << "\n[grid]\na = " << fmt(c.grid.a) << "\nb = " << fmt(c.grid.b) << "\nn = " << c.grid.n << "\n";
  out << "\n[solver]\nim_tol = " << fmt(c.solver.im_tol) << "\ntrim = " << c.solver.trim
      << "\ndimension_cap = " << c.solver.dimension_cap << "\nrtol = " << fmt(c.solver.rtol)
      << "\natol = " << fmt(c.solver.atol) << "\n";
  if (c.command == Command::verify) {
    out << "\n[verify]\nintertwining_tol = " << fmt(c.verify.intertwining_tol)
        << "\nratio_lo = " << fmt(c.verify.ratio_lo) << "\nratio_hi = " << fmt(c.verify.ratio_hi)
        << "\npt_tol = " << fmt(c.verify.pt_tol) << "\nhermitian_tol = " << fmt(c.verify.hermitian_tol) << "\n";
  }
  if (c.command == Command::scan) {
    out << "\n[scan]\nparameter = " << c.scan.parameter << "\nvalues = " << join(c.scan.values) << "\n";
  }
  if (c.command == Command::dirac) {
    out << "\n[dirac]\nwell = " << (c.dirac.well == DiracWell::sech2 ? "sech2" : "zero")
        << "\ndepth = " << fmt(c.dirac.depth) << "\nwidth = " << fmt(c.dirac.width) << "\nlevel = " << c.dirac.level
        << "\neps_lo = " << fmt(c.dirac.eps_lo) << "\neps_hi = " << fmt(c.dirac.eps_hi)
        << "\nresidual_tol = " << fmt(c.dirac.residual_tol) << "\nratio_lo = " << fmt(c.dirac.ratio_lo)
        << "\nratio_hi = " << fmt(c.dirac.ratio_hi) << "\n";
  }
  return out.str();
}

DiracModel build_dirac_model(const RunConfig& c, const Grid& grid) {
  const double depth = c.dirac.well == DiracWell::zero ? 0.0 : c.dirac.depth;
  const double width = c.dirac.width;
  ComplexField v = kernels::sample(grid, [&](double x) {
    const double s = 1.0 / std::cosh(x / width);
    return cplx(-depth * s * s);
  });
  return DiracModel{std::move(v), c.mass.build()};
}

}  // namespace pdem
