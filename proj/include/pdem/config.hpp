#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdem/dirac.hpp"
#include "pdem/massmap.hpp"
#include "pdem/models.hpp"

namespace pdem {

enum class Command { solve, verify, scan, dirac };
enum class OutputFormat { json, csv };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct ModelParams {
  PotentialModel::Kind kind = PotentialModel::Kind::pseudo_pt;
  double v1 = 0.0;
  double v2 = 0.0;
  double alpha = 1.0;
  double c = 0.0;
  double gamma = 0.4;
  double a = 0.0;
  double b = 0.0;
  double alpha0 = 0.0;

  PotentialModel build() const;
  /// Reads or writes a named parameter ("v2", "gamma", ...); false for names the kind lacks.
  bool has(const std::string& name) const;
  void set(const std::string& name, double value);
};

struct MassParams {
  MassProfile::Kind kind = MassProfile::Kind::constant;
  double m0 = 1.0;
  double x0 = 0.0;

  MassProfile build() const;
  /// Unit constant mass: the grid is already the q grid.
  bool is_unit() const { return kind == MassProfile::Kind::constant && m0 == 1.0 && x0 == 0.0; }
};

struct GridParams {
  double a = -12.0;
  double b = 12.0;
  int n = 1201;

  Grid build() const { return Grid(a, b, n); }
};

struct SolverParams {
  double im_tol = 1e-6;
  int trim = 2;
  int dimension_cap = 2000;
  double rtol = 0.01;
  double atol = 0.05;
};

struct VerifyParams {
  double intertwining_tol = 2e-3;
  double ratio_lo = 3.5;
  double ratio_hi = 4.5;
  double pt_tol = 1e-12;
  double hermitian_tol = 1e-12;
};

struct ScanParams {
  std::string parameter = "v2";
  std::vector<double> values;
};

enum class DiracWell { sech2, zero };

struct DiracParams {
  DiracWell well = DiracWell::sech2;
  double depth = 0.5;
  double width = 1.0;
  int level = 0;
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  double residual_tol = 1e-3;
  double ratio_lo = 3.5;
  double ratio_hi = 4.5;
};

struct RunConfig {
  Command command = Command::solve;
  ModelParams model;
  MassParams mass;
  GridParams grid;
  SolverParams solver;
  VerifyParams verify;
  ScanParams scan;
  DiracParams dirac;
  std::optional<std::string> out_path;
  OutputFormat format = OutputFormat::json;
};

/// Parses flat `key = value` text with `[section]` headers, fills defaults and validates
/// every parameter. `command` overrides (and must agree with) a top-level `command` key.
/// Throws ConfigError carrying the offending line (0 when not tied to a line).
RunConfig parse_config(const std::string& text, std::optional<Command> command = std::nullopt);

/// Canonical text of a parsed config: every key of the sections the command uses, defaults
/// included, doubles with 17 significant digits. The [output] section is left out, so the
/// echo depends only on what determines the results; otherwise parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

DiracModel build_dirac_model(const RunConfig& config, const Grid& grid);

}  // namespace pdem
