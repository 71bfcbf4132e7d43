#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pdem/config.hpp"

namespace pdem {

using Json = nlohmann::ordered_json;

/// One pass/fail check of a pipeline run.
struct Gate {
  std::string name;
  double value;
  double lo;  // inclusive bounds; -inf / +inf when one-sided
  double hi;
  bool pass;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ResultDocument {
  Command command;
  std::string config_text;  // canonical echo of the producing config
  Json body;                // command-specific sections, in a fixed order
  CsvTable table;
  std::vector<Gate> gates;

  bool pass() const;
};

ResultDocument run_solve(const RunConfig& config);
ResultDocument run_verify(const RunConfig& config);
ResultDocument run_scan(const RunConfig& config);
ResultDocument run_dirac(const RunConfig& config);
ResultDocument run(const RunConfig& config);

/// Worker count for scans: PDEM_WORKERS when set (positive integer), else the OpenMP default.
/// Throws ConfigError on a malformed value.
int scan_workers();

/// %.17g.
std::string format_double(double v);

}  // namespace pdem
