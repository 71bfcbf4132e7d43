#pragma once

#include <ostream>
#include <string>

#include "pdem/pipeline.hpp"

namespace pdem {

struct ExportOptions {
  OutputFormat format = OutputFormat::json;
  bool timestamp = true;
};

/// JSON with a fixed key order and every double written with 17 significant digits;
/// non-finite numbers become null.
void write_json(const Json& value, std::ostream& out, int indent = 2);

std::string export_document(const ResultDocument& doc, const ExportOptions& options);

/// The config echoed in an exported JSON document, parsed again.
RunConfig read_config_echo(const std::string& json_text);

}  // namespace pdem
