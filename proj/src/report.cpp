#include "pdem/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "pdem/errors.hpp"

namespace pdem {

namespace {

void newline(std::ostream& out, int indent, int depth) {
  if (indent < 0) return;
  out << '\n' << std::string(static_cast<std::size_t>(indent * depth), ' ');
}

bool is_scalar_array(const Json& v) {
  for (const auto& e : v) {
    if (e.is_structured() && !(e.is_array() && e.size() <= 2 && !e.empty() && e[0].is_number())) return false;
  }
  return true;
}

void write_value(const Json& v, std::ostream& out, int indent, int depth) {
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << ',';
        first = false;
        newline(out, indent, depth + 1);
        out << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write_value(item, out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Numbers and [re, im] pairs stay on one line; nested records get their own lines.
      if (is_scalar_array(v)) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write_value(v[i], out, -1, 0);
        }
        out << ']';
        return;
      }
      out << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        newline(out, indent, depth + 1);
        write_value(v[i], out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out << (std::isfinite(d) ? format_double(d) : "null");
      return;
    }
    default:
      out << v.dump();
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_json(const Json& value, std::ostream& out, int indent) { write_value(value, out, indent, 0); }

std::string export_document(const ResultDocument& doc, const ExportOptions& options) {
  std::ostringstream out;
  if (options.format == OutputFormat::csv) {
    for (std::size_t i = 0; i < doc.table.header.size(); ++i) out << (i ? "," : "") << doc.table.header[i];
    out << '\n';
    for (const auto& row : doc.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return out.str();
  }
  Json top = Json::object();
  top["command"] = to_string(doc.command);
  if (options.timestamp) top["generated_at"] = utc_now();
  top["config"] = doc.config_text;
  Json gates = Json::array();
  for (const auto& g : doc.gates) {
    gates.push_back({{"name", g.name}, {"value", g.value}, {"lo", g.lo}, {"hi", g.hi}, {"pass", g.pass}});
  }
  top["status"] = {{"pass", doc.pass()}, {"gates", gates}};
  for (const auto& [key, item] : doc.body.items()) top[key] = item;
  write_json(top, out);
  out << '\n';
  return out.str();
}

RunConfig read_config_echo(const std::string& json_text) {
  const Json doc = Json::parse(json_text);
  if (!doc.contains("config") || !doc["config"].is_string()) throw ConfigError("document carries no config echo");
  return parse_config(doc["config"].get<std::string>());
}

}  // namespace pdem
