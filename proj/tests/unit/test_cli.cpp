#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdem/config.hpp"
#include "pdem/errors.hpp"
#include "pdem/pipeline.hpp"
#include "pdem/report.hpp"

using namespace pdem;
namespace fs = std::filesystem;

namespace {

const char* kPt = R"(# two towers
[model]
kind = pt_poschl_teller
v1 = 6.25
v2 = 2.5

[grid]
a = -12
b = 12
n = 301
)";

const char* kScan = R"(
[model]
kind = pt_poschl_teller
v1 = 6.25   # scanned below
v2 = 2

[grid]
n = 401

[scan]
parameter = v1
values = 10, 4, 8
)";

int config_line(const std::string& text) {
  try {
    parse_config(text, Command::solve);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string message(const std::string& text, std::optional<Command> cmd = Command::solve) {
  try {
    parse_config(text, cmd);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pdem_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const char* cli = std::getenv("PDEM_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "PDEM_CLI must point at the pdem binary");
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + cli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal pseudo_pt config fills defaults") {
  const RunConfig c = parse_config("[model]\nkind = pseudo_pt\nv2 = 2.5\n", Command::solve);
  CHECK(c.command == Command::solve);
  CHECK(c.model.kind == PotentialModel::Kind::pseudo_pt);
  CHECK(c.model.v2 == 2.5);
  CHECK(c.model.gamma == 0.4);
  CHECK(c.grid.a == -12.0);
  CHECK(c.grid.b == 12.0);
  CHECK(c.grid.n == 1201);
  CHECK(c.mass.is_unit());
  CHECK(c.solver.im_tol == 1e-6);
  CHECK(c.format == OutputFormat::json);
}

TEST_CASE("kind-dependent default grids") {
  const RunConfig e = parse_config("[model]\nkind = eckart_hermitian\na = 2\nb = 25\n", Command::solve);
  CHECK(e.grid.a == 0.05);
  CHECK(e.grid.b == 10.0);
  CHECK(e.grid.n == 1500);
  const RunConfig r =
      parse_config("[model]\nkind = eckart_hermitian\na = 2\nb = 25\n[mass]\nkind = rational_x2m1\n", Command::solve);
  CHECK(r.grid.a == 1.5);
  CHECK(r.grid.b == 5.0);
  CHECK(r.mass.x0 == doctest::Approx(std::sqrt(2.0)));
  const RunConfig d = parse_config("", Command::dirac);
  CHECK(d.grid.a == -15.0);
  CHECK(d.dirac.eps_lo == doctest::Approx(1e-3));
  CHECK(d.dirac.eps_hi == doctest::Approx(1.0 - 1e-6));
}

TEST_CASE("V1 = -0.5 violates V1 > -1/4") {
  const std::string text = "[model]\nkind = pt_poschl_teller\nv1 = -0.5\nv2 = 1\n";
  CHECK(message(text).find("model.v1") != std::string::npos);
  CHECK(config_line(text) > 0);
}

TEST_CASE("unknown keys are named with their line") {
  const std::string text = "[model]\nkind = pseudo_pt\nv2 = 2.5\n\n[grid]\nnn = 5\n";
  CHECK(message(text).find("grid.nn") != std::string::npos);
  CHECK(config_line(text) == 6);
}

TEST_CASE("malformed values and sections") {
  CHECK(config_line("[model]\nkind = pseudo_pt\nv2 = abc\n") == 3);
  CHECK(config_line("[model\n") == 1);
  CHECK(config_line("[model]\nkind = pseudo_pt\nv2 = 1\nv2 = 2\n") == 4);
  CHECK(config_line("[model]\nkind = pseudo_pt\nv2 = 1\n[grid]\nn = 2.5\n") == 5);
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 0\n").empty());
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\n").empty());
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 1\ngamma = 4\n").empty());
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 1\n[grid]\nn = 2003\n").empty());
  CHECK_FALSE(message("[model]\nkind = eckart_hermitian\na = 2\nb = 3\n").empty());
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 1\n", std::nullopt).empty());
  CHECK_FALSE(message("command = scan\n[model]\nkind = pseudo_pt\nv2 = 1\n", Command::solve).empty());
}

TEST_CASE("scan values from a range and from a list") {
  const RunConfig c = parse_config(
      "[model]\nkind = pseudo_pt\nv2 = 1\n[scan]\nfrom = 1\nto = 2\nsteps = 4\n", Command::scan);
  CHECK(c.scan.values == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 1\n[scan]\nparameter = b\nvalues = 1\n", Command::scan).empty());
  CHECK_FALSE(message("[model]\nkind = pseudo_pt\nv2 = 1\n[scan]\nvalues = 1, 0\n", Command::scan).empty());
}

TEST_CASE("the config echo leaves out the output destination") {
  const RunConfig c = parse_config(std::string(kPt) + "[output]\npath = x.csv\nformat = csv\n", Command::solve);
  CHECK(c.out_path == "x.csv");
  CHECK(render_config(c) == render_config(parse_config(kPt, Command::solve)));
}

TEST_CASE("rendered configs parse back to the same text") {
  for (const auto& [text, cmd] : std::vector<std::pair<std::string, Command>>{
           {kPt, Command::solve}, {kScan, Command::scan}, {kPt, Command::verify}, {"", Command::dirac}}) {
    const std::string once = render_config(parse_config(text, cmd));
    const RunConfig again = parse_config(once);
    CHECK(again.command == cmd);
    CHECK(render_config(again) == once);
  }
}

TEST_CASE("17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-4.0) == "-4");
  std::ostringstream out;
  write_json(Json{{"x", 1.0 / 3.0}, {"bad", std::numeric_limits<double>::quiet_NaN()}}, out);
  CHECK(out.str().find("0.33333333333333331") != std::string::npos);
  CHECK(out.str().find("null") != std::string::npos);
}

TEST_CASE("solve document: levels, config echo, CSV header") {
  const RunConfig c = parse_config(kPt, Command::solve);
  const ResultDocument doc = run(c);
  CHECK(doc.pass());
  const auto levels = doc.body["spectrum"]["real_levels"];
  REQUIRE(levels.size() == 2);
  CHECK(levels[0].get<double>() == doctest::Approx(-4.0).epsilon(0.01));
  CHECK(levels[1].get<double>() == doctest::Approx(-1.0).epsilon(0.01));

  const std::string json = export_document(doc, {OutputFormat::json, false});
  CHECK(json.find("generated_at") == std::string::npos);
  const Json parsed = Json::parse(json);
  CHECK(parsed.begin().key() == "command");
  CHECK(parsed["status"]["pass"] == true);
  CHECK(render_config(read_config_echo(json)) == render_config(c));

  const std::string csv = export_document(doc, {OutputFormat::csv, false});
  CHECK(csv.rfind("index,re,im,residual,class\n", 0) == 0);
  CHECK(export_document(doc, {OutputFormat::json, true}).find("generated_at") != std::string::npos);
}

TEST_CASE("empty spectrum exports empty arrays") {
  const RunConfig c = parse_config(
      "[model]\nkind = pt_poschl_teller\nv1 = 0\nv2 = 0.1\n[grid]\nn = 201\n", Command::solve);
  const ResultDocument doc = run(c);
  const Json parsed = Json::parse(export_document(doc, {OutputFormat::json, false}));
  CHECK(parsed["spectrum"]["real_levels"].is_array());
  CHECK(parsed["spectrum"]["real_levels"].empty());
  CHECK(parsed["analytic"]["levels"].empty());
  CHECK(doc.pass());
}

TEST_CASE("exports are deterministic without timestamps") {
  const RunConfig c = parse_config(kPt, Command::solve);
  CHECK(export_document(run(c), {OutputFormat::json, false}) == export_document(run(c), {OutputFormat::json, false}));
}

TEST_CASE("scan sorts values, counts levels and writes the fixed header") {
  const RunConfig c = parse_config(kScan, Command::scan);
  const ResultDocument doc = run(c);
  CHECK(doc.table.header == std::vector<std::string>{"param", "count", "E0", "E1", "E2", "E3"});
  REQUIRE(doc.table.rows.size() == 3);
  CHECK(doc.table.rows[0][0] == "4");
  CHECK(doc.table.rows[1][0] == "8");
  CHECK(doc.table.rows[2][0] == "10");
  for (const auto& g : doc.gates) CHECK_MESSAGE(g.pass, g.name);
  const std::string csv = export_document(doc, {OutputFormat::csv, false});
  CHECK(csv.rfind("param,count,E0,E1,E2,E3\n", 0) == 0);
}

TEST_CASE("verify with the null generator passes with zero residual") {
  const RunConfig c = parse_config("[model]\nkind = constant\nalpha0 = 3\n[grid]\nn = 201\n", Command::verify);
  const ResultDocument doc = run(c);
  CHECK(doc.pass());
  bool seen = false;
  for (const auto& g : doc.gates) {
    if (g.name == "intertwining") {
      CHECK(g.value == 0.0);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("worker count comes from the environment") {
  ::setenv("PDEM_WORKERS", "3", 1);
  CHECK(scan_workers() == 3);
  ::setenv("PDEM_WORKERS", "zero", 1);
  CHECK_THROWS_AS(scan_workers(), ConfigError);
  ::unsetenv("PDEM_WORKERS");
  CHECK(scan_workers() >= 1);
}

TEST_CASE("scan output does not depend on the worker count") {
  const RunConfig c = parse_config(kScan, Command::scan);
  ::setenv("PDEM_WORKERS", "1", 1);
  const std::string one = export_document(run(c), {OutputFormat::csv, false});
  ::setenv("PDEM_WORKERS", "4", 1);
  const std::string four = export_document(run(c), {OutputFormat::csv, false});
  ::unsetenv("PDEM_WORKERS");
  CHECK(one == four);
}

TEST_CASE("binary exit codes") {
  const fs::path good = scratch("good.cfg");
  const fs::path bad_key = scratch("bad_key.cfg");
  const fs::path failing = scratch("failing.cfg");
  const fs::path out = scratch("out.csv");
  write_file(good, kPt);
  write_file(bad_key, std::string(kPt) + "bogus = 1\n");
  // An impossible gate: ask for the constant model's intertwining below zero.
  write_file(failing, "[model]\nkind = constant\nalpha0 = 1\n[grid]\nn = 101\n[verify]\nhermitian_tol = -1\n"
                      "intertwining_tol = -1\n");

  CHECK(run_cli("solve --config \"" + good.string() + "\" --no-timestamp") == 0);
  CHECK(run_cli("solve --config \"" + bad_key.string() + "\"") == 2);
  CHECK(run_cli("solve --config /nonexistent/pdem.cfg") == 2);
  CHECK(run_cli("solve") == 2);
  CHECK(run_cli("solve --config \"" + good.string() + "\" --format xml") == 2);
  CHECK(run_cli("verify --config \"" + failing.string() + "\"") == 1);

  fs::remove(out);
  CHECK(run_cli("solve --config \"" + good.string() + "\" --format csv --out \"" + out.string() + "\"") == 0);
  CHECK(read_file(out).rfind("index,re,im,residual,class\n", 0) == 0);
  CHECK(render_config(parse_config(read_file(out.string() + ".cfg"))) == render_config(parse_config(kPt, Command::solve)));

  const fs::path a = scratch("a.json");
  const fs::path b = scratch("b.json");
  CHECK(run_cli("solve --config \"" + good.string() + "\" --no-timestamp --out \"" + a.string() + "\"") == 0);
  CHECK(run_cli("solve --config \"" + good.string() + "\" --no-timestamp --out \"" + b.string() + "\"",
                "PDEM_WORKERS=2") == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("shipped sample configs parse and render canonically") {
  const char* dir = std::getenv("PDEM_CONFIG_DIR");
  REQUIRE(dir != nullptr);
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const RunConfig c = parse_config(read_file(entry.path()));
    CHECK(render_config(parse_config(render_config(c))) == render_config(c));
    ++seen;
  }
  CHECK(seen >= 5);
}
