#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "levikit/cli.hpp"

using namespace levikit;
using namespace levikit::cli;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) { return std::string(LEVIKIT_DATA_DIR) + "/" + name; }

json schema() {
  std::ifstream in(std::string(LEVIKIT_DOCS_DIR) + "/report_schema.json");
  REQUIRE(in.good());
  json s;
  in >> s;
  return s;
}

// Structural validation against the subset of JSON Schema the shipped
// schema uses: type, required, properties, items, $ref into $defs.
void check_against(const json& schema_root, const json& node, const json& spec,
                   const std::string& where) {
  json resolved = spec;
  if (spec.contains("$ref")) {
    std::string ref = spec["$ref"];
    std::string key = ref.substr(ref.rfind('/') + 1);
    resolved = schema_root["$defs"][key];
  }
  if (resolved.contains("type")) {
    std::string t = resolved["type"];
    INFO(where << " expected type " << t);
    if (t == "object") REQUIRE(node.is_object());
    if (t == "array") REQUIRE(node.is_array());
    if (t == "string") REQUIRE(node.is_string());
    if (t == "number") REQUIRE(node.is_number());
    if (t == "integer") REQUIRE(node.is_number_integer());
    if (t == "boolean") REQUIRE(node.is_boolean());
  }
  if (resolved.contains("required")) {
    for (const auto& key : resolved["required"]) {
      INFO(where << " missing required key " << key);
      REQUIRE(node.contains(key.get<std::string>()));
    }
  }
  if (resolved.contains("properties") && node.is_object()) {
    for (const auto& [key, sub] : resolved["properties"].items())
      if (node.contains(key)) check_against(schema_root, node[key], sub, where + "." + key);
  }
  if (resolved.contains("items") && node.is_array()) {
    for (const auto& item : node) check_against(schema_root, item, resolved["items"], where + "[]");
  }
}

void validate_report(const std::string& text) {
  json s = schema();
  json doc = json::parse(text);
  check_against(s, doc, s, "$");
  REQUIRE(doc.contains("schema_version"));
  std::string cmd = doc["command"];
  REQUIRE(s["$defs"].contains(cmd));
  check_against(s, doc, s["$defs"][cmd], cmd);
}

struct Spawn {
  int code = -1;
  std::string out;
};

Spawn run_cli(const std::string& args) {
  std::string out_file = std::string("cli_out_") + std::to_string(::getpid()) + ".json";
  std::string cmd = std::string(LEVIKIT_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  Spawn s;
  s.code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream buf;
  buf << in.rdbuf();
  s.out = buf.str();
  std::remove(out_file.c_str());
  return s;
}

}  // namespace

TEST_CASE("analyze: example 1 reports the closed-form A_min") {
  RunConfig cfg;
  cfg.input_path = data_path("example1.dfn");
  cfg.q = 2;
  cfg.t_override = 2.0;
  cfg.center = std::vector<double>{0.1, 0, 0, 0, 0, 0.000666666666666667};
  CmdResult res = cmd_analyze(cfg);
  validate_report(res.json);
  json doc = json::parse(res.json);
  double a_min = doc["verdicts"]["necessary_A"]["value"];
  double r = doc["point"]["boundary"][0];
  CHECK(a_min == Catch::Approx(1.0 + 2.0 * (4.0 * std::pow(r, 4) + 1.0)).epsilon(1e-9));
  CHECK(doc["trace"]["residual"].get<double>() < 1e-12);
  CHECK(doc["determinant"]["residual"].get<double>() < 1e-12);
}

TEST_CASE("analyze: flat boundary is trivial with exit 0") {
  RunConfig cfg;
  cfg.input_path = data_path("flat.dfn");
  CmdResult res = cmd_analyze(cfg);
  validate_report(res.json);
  CHECK(res.code == kOk);
  json doc = json::parse(res.json);
  CHECK(doc["verdicts"]["necessary_A"]["kind"] == "trivial");
  CHECK(doc["verdicts"]["eps_almost_pseudoconvex"]["value"] == "inf");
}

TEST_CASE("scan: reports validate and are byte-identical for a fixed seed") {
  RunConfig cfg;
  cfg.input_path = data_path("example2.dfn");
  cfg.q = 2;
  cfg.samples = 40;
  cfg.seed = 99;
  CmdResult a = cmd_scan(cfg);
  CmdResult b = cmd_scan(cfg);
  validate_report(a.json);
  CHECK(a.json == b.json);
  CHECK(a.table == b.table);
  json doc = json::parse(a.json);
  CHECK(doc["scan"]["summary"]["det_nonpositive_at_all_samples"] == true);
}

TEST_CASE("scan: radius sweep table") {
  RunConfig cfg;
  cfg.input_path = data_path("example1.dfn");
  cfg.q = 2;
  cfg.samples = 150;
  cfg.seed = 5;
  cfg.radius_sweep = {0.2, 0.1, 0.05};
  CmdResult res = cmd_scan(cfg);
  validate_report(res.json);
  json doc = json::parse(res.json);
  REQUIRE(doc["radius_sweep"].size() == 3);
  // sup A_min decreases towards 1 + t = 3 as the radius shrinks (t = 2)
  double s0 = doc["radius_sweep"][0]["sup_A_min"];
  double s2 = doc["radius_sweep"][2]["sup_A_min"];
  CHECK(s0 >= s2 - 1e-9);
  CHECK(s2 == Catch::Approx(3.0).margin(0.1));
}

TEST_CASE("certify: tangential preset passes on the sphere") {
  RunConfig cfg;
  cfg.input_path = data_path("sphere.dfn");
  cfg.q = 2;
  cfg.A = 4.0;
  cfg.preset = "tangential";
  cfg.preset_t = 0.5;
  cfg.samples = 30;
  cfg.radius = 0.1;
  CmdResult res = cmd_certify(cfg);
  validate_report(res.json);
  CHECK(res.code == kOk);
  json doc = json::parse(res.json);
  CHECK(doc["validation"]["pass"] == true);
  CHECK(doc["validation"]["window_count"] == 2);
}

TEST_CASE("certify: example 2 preset passes at t = 2.5 and reports an empty window at 2.7") {
  RunConfig cfg;
  cfg.input_path = data_path("example2.dfn");
  cfg.q = 2;
  cfg.A = 120.0;
  cfg.preset = "example2";
  cfg.samples = 40;
  cfg.radius = 0.03;
  cfg.t_override = 2.5;
  CmdResult res = cmd_certify(cfg);
  validate_report(res.json);
  CHECK(res.code == kOk);
  json doc = json::parse(res.json);
  CHECK(doc["validation"]["pass"] == true);

  cfg.t_override = 2.7;
  CmdResult res2 = cmd_certify(cfg);
  CHECK(res2.code == kConditionFailure);
  json doc2 = json::parse(res2.json);
  CHECK(doc2["b_window"]["empty"] == true);
}

TEST_CASE("certify: [upsilon] section from a file") {
  RunConfig cfg;
  cfg.input_path = data_path("flat_upsilon.dfn");
  cfg.q = 1;
  cfg.A = 3.0;
  cfg.samples = 20;
  cfg.radius = 0.1;
  CmdResult res = cmd_certify(cfg);
  validate_report(res.json);
  CHECK(res.code == kOk);
  json doc = json::parse(res.json);
  CHECK(doc["field"] == "file");
  CHECK(doc["validation"]["pass"] == true);
}

TEST_CASE("model: certified lower bound matches the necessary condition") {
  RunConfig cfg;
  cfg.input_path = data_path("example1.dfn");
  cfg.q = 2;
  cfg.t_override = 2.0;
  CmdResult res = cmd_model(cfg);
  validate_report(res.json);
  json doc = json::parse(res.json);
  double lb = doc["certified_A_lb"]["value"];
  double na = doc["necessary_A"]["value"];
  CHECK(std::abs(lb - na) <= 0.02 * na);
}

TEST_CASE("reproduce: both example tables pass and are deterministic") {
  for (const char* which : {"example1", "example2"}) {
    RunConfig cfg;
    cfg.which = which;
    CmdResult a = cmd_reproduce(cfg);
    CmdResult b = cmd_reproduce(cfg);
    validate_report(a.json);
    CHECK(a.code == kOk);
    CHECK(a.json == b.json);
    json doc = json::parse(a.json);
    CHECK(doc["pass"] == true);
  }
}

TEST_CASE("CLI binary: exit codes and byte-identical scans") {
  Spawn bad = run_cli("analyze definitely_missing_file.dfn");
  CHECK(bad.code == kInputError);

  // malformed input file
  {
    std::ofstream out("malformed_test.dfn");
    out << "re(z1\n";
  }
  Spawn mal = run_cli("analyze malformed_test.dfn");
  CHECK(mal.code == kInputError);
  std::remove("malformed_test.dfn");

  Spawn flat = run_cli("analyze " + std::string(LEVIKIT_DATA_DIR) + "/flat.dfn");
  CHECK(flat.code == kOk);
  validate_report(flat.out);

  std::string scan_args = "scan " + std::string(LEVIKIT_DATA_DIR) +
                          "/example2.dfn --q 2 --samples 25 --seed 7";
  Spawn s1 = run_cli(scan_args);
  Spawn s2 = run_cli(scan_args);
  CHECK(s1.code == kConditionFailure);  // non-pseudoconvex points nearby
  CHECK(s1.out == s2.out);
  CHECK_FALSE(s1.out.empty());

  Spawn rep1 = run_cli("reproduce example1");
  Spawn rep2 = run_cli("reproduce example1");
  CHECK(rep1.code == kOk);
  CHECK(rep1.out == rep2.out);
}

TEST_CASE("upsilon section round trip through the serializer") {
  using namespace levikit::expr;
  upsilon::UpsilonField field = upsilon::UpsilonField::example2(0.8, 0.19, 2.5);
  std::string section = dfn::upsilon_section(field.entries(), 3, 0.5);
  std::string text =
      "param t = 2.5\nparam a = 0.8\nparam b = 0.19\n"
      "(1/4)*(abs2(z1)^2 + abs2(z2)^2) - t*abs2(z1)*abs2(z2) - im(z3)\n\n" + section;
  dfn::InputFile file = dfn::parse_input(text);
  REQUIRE(file.upsilon.size() == 9);
  CHECK(file.eta == 0.5);
  for (int i = 0; i < 9; ++i) REQUIRE(ast_equal(file.upsilon[i], field.entries()[i]));
}

TEST_CASE("dfn parsing errors carry positions") {
  CHECK_THROWS_AS(dfn::parse_input("[weird]\nre(z1)"), ParseError);
  CHECK_THROWS_AS(dfn::parse_input("re(z1)\n[anchor]\n0 0\n"), ParseError);  // wrong arity
  CHECK_THROWS_AS(dfn::parse_input("re(z1)\n[upsilon]\n1\n"), ParseError);   // wrong rows
}
