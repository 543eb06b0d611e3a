#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fieldent/io.hpp"

// End-to-end checks of the installed binary. The test runner provides
// FIELDENT_CLI (binary path) and FIELDENT_SCHEMAS (schema directory).

namespace {

std::string cli_path() {
  const char* p = std::getenv("FIELDENT_CLI");
  REQUIRE(p != nullptr);
  return p;
}

std::string schema_dir() {
  const char* p = std::getenv("FIELDENT_SCHEMAS");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_file = "cli_stdout_" + std::to_string(counter++) + ".tmp";
  const std::string cmd = cli_path() + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
  const int raw = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = raw;
#else
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#endif
  std::ifstream f(out_file, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  r.stdout_text = ss.str();
  std::remove(out_file.c_str());
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json schema(const std::string& name) {
  return nlohmann::json::parse(slurp(schema_dir() + "/" + name));
}

}  // namespace

TEST_CASE("print-defaults", "[cli]") {
  auto r = run_cli("--print-defaults");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.contains("mode_tol"));
  CHECK(j.contains("contour_nodes"));
}

TEST_CASE("no subcommand is a usage error", "[cli]") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--definitely-not-a-flag").exit_code == 2);
}

TEST_CASE("modes subcommand emits the documented CSV", "[cli]") {
  auto r = run_cli(
      "modes --model vacuum --k-min 0.1 --k-max 10 --k-count 4 --tol 1e-8 --out modes_t.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = slurp("modes_t.csv");
  CHECK(csv.rfind("k,g_k,h_k,mu_k,u_k,n_k,T_k\n", 0) == 0);
  // manifest written beside the output
  auto manifest = nlohmann::json::parse(slurp("modes_t.csv.manifest.json"));
  CHECK(manifest["subcommand"] == "modes");
  CHECK(manifest["resolved_config"].contains("k_min"));
  std::string why;
  CHECK(fieldent::matches_schema(manifest, schema("manifest.schema.json"), &why));
}

TEST_CASE("entropy-scan csv and fit manifest", "[cli]") {
  auto r = run_cli(
      "entropy-scan --model lorentz --omega-p 0.1 --omega-0 1 --gamma-p 0.1 --dim 1 "
      "--cutoff-min 1 --cutoff-max 1e3 --cutoff-count 4 --out scan_t.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = slurp("scan_t.csv");
  CHECK(csv.rfind("cutoff,entropy_density,err_bound\n", 0) == 0);
  auto manifest = nlohmann::json::parse(slurp("scan_t.csv.manifest.json"));
  CHECK(manifest["resolved_config"]["fit"].contains("exponent"));

  auto rj = run_cli(
      "entropy-scan --model lorentz --omega-p 0.1 --omega-0 1 --gamma-p 0.1 --dim 1 "
      "--cutoff-min 1 --cutoff-max 1e3 --cutoff-count 4 --format json --out scan_t.json");
  CHECK(rj.exit_code == 0);
  auto j = nlohmann::json::parse(slurp("scan_t.json"));
  std::string why;
  CHECK(fieldent::matches_schema(j, schema("entropy_scan.schema.json"), &why));
}

TEST_CASE("plates subcommand emits the documented CSV", "[cli]") {
  auto r = run_cli(
      "plates --omega-0 3 --omega-p 0.1 --transverse-dim 0 --L-min 10 --L-max 22 --L-count 3 "
      "--tol 1e-9 --out plates_t.csv");
  CHECK(r.exit_code == 0);
  CHECK(slurp("plates_t.csv")
            .rfind("L,k_perp_dim,S,S_R,lambda_plus,lambda_minus,err_bound\n", 0) == 0);
  auto rj = run_cli(
      "plates --omega-0 3 --omega-p 0.1 --transverse-dim 0 --L-min 10 --L-max 22 --L-count 3 "
      "--tol 1e-9 --format json --out plates_t.json");
  CHECK(rj.exit_code == 0);
  std::string why;
  CHECK(fieldent::matches_schema(nlohmann::json::parse(slurp("plates_t.json")),
                                 schema("plates.schema.json"), &why));
}

TEST_CASE("oracle comparison report and gate", "[cli]") {
  auto r = run_cli(
      "oracle --sites 64 --plate-sep 8 --omega-0 3 --omega-p 0.2 --compare --out oracle_t.json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp("oracle_t.json"));
  std::string why;
  CHECK(fieldent::matches_schema(j, schema("oracle.schema.json"), &why));
  CHECK(j["rel_diff"].get<double>() < 0.01);
  CHECK(j["N"] == 64);
}

TEST_CASE("casimir-ee report", "[cli]") {
  auto r = run_cli("casimir-ee --omega-0 3 --omega-p 0.1 --L 6 --tol 1e-9 --out cee_t.json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp("cee_t.json"));
  std::string why;
  CHECK(fieldent::matches_schema(j, schema("casimir_ee.schema.json"), &why));
  CHECK(j["rel_diff"].get<double>() < 0.05);
}

TEST_CASE("williamson subcommand round trip", "[cli]") {
  nlohmann::json cov = {{"n", 1},
                        {"ordering", "interleaved"},
                        {"data", std::vector<double>{2.0, 0.0, 0.0, 2.0}}};
  fieldent::write_text_file("cov_t.json", cov.dump());
  auto r = run_cli("williamson --in cov_t.json --out wil_t.json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp("wil_t.json"));
  CHECK(j["spectrum"][0].get<double>() == Catch::Approx(2.0).margin(1e-10));
  CHECK(j["entropy"].get<double>() == Catch::Approx(0.954771).margin(1e-5));
}

TEST_CASE("config file with flag override", "[cli]") {
  nlohmann::json cfg = {{"omega_p", 0.3}, {"omega_0", 2.0}, {"k_count", 3},
                        {"k_min", 0.5},   {"k_max", 2.0},   {"tol", 1e-7}};
  fieldent::write_text_file("cfg_t.json", cfg.dump());
  auto r = run_cli("modes --model lorentz --config cfg_t.json --omega-p 0.05 --out cfgrun_t.csv");
  CHECK(r.exit_code == 0);
  auto manifest = nlohmann::json::parse(slurp("cfgrun_t.csv.manifest.json"));
  // flag wins over config; config fills the rest
  CHECK(manifest["resolved_config"]["omega_p"] == "0.05");
  CHECK(manifest["resolved_config"]["omega_0"] == "2.0");
}

TEST_CASE("exit codes for bad input", "[cli]") {
  CHECK(run_cli("entropy-scan --model unobtainium --out never.csv").exit_code == 2);
  CHECK(run_cli("entropy-scan --model lorentz --cutoff-min -5 --out never.csv").exit_code == 2);
  CHECK(run_cli("plates --omega-0 0.1 --omega-p 0.5 --out never.csv").exit_code == 2);
  // unwritable output path -> I/O error
  CHECK(run_cli("modes --model vacuum --k-count 2 --out /nonexistent-dir/x.csv").exit_code == 4);
}

TEST_CASE("byte-identical outputs across worker counts", "[cli]") {
  const std::string base =
      "modes --model lorentz --omega-p 0.1 --omega-0 1 --gamma-p 0.1 --k-min 0.1 --k-max 10 "
      "--k-count 6 --tol 1e-8";
  CHECK(run_cli(base + " --workers 1 --out det1.csv").exit_code == 0);
  CHECK(run_cli(base + " --workers 4 --out det4.csv").exit_code == 0);
  CHECK(slurp("det1.csv") == slurp("det4.csv"));
}
