#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"
#include "horo/errors.hpp"

using namespace horo;
using namespace horo::cli;
namespace fs = std::filesystem;

namespace {

const std::string kData = HORO_TEST_DATA_DIR;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "horo_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto config = load_config(kData + "/lp_finite.json");
  CHECK(config.functional.family() == Family::LpFinite);
  CHECK(config.schedule == WitnessSchedule({64, 128}));
  CHECK(config.seed == 7);
  CHECK(config.output_format == OutputFormat::Csv);

  const auto linear = load_config(kData + "/linear.json");
  CHECK(linear.schedule == WitnessSchedule::default_schedule());
  CHECK(linear.probe_magnitude == 1.0);
  CHECK(linear.probe_nonzeros == 5);
  CHECK(linear.tolerance == 1e-3);

  CHECK_THROWS_AS(load_config(kData + "/malformed.json"), ParseError);
  CHECK_THROWS_AS(load_config(kData + "/lp_finite_invalid.json"), InvariantViolation);
  CHECK_THROWS_AS(parse_config(R"({"functional":{"family":"linear","p":2,"mu":{"entries":{}}},"probe_count":0})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"functional":{"family":"linear","p":2,"mu":{"entries":{}}},"tolerance":-1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"functional":{"family":"linear","p":2,"mu":{"entries":{}}},"schedule":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"functional":{"family":"linear","p":2,"mu":{"entries":{}}},"schedule":[4,2]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"functional":{"family":"linear","p":2,"mu":{"entries":{}}},"output_format":"xml"})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(R"({"probe_count":3})"), ParseError);
}

TEST_CASE("converge exit codes") {
  CHECK(run({"converge", "--config", kData + "/lp_finite.json", "--out", scratch("a.csv").string()}) == kPass);
  CHECK(slurp(scratch("a.csv")) == "step,sup_error\n64,0\n128,0\n");
  CHECK(run({"converge", "--config", kData + "/linear.json", "--out", scratch("b.csv").string()}) == kPass);
  CHECK(run({"converge", "--config", kData + "/lp_finite_invalid.json"}) == kInvalidFunctional);
  CHECK(run({"converge", "--config", kData + "/malformed.json"}) == kParseError);
  CHECK(run({"converge", "--config", kData + "/missing.json"}) == kParseError);
  CHECK(run({"converge"}) == kParseError);
  CHECK(run({"converge", "--config", kData + "/lp_finite.json", "--format", "yaml"}) == kParseError);
  CHECK(run({}) == kParseError);
  CHECK(run({"frobnicate"}) == kParseError);
}

TEST_CASE("a failing report exits 1") {
  const auto path = scratch("tight.json");
  std::ofstream(path) << R"({"functional":{"family":"linear","p":2,"mu":{"entries":{"0":0.5}}},"tolerance":1e-9})";
  CHECK(run({"converge", "--config", path.string(), "--out", scratch("tight.csv").string()}) == kSuiteFailure);
}

TEST_CASE("converge reruns are bit-identical") {
  for (const char* name : {"linear.json", "l1_limit.json", "lp_finite.json"}) {
    for (const char* format : {"csv", "json"}) {
      const auto a = scratch(std::string("r1.") + format);
      const auto b = scratch(std::string("r2.") + format);
      const int ca = run({"converge", "--config", kData + "/" + name, "--format", format, "--out", a.string()});
      const int cb = run({"converge", "--config", kData + "/" + name, "--format", format, "--out", b.string()});
      CHECK(ca == cb);
      CHECK(slurp(a) == slurp(b));
      CHECK_FALSE(slurp(a).empty());
    }
  }
}

TEST_CASE("seed override changes the probes but not the verdict") {
  const auto a = scratch("s1.json");
  const auto b = scratch("s2.json");
  CHECK(run({"converge", "--config", kData + "/linear.json", "--format", "json", "--out", a.string()}) == kPass);
  CHECK(run({"converge", "--config", kData + "/linear.json", "--format", "json", "--seed", "5", "--out", b.string()}) ==
        kPass);
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("props") {
  PropsOptions o;
  o.families = parse_families("l1");
  o.per_family = 10;
  o.lipschitz_pairs = 500;
  std::ostringstream out;
  CHECK(cmd_props(o, out) == kPass);
  CHECK(out.str().find("l1_sign_ray") != std::string::npos);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(parse_families("all").size() == 4);
  CHECK(parse_families("lp,linear") == std::set<Family>{Family::LpFinite, Family::Linear});
  CHECK_THROWS_AS(parse_families("banach"), ParseError);
  CHECK(run({"props", "--families", "banach"}) == kParseError);
}

TEST_CASE("example34 table") {
  std::ostringstream out;
  std::ostringstream log;
  CHECK(cmd_example34(64, OutputFormat::Csv, out, log) == kPass);
  std::istringstream rows(out.str());
  std::string line;
  std::getline(rows, line);
  CHECK(line == "n,probe,h_y,limit_internal,h_y_tilde,limit_at_infinity,norm_y,norm_y_tilde");
  std::size_t count = 0;
  while (std::getline(rows, line)) ++count;
  CHECK(count == 7 * 4);  // n in {1, 2, ..., 64}, four probes
  // n = 64, probe e_0: both limits equal -1.
  CHECK(out.str().find("64,0,-1,-1,-1,-1,65,127\n") != std::string::npos);
  CHECK(log.str().find("confirmed") != std::string::npos);

  std::ostringstream json_out;
  CHECK(cmd_example34(8, OutputFormat::Json, json_out, log) == kPass);
  CHECK(nlohmann::json::parse(json_out.str())["rows"].size() == 4 * 4);
}
