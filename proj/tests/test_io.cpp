#include <doctest.h>

#include <cmath>
#include <random>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "horo/errors.hpp"
#include "horo/io.hpp"

using namespace horo;
using nlohmann::json;

namespace {

template <class T, class Parse>
T round_trip(const T& value, Parse parse) {
  return parse(json::parse(to_json(value).dump()));
}

}  // namespace

TEST_CASE("SparseVector and TailVector round-trip bit for bit") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> v(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    SparseVector::Map m;
    for (int k = 0; k < 6; ++k) m[rng() % 1000000] = v(rng) * std::pow(10.0, static_cast<double>(rng() % 40) - 20.0);
    const SparseVector x(m);
    CHECK(round_trip(x, sparse_vector_from_json) == x);
    const TailVector t(m, v(rng));
    CHECK(round_trip(t, tail_vector_from_json) == t);
  }
  const SparseVector tiny{{0, 5e-324}, {1, 0.1}, {18446744073709551615ull, -1.7976931348623157e308}};
  CHECK(round_trip(tiny, sparse_vector_from_json) == tiny);
  CHECK(to_json(SparseVector{{3, 1.5}}).dump() == R"({"entries":{"3":1.5}})");
}

TEST_CASE("functionals round-trip through JSON") {
  PropsOptions o;
  o.per_family = 25;
  for (const auto& f : generate_battery(o)) {
    const auto back = round_trip(f, functional_from_json);
    CHECK(back == f);
    CHECK(to_json(back)["family"] == family_name(f.family()));
  }
}

TEST_CASE("functional JSON schema") {
  const auto f = functional_from_json(json::parse(
      R"({"family":"l1_limit","default":{"anchor":1},"overrides":{"0":{"sign":-1},"4":{"anchor":1}}})"));
  const auto* g = f.get_if<L1LimitFunctional>();
  REQUIRE(g != nullptr);
  CHECK(g->overrides().size() == 1);
  CHECK(g->mode(0) == CoordMode::sign(-1));
  CHECK(g->mode(99) == CoordMode::anchor(1.0));

  const auto lin = functional_from_json(json::parse(R"({"family":"linear","p":2,"mu":{"entries":{}}})"));
  CHECK(lin.get_if<LinearFunctional>()->is_zero());
}

TEST_CASE("schema errors are ParseError") {
  const char* bad[] = {
      R"([])",
      R"({"p":2})",
      R"({"family":"hyperbolic"})",
      R"({"family":7})",
      R"({"family":"internal","p":"two","y":{"entries":{}}})",
      R"({"family":"internal","p":2,"y":{"entries":{"-1":1}}})",
      R"({"family":"internal","p":2,"y":{"entries":{"x":1}}})",
      R"({"family":"internal","p":2,"y":{"values":{}}})",
      R"({"family":"l1_limit","overrides":{"0":{"sign":0}}})",
      R"({"family":"l1_limit","overrides":{"0":{"sign":1,"anchor":2}}})",
      R"({"family":"l1_limit","overrides":[]})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(functional_from_json(json::parse(text)), ParseError);
  }
  CHECK_THROWS_AS(parse_json_text("{\"family\": "), ParseError);
}

TEST_CASE("family invariants surface from the constructors") {
  CHECK_THROWS_AS(
      functional_from_json(json::parse(R"({"family":"lp_finite","p":2,"z":{"entries":{"0":0.6,"1":0.8}},"c":0.5})")),
      InvariantViolation);
  CHECK_THROWS_AS(functional_from_json(json::parse(R"({"family":"linear","p":2,"mu":{"entries":{"0":1.5}}})")),
                  InvariantViolation);
  CHECK_THROWS_AS(functional_from_json(json::parse(R"({"family":"linear","p":1,"mu":{"entries":{}}})")),
                  std::domain_error);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1e-300) == "1e-300");
  std::mt19937_64 rng(52);
  for (int i = 0; i < 1000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("convergence CSV") {
  const auto report =
      run_convergence(LinearFunctional(2.0, SparseVector{{0, 1.0}}), {SparseVector{{0, 1.0}}}, WitnessSchedule({16, 32}), 1.0);
  std::ostringstream out;
  write_convergence_csv(report, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,sup_error");
  for (std::size_t s = 0; s < 2; ++s) {
    std::getline(in, line);
    const auto comma = line.find(',');
    CHECK(line.substr(0, comma) == std::to_string(report.schedule.steps()[s]));
    CHECK(std::stod(line.substr(comma + 1)) == report.sup_error_per_step[s]);
  }
  CHECK_FALSE(std::getline(in, line));

  const auto j = to_json(report);
  CHECK(j["errors"].size() == 1);
  CHECK(j["sup_error"].size() == 2);
  CHECK(j["passed"] == true);
}
