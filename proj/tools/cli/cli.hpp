// Command-line front end: `horo converge | props | example34`.
//
// Exit codes: 0 pass, 1 suite failure, 2 parse error, 3 invalid functional.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "horo/functionals.hpp"
#include "horo/lab.hpp"
#include "horo/witnesses.hpp"

namespace horo::cli {

enum ExitCode : int { kPass = 0, kSuiteFailure = 1, kParseError = 2, kInvalidFunctional = 3 };

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  MetricFunctional functional;
  std::size_t probe_count = 20;
  Index probe_support_max = 49;
  std::size_t probe_nonzeros = 10;
  double probe_magnitude = 10.0;
  WitnessSchedule schedule = WitnessSchedule::default_schedule();
  double tolerance = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  OutputFormat output_format = OutputFormat::Csv;

  ProbeOptions probe_options() const;
};

/// Throws ParseError for malformed or out-of-range config fields, and
/// InvariantViolation / std::domain_error when the functional itself is
/// outside its family.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

OutputFormat parse_format(const std::string& name);

/// Runs the experiment and writes the report; returns kPass iff it passed.
int cmd_converge(const ExperimentConfig& config, std::ostream& out);

/// Runs the property suites and prints one row per suite.
int cmd_props(const PropsOptions& options, std::ostream& out);

/// Tabulates h_{y_n} and h_{ỹ_n} of the l1 contrast sequences against their
/// limits on a fixed probe set, for n in {1, 2, 4, ...} capped at n_max.
int cmd_example34(std::uint64_t n_max, OutputFormat format, std::ostream& out, std::ostream& log);

/// "internal,l1,lp,linear" (long family names are accepted too).
std::set<Family> parse_families(const std::string& list);

int run(const std::vector<std::string>& args);

}  // namespace horo::cli
