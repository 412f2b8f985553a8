#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "horo/errors.hpp"
#include "horo/io.hpp"

namespace horo::cli {

using nlohmann::json;

namespace {

template <class T>
T integer_field(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  const json& v = j[name];
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ParseError(std::string("\"") + name + "\" must be a nonnegative integer");
  }
  return static_cast<T>(v.get<std::uint64_t>());
}

double real_field(const json& j, const char* name, double fallback) {
  if (!j.contains(name)) return fallback;
  if (!j[name].is_number()) throw ParseError(std::string("\"") + name + "\" must be a number");
  return j[name].get<double>();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file " + path);
  return out;
}

}  // namespace

ProbeOptions ExperimentConfig::probe_options() const {
  ProbeOptions o;
  o.count = probe_count;
  o.support_max = probe_support_max;
  o.max_nonzeros = probe_nonzeros;
  o.magnitude = probe_magnitude;
  o.seed = seed;
  return o;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ParseError("output format must be csv or json, got \"" + name + "\"");
}

ExperimentConfig parse_config(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  if (!j.contains("functional")) throw ParseError("config is missing \"functional\"");

  ExperimentConfig config{functional_from_json(j["functional"])};
  config.probe_count = integer_field<std::size_t>(j, "probe_count", config.probe_count);
  config.probe_support_max = integer_field<Index>(j, "probe_support_max", config.probe_support_max);
  config.probe_nonzeros = integer_field<std::size_t>(j, "probe_nonzeros", config.probe_nonzeros);
  config.probe_magnitude = real_field(j, "probe_magnitude", config.probe_magnitude);
  config.tolerance = real_field(j, "tolerance", config.tolerance);
  config.seed = integer_field<std::uint64_t>(j, "seed", config.seed);

  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (!s.is_array()) throw ParseError("\"schedule\" must be an array of positive integers");
    std::vector<std::uint64_t> steps;
    for (const auto& v : s) {
      if (!v.is_number_unsigned()) throw ParseError("\"schedule\" must be an array of positive integers");
      steps.push_back(v.get<std::uint64_t>());
    }
    try {
      config.schedule = WitnessSchedule(std::move(steps));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (j.contains("output_format")) {
    if (!j["output_format"].is_string()) throw ParseError("\"output_format\" must be \"csv\" or \"json\"");
    config.output_format = parse_format(j["output_format"].get<std::string>());
  }

  if (config.probe_count < 1) throw ParseError("probe_count must be at least 1");
  if (config.probe_nonzeros < 1) throw ParseError("probe_nonzeros must be at least 1");
  if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance)) throw ParseError("tolerance must be positive");
  if (!(config.probe_magnitude > 0.0) || !std::isfinite(config.probe_magnitude)) {
    throw ParseError("probe_magnitude must be positive");
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

int cmd_converge(const ExperimentConfig& config, std::ostream& out) {
  const auto report =
      run_convergence(config.functional, random_probes(config.probe_options()), config.schedule, config.tolerance);
  if (config.output_format == OutputFormat::Json) {
    out << to_json(report).dump(2) << '\n';
  } else {
    write_convergence_csv(report, out);
  }
  return report.passed ? kPass : kSuiteFailure;
}

int cmd_props(const PropsOptions& options, std::ostream& out) {
  const auto results = run_property_suites(options);
  bool all = true;
  out << std::left << std::setw(32) << "suite" << std::right << std::setw(8) << "cases" << std::setw(26)
      << "deviation" << std::setw(10) << "tolerance" << "  verdict\n";
  for (const auto& r : results) {
    out << std::left << std::setw(32) << r.name << std::right << std::setw(8) << r.cases << std::setw(26)
        << format_double(r.deviation) << std::setw(10) << format_double(r.tolerance) << "  "
        << (r.passed ? "PASS" : "FAIL") << '\n';
    all = all && r.passed;
  }
  return all ? kPass : kSuiteFailure;
}

int cmd_example34(std::uint64_t n_max, OutputFormat format, std::ostream& out, std::ostream& log) {
  if (n_max < 1) throw ParseError("n_max must be at least 1");
  const MetricFunctional internal_limit = l1_contrast_internal_limit();
  const MetricFunctional infinity_limit = l1_contrast_at_infinity_limit();
  const std::vector<SparseVector> probes{
      SparseVector::basis(0),
      SparseVector::basis(1, 2.0),
      SparseVector{{0, -3.0}, {2, 0.5}},
      SparseVector{{1, 1.0}, {4, -2.0}},
  };
  Index probe_reach = 0;
  for (const auto& x : probes) probe_reach = std::max(probe_reach, x.max_index());

  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n < n_max; n *= 2) ns.push_back(n);
  ns.push_back(n_max);

  json rows = json::array();
  if (format == OutputFormat::Csv) out << "n,probe,h_y,limit_internal,h_y_tilde,limit_at_infinity,norm_y,norm_y_tilde\n";
  bool exact_past_reach = true;
  double last_norm_y = 0.0;
  double last_norm_y_tilde = 0.0;
  for (const auto n : ns) {
    const auto [y, y_tilde] = l1_contrast_sequences(n);
    last_norm_y = p_norm(y, 1.0);
    last_norm_y_tilde = p_norm(y_tilde, 1.0);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double hy = evaluate_internal(1.0, y, probes[i]);
      const double hyt = evaluate_internal(1.0, y_tilde, probes[i]);
      const double li = evaluate(internal_limit, probes[i]);
      const double la = evaluate(infinity_limit, probes[i]);
      if (n > probe_reach + 1 && (hy != li || hyt != la)) exact_past_reach = false;
      if (format == OutputFormat::Csv) {
        out << n << ',' << i << ',' << format_double(hy) << ',' << format_double(li) << ',' << format_double(hyt)
            << ',' << format_double(la) << ',' << format_double(last_norm_y) << ','
            << format_double(last_norm_y_tilde) << '\n';
      } else {
        rows.push_back({{"n", n},
                        {"probe", to_json(probes[i])},
                        {"h_y", hy},
                        {"limit_internal", li},
                        {"h_y_tilde", hyt},
                        {"limit_at_infinity", la},
                        {"norm_y", last_norm_y},
                        {"norm_y_tilde", last_norm_y_tilde}});
      }
    }
  }
  if (format == OutputFormat::Json) {
    out << json{{"limit_internal", to_json(internal_limit)},
                {"limit_at_infinity", to_json(infinity_limit)},
                {"rows", std::move(rows)}}
               .dump(2)
        << '\n';
  }

  const bool contrast = classify(internal_limit) == Classification::Finite &&
                        classify(infinity_limit) == Classification::AtInfinity;
  log << "||y_n||_1 = " << format_double(last_norm_y) << ", ||y~_n||_1 = " << format_double(last_norm_y_tilde)
      << " at n = " << n_max << '\n'
      << "lim h_{y_n}: internal (finite); lim h_{y~_n}: at infinity: " << (contrast ? "confirmed" : "NOT confirmed")
      << '\n'
      << "exact agreement once n exceeds the probe supports: " << (exact_past_reach ? "yes" : "NO") << '\n';
  return contrast && exact_past_reach ? kPass : kSuiteFailure;
}

std::set<Family> parse_families(const std::string& list) {
  std::set<Family> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "internal") {
      out.insert(Family::Internal);
    } else if (name == "l1" || name == "l1_limit") {
      out.insert(Family::L1Limit);
    } else if (name == "lp" || name == "lp_finite") {
      out.insert(Family::LpFinite);
    } else if (name == "linear") {
      out.insert(Family::Linear);
    } else if (name == "all") {
      out.insert({Family::Internal, Family::L1Limit, Family::LpFinite, Family::Linear});
    } else {
      throw ParseError("unknown family \"" + name + "\"");
    }
  }
  if (out.empty()) throw ParseError("no families selected");
  return out;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Metric functionals on l_p spaces: witnesses and verification suites", "horo"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name;
  std::uint64_t seed = kDefaultSeed;
  std::string families = "all";
  std::size_t per_family = 50;
  std::uint64_t n_max = 4096;

  auto* converge = app.add_subcommand("converge", "Run a witness convergence experiment from a JSON config");
  converge->add_option("--config", config_path, "Experiment config (JSON)")->required();
  converge->add_option("--out", out_path, "Report file (default: stdout)");
  converge->add_option("--format", format_name, "csv or json (overrides the config)");
  auto* converge_seed = converge->add_option("--seed", seed, "Probe seed (overrides the config)");

  auto* props = app.add_subcommand("props", "Run the property suites over a generated battery");
  props->add_option("--families", families, "Comma list of internal,l1,lp,linear (default: all)");
  props->add_option("--per-family", per_family, "Functionals per family")->check(CLI::PositiveNumber);
  props->add_option("--seed", seed, "Battery seed");
  props->add_option("--out", out_path, "Summary file (default: stdout)");

  auto* example = app.add_subcommand("example34", "Tabulate the l1 contrast sequences against their limits");
  example->add_option("--n-max", n_max, "Largest n")->check(CLI::PositiveNumber);
  example->add_option("--out", out_path, "Table file (default: stdout)");
  example->add_option("--format", format_name, "csv or json (default: csv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kParseError;
  }

  try {
    std::ofstream file;
    if (!out_path.empty()) file = open_output(out_path);
    std::ostream& out = out_path.empty() ? std::cout : file;

    if (*converge) {
      ExperimentConfig config = load_config(config_path);
      if (!format_name.empty()) config.output_format = parse_format(format_name);
      if (*converge_seed) config.seed = seed;
      const int code = cmd_converge(config, out);
      std::cerr << (code == kPass ? "converged" : "did not converge") << " within tolerance "
                << format_double(config.tolerance) << '\n';
      return code;
    }
    if (*props) {
      PropsOptions options;
      options.families = parse_families(families);
      options.seed = seed;
      options.per_family = per_family;
      return cmd_props(options, out);
    }
    const OutputFormat format = format_name.empty() ? OutputFormat::Csv : parse_format(format_name);
    return cmd_example34(n_max, format, out, std::cerr);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invalid functional: " << e.what() << '\n';
    return kInvalidFunctional;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid functional: " << e.what() << '\n';
    return kInvalidFunctional;
  }
}

}  // namespace horo::cli
