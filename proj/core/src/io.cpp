#include "horo/io.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

#include "horo/errors.hpp"

namespace horo {

using nlohmann::json;

namespace {

Index parse_index(const std::string& key) {
  Index j = 0;
  const auto* first = key.data();
  const auto* last = key.data() + key.size();
  const auto [ptr, ec] = std::from_chars(first, last, j);
  if (key.empty() || ec != std::errc() || ptr != last) throw ParseError("invalid index key \"" + key + "\"");
  return j;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + name + "\"");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("field \"") + what + "\" must be a number");
  return j.get<double>();
}

template <class Build>
auto guarded(Build&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    // Non-finite or otherwise malformed values rejected by a constructor.
    if (dynamic_cast<const InvariantViolation*>(&e)) throw;
    throw ParseError(e.what());
  }
}

json entries_to_json(const std::map<Index, double>& entries) {
  json out = json::object();
  for (const auto& [j, v] : entries) out[std::to_string(j)] = v;
  return out;
}

std::map<Index, double> entries_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("\"entries\" must be an object");
  std::map<Index, double> out;
  for (const auto& [key, value] : j.items()) out[parse_index(key)] = number(value, key.c_str());
  return out;
}

}  // namespace

json to_json(const SparseVector& x) { return {{"entries", entries_to_json(x.entries())}}; }

json to_json(const TailVector& x) { return {{"entries", entries_to_json(x.overrides())}, {"tail", x.tail()}}; }

json to_json(const CoordMode& m) {
  if (m.is_sign()) return {{"sign", m.sign_value()}};
  return {{"anchor", m.anchor_value()}};
}

json to_json(const MetricFunctional& f) {
  json out;
  out["family"] = family_name(f.family());
  if (const auto* g = f.get_if<InternalFunctional>()) {
    out["p"] = g->p;
    out["y"] = to_json(g->y);
  } else if (const auto* g = f.get_if<L1LimitFunctional>()) {
    out["default"] = to_json(g->default_mode());
    json overrides = json::object();
    for (const auto& [j, m] : g->overrides()) overrides[std::to_string(j)] = to_json(m);
    out["overrides"] = std::move(overrides);
  } else if (const auto* g = f.get_if<LpFiniteFunctional>()) {
    out["p"] = g->p();
    out["z"] = to_json(g->z());
    out["c"] = g->c();
  } else if (const auto* g = f.get_if<LinearFunctional>()) {
    out["p"] = g->p();
    out["mu"] = to_json(g->mu());
  }
  return out;
}

json to_json(const ConvergenceReport& report) {
  json probes = json::array();
  for (const auto& x : report.probes) probes.push_back(to_json(x));
  return {
      {"functional", to_json(report.functional)},
      {"tolerance", report.tolerance},
      {"passed", report.passed},
      {"trivial", report.trivial},
      {"schedule", report.schedule.steps()},
      {"sup_error", report.sup_error_per_step},
      {"errors", report.errors},
      {"probes", std::move(probes)},
  };
}

SparseVector sparse_vector_from_json(const json& j) {
  return guarded([&] { return SparseVector(entries_from_json(field(j, "entries"))); });
}

TailVector tail_vector_from_json(const json& j) {
  return guarded([&] { return TailVector(entries_from_json(field(j, "entries")), number(field(j, "tail"), "tail")); });
}

CoordMode coord_mode_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw ParseError("coordinate mode must be {\"sign\": ±1} or {\"anchor\": t}");
  if (j.contains("sign")) {
    const json& s = j["sign"];
    if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1)) throw ParseError("sign must be -1 or 1");
    return CoordMode::sign(s.get<int>());
  }
  if (j.contains("anchor")) return guarded([&] { return CoordMode::anchor(number(j["anchor"], "anchor")); });
  throw ParseError("coordinate mode must be {\"sign\": ±1} or {\"anchor\": t}");
}

MetricFunctional functional_from_json(const json& j) {
  const json& tag = field(j, "family");
  if (!tag.is_string()) throw ParseError("\"family\" must be a string");
  const auto family = tag.get<std::string>();
  if (family == "internal") {
    return InternalFunctional(number(field(j, "p"), "p"), sparse_vector_from_json(field(j, "y")));
  }
  if (family == "l1_limit") {
    L1LimitFunctional::ModeMap overrides;
    if (j.contains("overrides")) {
      const json& o = j["overrides"];
      if (!o.is_object()) throw ParseError("\"overrides\" must be an object");
      for (const auto& [key, value] : o.items()) overrides.emplace(parse_index(key), coord_mode_from_json(value));
    }
    const CoordMode fallback = j.contains("default") ? coord_mode_from_json(j["default"]) : CoordMode::anchor(0.0);
    return L1LimitFunctional(std::move(overrides), fallback);
  }
  if (family == "lp_finite") {
    return LpFiniteFunctional(number(field(j, "p"), "p"), sparse_vector_from_json(field(j, "z")),
                              number(field(j, "c"), "c"));
  }
  if (family == "linear") {
    return LinearFunctional(number(field(j, "p"), "p"), sparse_vector_from_json(field(j, "mu")));
  }
  throw ParseError("unknown functional family \"" + family + "\"");
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "step,sup_error\n";
  const auto& steps = report.schedule.steps();
  for (std::size_t s = 0; s < report.sup_error_per_step.size(); ++s) {
    out << steps[s] << ',' << format_double(report.sup_error_per_step[s]) << '\n';
  }
}

}  // namespace horo
