// JSON and CSV encodings.
//
//   SparseVector      {"entries": {"<index>": <number>, ...}}
//   TailVector        {"entries": {...}, "tail": <number>}
//   MetricFunctional  {"family": "internal" | "l1_limit" | "lp_finite" | "linear", ...}
//
// Numbers are written in shortest round-trip form, so every finite binary64
// value survives a write/read cycle bit for bit.
#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "horo/functionals.hpp"
#include "horo/index_space.hpp"
#include "horo/lab.hpp"

namespace horo {

nlohmann::json to_json(const SparseVector& x);
nlohmann::json to_json(const TailVector& x);
nlohmann::json to_json(const CoordMode& m);
nlohmann::json to_json(const MetricFunctional& f);
nlohmann::json to_json(const ConvergenceReport& report);

/// The parsers throw ParseError on schema mismatches. Family invariants
/// (c >= ||z||_p and so on) surface as InvariantViolation or
/// std::domain_error from the functional constructors.
SparseVector sparse_vector_from_json(const nlohmann::json& j);
TailVector tail_vector_from_json(const nlohmann::json& j);
CoordMode coord_mode_from_json(const nlohmann::json& j);
MetricFunctional functional_from_json(const nlohmann::json& j);

/// Parses text; malformed JSON is reported as ParseError.
nlohmann::json parse_json_text(const std::string& text);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// "step,sup_error" header and one row per schedule step.
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

}  // namespace horo
