// Numerical verification harness: convergence runs of witness sequences,
// the property suites, and the small analytic oracles (the one-dimensional
// limit, Radon-Riesz identity, base-point change, infimum bracketing).
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "horo/functionals.hpp"
#include "horo/index_space.hpp"
#include "horo/witnesses.hpp"

namespace horo {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// ---------------------------------------------------------------------------
// One-dimensional oracle

enum class Direction { PlusInfinity, MinusInfinity };

/// lim |r - a| - |a| as a -> +inf (-r) or a -> -inf (+r).
double one_dim_limit(double r, Direction direction) noexcept;

/// The finite-a evaluator |r - a| - |a|.
double one_dim_term(double r, double a) noexcept;

// ---------------------------------------------------------------------------
// Random probes and functionals

struct ProbeOptions {
  std::size_t count = 20;
  Index support_max = 49;        ///< supports confined to {0, ..., support_max}
  std::size_t max_nonzeros = 10; ///< each probe has 1..max_nonzeros entries
  double magnitude = 10.0;       ///< values uniform in [-magnitude, magnitude]
  std::uint64_t seed = kDefaultSeed;
};

/// Values are snapped to the dyadic grid 2^-30 so that differences against
/// integer-valued witness coordinates are exact in binary64.
double snap_to_probe_grid(double v) noexcept;

SparseVector random_sparse(std::mt19937_64& rng, Index support_max, std::size_t max_nonzeros, double magnitude);
std::vector<SparseVector> random_probes(const ProbeOptions& options);

/// Seeded generators for each family, drawing data supported in {0..49}.
class FunctionalSampler {
 public:
  explicit FunctionalSampler(std::uint64_t seed) : rng_(seed) {}

  InternalFunctional internal();
  /// Cycles through four shapes: Sign overrides on an anchored background,
  /// finitely supported anchors, anchors with a nonzero tail, and a Sign
  /// default with anchored overrides.
  L1LimitFunctional l1_limit();
  /// p in {1.5, 2, 3}, |support(z)| <= 10, c in [||z||_p, ||z||_p + 5].
  LpFiniteFunctional lp_finite();
  LpFiniteFunctional lp_finite(double p, double c_slack);
  /// ||mu||_q uniform in [norm_lo, norm_hi].
  LinearFunctional linear(double p, double norm_lo = 0.1, double norm_hi = 1.0);
  LinearFunctional linear();

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  double pick_exponent(std::initializer_list<double> choices);
  std::mt19937_64 rng_;
  std::uint64_t l1_counter_ = 0;
};

// ---------------------------------------------------------------------------
// Convergence

struct ConvergenceReport {
  MetricFunctional functional;
  std::vector<SparseVector> probes;
  WitnessSchedule schedule;
  std::vector<std::vector<double>> errors;  ///< errors[probe][step]
  std::vector<double> sup_error_per_step;
  double tolerance;
  bool passed;
  bool trivial;  ///< internal functional: nothing to converge
};

/// For each schedule step builds the family's witness y_s and records
/// |h_{y_s}(x) - h(x)| on every probe. Passes when the last sup error is
/// within tolerance.
ConvergenceReport run_convergence(const MetricFunctional& f, std::vector<SparseVector> probes,
                                  const WitnessSchedule& schedule, double tolerance);

/// Least-squares slope of log(ys) against log(xs). Requires positive data.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

// ---------------------------------------------------------------------------
// Property oracles

struct LipschitzResult {
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Samples pairs (x, x') and returns max |h(x) - h(x')| / ||x - x'||_p.
/// A quarter of the pairs sit at the family's natural minimizer candidate,
/// x' = m, x = m + t e_j, where the ratio is attained for internal h.
LipschitzResult lipschitz_check(const MetricFunctional& f, std::size_t pair_count, std::uint64_t seed);

/// ||y_n - z||_2^2 - (c^2 - ||z||_2^2) along the Hilbert bounded witness.
std::vector<double> radon_riesz_check(const SparseVector& z, double c, const WitnessSchedule& schedule);

/// ||x - y||_p - ||b - y||_p, the internal functional based at b.
double based_internal(double p, const SparseVector& base, const SparseVector& y, const SparseVector& x);

/// max over probes of |(h_{0,y}(x) - h_{0,y}(b')) - h_{b',y}(x)|.
double base_point_identity_check(double p, const SparseVector& y, const SparseVector& base,
                                 std::span<const SparseVector> probes);

/// Minimum of h over the minimizer candidate and ray probes with
/// t in {1, 10, ..., 10^budget}. Finite functionals stay above
/// analytic_infimum; functionals at infinity are pushed below
/// -10^(budget-1) by at least one ray.
double infimum_bracket(const MetricFunctional& f, unsigned budget);

/// The threshold a bracket must cross to certify "at infinity".
double bracket_threshold(unsigned budget) noexcept;

// ---------------------------------------------------------------------------
// Property suites

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  double deviation = 0.0;  ///< worst observed violation measure
  double tolerance = 0.0;
  bool passed = false;
};

struct PropsOptions {
  std::set<Family> families{Family::Internal, Family::L1Limit, Family::LpFinite, Family::Linear};
  std::uint64_t seed = kDefaultSeed;
  std::size_t per_family = 50;
  std::size_t lipschitz_pairs = 10000;  ///< per family
  unsigned bracket_budget = 4;
};

std::vector<MetricFunctional> generate_battery(const PropsOptions& options);

std::vector<SuiteResult> run_property_suites(const PropsOptions& options);

}  // namespace horo
