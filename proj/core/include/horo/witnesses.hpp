// Explicit sequences y_s whose internal functionals h_{y_s} converge
// pointwise to a given metric functional.
//
// Every "moving" coordinate is a fresh index outside the support of the
// functional's data, taken in increasing order. With disjoint supports the
// bounded constructions become exact as soon as the moving index leaves the
// support of the probe.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "horo/functionals.hpp"
#include "horo/index_space.hpp"

namespace horo {

/// Strictly increasing positive step parameters (net sizes, sequence indices).
class WitnessSchedule {
 public:
  explicit WitnessSchedule(std::vector<std::uint64_t> steps);

  /// {2^lo, 2^(lo+1), ..., 2^hi}.
  static WitnessSchedule geometric(unsigned lo, unsigned hi);
  static WitnessSchedule default_schedule() { return geometric(4, 12); }

  const std::vector<std::uint64_t>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }

  friend bool operator==(const WitnessSchedule&, const WitnessSchedule&) = default;

 private:
  std::vector<std::uint64_t> steps_;
};

/// y_F for F = {0, ..., size-1}: -eps(j)*#F on Sign coordinates, z(j) on
/// anchored ones, 0 off F.
SparseVector l1_witness(const L1LimitFunctional& f, std::uint64_t size);

/// a_{z,c} = (c^p - ||z||_p^p)^{1/p}; exactly 0 when c is within
/// kFamilyTolerance of ||z||_p.
double bounded_offset(const LpFiniteFunctional& f);

/// z + a_{z,c} e_{j_m} with j_m the m-th fresh index outside support(z).
SparseVector lp_bounded_witness(const LpFiniteFunctional& f, std::uint64_t m);

/// (c^2 - ||z||_2^2)^{1/2} u_n + z with u_n the n-th fresh basis vector.
/// Throws InvariantViolation when c < ||z||_2 - kFamilyTolerance.
SparseVector hilbert_finite_witness(const SparseVector& z, double c, std::uint64_t n);

struct LinearWitness {
  Index moving_index;     ///< j_m
  SparseVector unit_dual; ///< mu_m, ||mu_m||_q = 1
  SparseVector norming;   ///< z_m, ||z_m||_p = 1 and <mu_m, z_m> = 1
  SparseVector point;     ///< y_m = m * z_m
};

/// mu_m completes mu to the unit q-sphere on a fresh coordinate; its
/// norming vector is z_m(j) = sign(mu_m(j)) |mu_m(j)|^{q-1}.
LinearWitness linear_witness(const LinearFunctional& f, std::uint64_t m);

/// The witness point for step s of any non-internal family.
/// Throws std::logic_error for Internal functionals.
SparseVector witness_point(const MetricFunctional& f, std::uint64_t step);

/// First index the witness at `step` has not yet settled: the l1 and bounded
/// witnesses reproduce the limit on every probe supported strictly below it
/// (for the l1 family, up to |x(j)| <= step on Sign coordinates).
Index witness_moving_index(const MetricFunctional& f, std::uint64_t step);

/// The two sequences of the worked l1 example, 0-based:
///   y_n  = {0 -> 1, n-1 -> n}
///   ỹ_n  = {0 -> n, 1 -> 1, ..., n-1 -> 1}
std::pair<SparseVector, SparseVector> l1_contrast_sequences(std::uint64_t n);

/// Pointwise limit of h_{y_n}: the internal functional h_z, z = e_0.
InternalFunctional l1_contrast_internal_limit();

/// Pointwise limit of h_{ỹ_n}: Sign(-1) at 0, anchor 1 elsewhere.
L1LimitFunctional l1_contrast_at_infinity_limit();

}  // namespace horo
