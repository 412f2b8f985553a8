#include "horo/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "horo/errors.hpp"

namespace horo {

WitnessSchedule::WitnessSchedule(std::vector<std::uint64_t> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("witness schedule is empty");
  if (steps_.front() == 0) throw std::invalid_argument("witness schedule steps must be positive");
  if (std::adjacent_find(steps_.begin(), steps_.end(), std::greater_equal<>()) != steps_.end()) {
    throw std::invalid_argument("witness schedule must be strictly increasing");
  }
}

WitnessSchedule WitnessSchedule::geometric(unsigned lo, unsigned hi) {
  if (lo > hi || hi > 62) throw std::invalid_argument("bad geometric schedule bounds");
  std::vector<std::uint64_t> steps;
  for (unsigned e = lo; e <= hi; ++e) steps.push_back(std::uint64_t{1} << e);
  return WitnessSchedule(std::move(steps));
}

SparseVector l1_witness(const L1LimitFunctional& f, std::uint64_t size) {
  if (size == 0) throw std::invalid_argument("l1 witness needs a nonempty index set");
  const double count = static_cast<double>(size);
  SparseVector::Map y;
  for (Index j = 0; j < size; ++j) {
    const CoordMode& m = f.mode(j);
    const double v = m.is_sign() ? -m.sign_value() * count : m.anchor_value();
    if (v != 0.0) y.emplace_hint(y.end(), j, v);
  }
  return SparseVector(std::move(y));
}

double bounded_offset(const LpFiniteFunctional& f) {
  if (std::abs(f.c() - p_norm(f.z(), f.p())) <= kFamilyTolerance) return 0.0;
  const double gap = detail::abs_pow(f.c(), f.p()) - p_norm_pow(f.z(), f.p());
  return detail::root(std::max(gap, 0.0), f.p());
}

SparseVector lp_bounded_witness(const LpFiniteFunctional& f, std::uint64_t m) {
  const Index jm = nth_fresh_index(f.z().support(), m);
  return f.z().with(jm, bounded_offset(f) + f.z().at(jm));
}

SparseVector hilbert_finite_witness(const SparseVector& z, double c, std::uint64_t n) {
  const double zz = p_norm_pow(z, 2.0);
  if (!std::isfinite(c) || c < std::sqrt(zz) - kFamilyTolerance) {
    throw InvariantViolation("hilbert witness needs c >= ||z||_2");
  }
  const double coefficient =
      std::abs(c - std::sqrt(zz)) <= kFamilyTolerance ? 0.0 : std::sqrt(std::max(c * c - zz, 0.0));
  const Index jn = nth_fresh_index(z.support(), n);
  return z.with(jn, coefficient);
}

LinearWitness linear_witness(const LinearFunctional& f, std::uint64_t m) {
  const double q = f.q();
  const SparseVector& mu = f.mu();
  const Index jm = nth_fresh_index(mu.support(), m);

  // mu(j_m) = 0 by freshness, so the completed coordinate is
  // (1 - ||mu||_q^q)^{1/q}.
  const double rest = std::max(1.0 - p_norm_pow(mu, q) + detail::abs_pow(mu.at(jm), q), 0.0);
  SparseVector unit_dual = mu.with(jm, detail::root(rest, q));

  SparseVector::Map z;
  for (const auto& [j, v] : unit_dual.entries()) {
    z.emplace_hint(z.end(), j, std::copysign(std::pow(std::abs(v), q - 1.0), v));
  }
  SparseVector norming(std::move(z));
  SparseVector point = norming.scaled(static_cast<double>(m));
  return {jm, std::move(unit_dual), std::move(norming), std::move(point)};
}

SparseVector witness_point(const MetricFunctional& f, std::uint64_t step) {
  if (const auto* g = f.get_if<L1LimitFunctional>()) return l1_witness(*g, step);
  if (const auto* g = f.get_if<LpFiniteFunctional>()) return lp_bounded_witness(*g, step);
  if (const auto* g = f.get_if<LinearFunctional>()) return linear_witness(*g, step).point;
  throw std::logic_error("internal functionals have no witness sequence");
}

Index witness_moving_index(const MetricFunctional& f, std::uint64_t step) {
  if (f.get_if<L1LimitFunctional>()) return step;
  if (const auto* g = f.get_if<LpFiniteFunctional>()) return nth_fresh_index(g->z().support(), step);
  if (const auto* g = f.get_if<LinearFunctional>()) return nth_fresh_index(g->mu().support(), step);
  throw std::logic_error("internal functionals have no witness sequence");
}

std::pair<SparseVector, SparseVector> l1_contrast_sequences(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("example sequences start at n = 1");
  const double nn = static_cast<double>(n);
  // For n = 1 both displayed coordinates of y_n sit at index 0; the first
  // entry wins, matching y_1 = (1, 0, 0, ...).
  SparseVector::Map y{{0, 1.0}};
  y.emplace(n - 1, nn);
  SparseVector::Map y_tilde{{0, nn}};
  for (Index j = 1; j < n; ++j) y_tilde.emplace_hint(y_tilde.end(), j, 1.0);
  return {SparseVector(std::move(y)), SparseVector(std::move(y_tilde))};
}

InternalFunctional l1_contrast_internal_limit() { return InternalFunctional(1.0, SparseVector{{0, 1.0}}); }

L1LimitFunctional l1_contrast_at_infinity_limit() {
  return L1LimitFunctional({{0, CoordMode::sign(-1)}}, CoordMode::anchor(1.0));
}

}  // namespace horo
