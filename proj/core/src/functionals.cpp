#include "horo/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "horo/errors.hpp"

namespace horo {

namespace {

void require_reflexive_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::domain_error("family requires finite p > 1, got " + std::to_string(p));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

// CoordMode

CoordMode CoordMode::sign(int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("sign mode must be -1 or +1");
  return CoordMode(true, static_cast<double>(s));
}

CoordMode CoordMode::anchor(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("anchor must be finite");
  return CoordMode(false, t);
}

int CoordMode::sign_value() const {
  if (!is_sign_) throw std::logic_error("coordinate mode is an anchor");
  return value_ > 0 ? 1 : -1;
}

double CoordMode::anchor_value() const {
  if (is_sign_) throw std::logic_error("coordinate mode is a sign");
  return value_;
}

double CoordMode::term(double x) const noexcept {
  if (is_sign_) return value_ * x;
  return std::abs(x - value_) - std::abs(value_);
}

// L1LimitFunctional

L1LimitFunctional::L1LimitFunctional(ModeMap overrides, CoordMode default_mode)
    : overrides_(std::move(overrides)), default_(default_mode) {
  std::erase_if(overrides_, [&](const auto& kv) { return kv.second == default_; });
}

const CoordMode& L1LimitFunctional::mode(Index j) const noexcept {
  const auto it = overrides_.find(j);
  return it == overrides_.end() ? default_ : it->second;
}

bool L1LimitFunctional::has_sign_mode() const noexcept {
  if (default_.is_sign()) return true;
  for (const auto& [j, m] : overrides_) {
    if (m.is_sign()) return true;
  }
  return false;
}

Index L1LimitFunctional::first_sign_index() const {
  // Overrides are sorted, so the first gap (or the first Sign override)
  // settles it.
  Index expected = 0;
  for (const auto& [j, m] : overrides_) {
    if (default_.is_sign() && j != expected) return expected;
    if (m.is_sign()) return j;
    expected = j + 1;
  }
  if (default_.is_sign()) return expected;
  throw std::logic_error("functional has no Sign coordinate");
}

TailVector L1LimitFunctional::anchors() const {
  TailVector::Map values;
  for (const auto& [j, m] : overrides_) values.emplace_hint(values.end(), j, m.is_sign() ? 0.0 : m.anchor_value());
  return TailVector(std::move(values), default_.is_sign() ? 0.0 : default_.anchor_value());
}

// LpFiniteFunctional

LpFiniteFunctional::LpFiniteFunctional(double p, SparseVector z, double c) : p_(p), z_(std::move(z)), c_(c) {
  require_reflexive_exponent(p_);
  if (!std::isfinite(c_) || c_ < 0.0) throw InvariantViolation("c must be finite and nonnegative");
  const double norm = p_norm(z_, p_);
  if (c_ < norm - kFamilyTolerance) {
    throw InvariantViolation("c = " + std::to_string(c_) + " is below ||z||_p = " + std::to_string(norm));
  }
}

// LinearFunctional

LinearFunctional::LinearFunctional(double p, SparseVector mu) : p_(p), mu_(std::move(mu)) {
  require_reflexive_exponent(p_);
  const double norm = p_norm(mu_, q_conjugate(p_));
  if (norm > 1.0 + kFamilyTolerance) {
    throw InvariantViolation("||mu||_q = " + std::to_string(norm) + " exceeds 1");
  }
}

// InternalFunctional

InternalFunctional::InternalFunctional(double p_, SparseVector y_) : p(p_), y(std::move(y_)) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::domain_error("internal functional requires finite p >= 1, got " + std::to_string(p));
  }
}

// MetricFunctional

double MetricFunctional::exponent() const noexcept {
  return std::visit(Overloaded{
                        [](const InternalFunctional& f) { return f.p; },
                        [](const L1LimitFunctional&) { return 1.0; },
                        [](const LpFiniteFunctional& f) { return f.p(); },
                        [](const LinearFunctional& f) { return f.p(); },
                    },
                    v_);
}

const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::Internal: return "internal";
    case Family::L1Limit: return "l1_limit";
    case Family::LpFinite: return "lp_finite";
    case Family::Linear: return "linear";
  }
  return "unknown";
}

// Evaluation

double shifted_root_difference(double cp, double c, double s, double p) {
  if (p == 1.0) return s;
  if (c == 0.0) return detail::root(std::max(s, 0.0), p);
  const double ratio = s / cp;
  if (std::abs(ratio) < 0.5) {
    return c * std::expm1(std::log1p(ratio) / p);
  }
  return detail::root(std::max(cp + s, 0.0), p) - c;
}

PreparedInternal::PreparedInternal(double p, const SparseVector& y)
    : p_(p), y_(&y), norm_pow_(p_norm_pow(y, p)), norm_(detail::root(norm_pow_, p)) {}

double PreparedInternal::operator()(const SparseVector& x) const {
  CompensatedSum s;
  for (const auto& [j, xj] : x.entries()) {
    const double yj = y_->at(j);
    s.add(detail::abs_pow(xj - yj, p_) - detail::abs_pow(yj, p_));
  }
  const double sum = s.value();
  if (p_ == 1.0 || sum >= -0.5 * norm_pow_) return shifted_root_difference(norm_pow_, norm_, sum, p_);
  // x is close to y: cp + S would cancel to ||x - y||^p, so take it directly.
  return detail::root(p_norm_pow(x - *y_, p_), p_) - norm_;
}

double evaluate_internal(double p, const SparseVector& y, const SparseVector& x) {
  return PreparedInternal(p, y)(x);
}

double evaluate_l1_limit(const L1LimitFunctional& f, const SparseVector& x) {
  CompensatedSum s;
  for (const auto& [j, xj] : x.entries()) s.add(f.mode(j).term(xj));
  return s.value();
}

double evaluate_lp_finite(const LpFiniteFunctional& f, const SparseVector& x) {
  const double p = f.p();
  CompensatedSum s;
  for (const auto& [j, xj] : x.entries()) {
    const double zj = f.z().at(j);
    s.add(detail::abs_pow(xj - zj, p) - detail::abs_pow(zj, p));
  }
  return shifted_root_difference(detail::abs_pow(f.c(), p), f.c(), s.value(), p);
}

double evaluate_linear(const LinearFunctional& f, const SparseVector& x) {
  const double s = dual_pairing(f.mu(), x);
  return s == 0.0 ? 0.0 : -s;
}

double evaluate(const MetricFunctional& f, const SparseVector& x) {
  return std::visit(Overloaded{
                        [&](const InternalFunctional& g) { return evaluate_internal(g.p, g.y, x); },
                        [&](const L1LimitFunctional& g) { return evaluate_l1_limit(g, x); },
                        [&](const LpFiniteFunctional& g) { return evaluate_lp_finite(g, x); },
                        [&](const LinearFunctional& g) { return evaluate_linear(g, x); },
                    },
                    f.variant());
}

// Classification

namespace {

bool l1_is_internal(const L1LimitFunctional& f) {
  return !f.has_sign_mode() && f.anchors().has_finite_support();
}

}  // namespace

Classification classify(const MetricFunctional& f) {
  return std::visit(Overloaded{
                        [](const InternalFunctional&) { return Classification::Finite; },
                        [](const L1LimitFunctional& g) {
                          return l1_is_internal(g) ? Classification::Finite : Classification::AtInfinity;
                        },
                        [](const LpFiniteFunctional&) { return Classification::Finite; },
                        [](const LinearFunctional& g) {
                          return g.is_zero() ? Classification::Finite : Classification::AtInfinity;
                        },
                    },
                    f.variant());
}

double analytic_infimum(const MetricFunctional& f) {
  return std::visit(Overloaded{
                        [](const InternalFunctional& g) { return -p_norm(g.y, g.p); },
                        [](const L1LimitFunctional& g) {
                          return l1_is_internal(g) ? -p_norm(g.anchors().to_sparse(), 1.0) : kMinusInfinity;
                        },
                        [](const LpFiniteFunctional& g) {
                          // Convex in x with minimum at x = z, where the
                          // difference sum is exactly -||z||_p^p.
                          return shifted_root_difference(detail::abs_pow(g.c(), g.p()), g.c(),
                                                         -p_norm_pow(g.z(), g.p()), g.p());
                        },
                        [](const LinearFunctional& g) { return g.is_zero() ? 0.0 : kMinusInfinity; },
                    },
                    f.variant());
}

SparseVector analytic_minimizer(const MetricFunctional& f) {
  return std::visit(Overloaded{
                        [](const InternalFunctional& g) { return g.y; },
                        [](const L1LimitFunctional& g) {
                          if (!l1_is_internal(g)) throw std::logic_error("l1 functional at infinity has no minimizer");
                          return g.anchors().to_sparse();
                        },
                        [](const LpFiniteFunctional& g) { return g.z(); },
                        [](const LinearFunctional& g) {
                          if (!g.is_zero()) throw std::logic_error("linear functional at infinity has no minimizer");
                          return SparseVector{};
                        },
                    },
                    f.variant());
}

MetricFunctional canonicalize(const MetricFunctional& f) {
  if (const auto* g = f.get_if<LpFiniteFunctional>()) {
    if (std::abs(g->c() - p_norm(g->z(), g->p())) <= kFamilyTolerance) {
      return InternalFunctional(g->p(), g->z());
    }
  } else if (const auto* g = f.get_if<L1LimitFunctional>()) {
    if (l1_is_internal(*g)) return InternalFunctional(1.0, g->anchors().to_sparse());
  }
  return f;
}

}  // namespace horo
