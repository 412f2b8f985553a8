// Metric functionals on l_p(J), 1 <= p < inf.
//
// Every point of the metric compactification is one of four families:
//
//   Internal(p, y)     h_y(x)     = ||x - y||_p - ||y||_p
//   L1Limit            h(x)       = sum_{I} eps(j) x(j) + sum_{J\I} (|x(j) - z(j)| - |z(j)|)   (p = 1)
//   LpFinite(p, z, c)  h^{z,c}(x) = (||x - z||_p^p + c^p - ||z||_p^p)^{1/p} - c                (p > 1)
//   Linear(p, mu)      h^mu(x)    = -<mu, x>,  ||mu||_q <= 1                                     (p > 1)
//
// Evaluation is defined on c00 probes. Each closed form is a sum of
// per-coordinate terms that vanish where x(j) = 0, so only support(x) is
// visited.
#pragma once

#include <limits>
#include <map>
#include <variant>

#include "horo/index_space.hpp"

namespace horo {

/// Absolute slack used for the c >= ||z||_p and ||mu||_q <= 1 constraints and
/// for the c = ||z||_p coincidence in canonicalize.
inline constexpr double kFamilyTolerance = 1e-12;

/// Per-coordinate behaviour of an l1 limit functional: either a sign
/// eps(j) in {-1, +1} (the coordinate escaped to -eps(j) * infinity) or a
/// finite anchor z(j).
class CoordMode {
 public:
  static CoordMode sign(int s);
  static CoordMode anchor(double t);

  bool is_sign() const noexcept { return is_sign_; }
  int sign_value() const;
  double anchor_value() const;

  /// Contribution of one coordinate: eps*x or |x - t| - |t|.
  double term(double x) const noexcept;

  friend bool operator==(const CoordMode&, const CoordMode&) = default;

 private:
  CoordMode(bool is_sign, double value) : is_sign_(is_sign), value_(value) {}
  bool is_sign_;
  double value_;
};

class L1LimitFunctional {
 public:
  using ModeMap = std::map<Index, CoordMode>;

  /// Overrides equal to the default mode are dropped.
  L1LimitFunctional(ModeMap overrides, CoordMode default_mode);

  const CoordMode& mode(Index j) const noexcept;
  const ModeMap& overrides() const noexcept { return overrides_; }
  const CoordMode& default_mode() const noexcept { return default_; }

  bool has_sign_mode() const noexcept;
  /// First index carrying a Sign mode. Requires has_sign_mode().
  Index first_sign_index() const;

  /// The anchor vector z on J \ I, extended by 0 on the Sign coordinates.
  TailVector anchors() const;

  friend bool operator==(const L1LimitFunctional&, const L1LimitFunctional&) = default;

 private:
  ModeMap overrides_;
  CoordMode default_;
};

class LpFiniteFunctional {
 public:
  /// Throws std::domain_error unless p > 1; throws InvariantViolation when
  /// c < ||z||_p - kFamilyTolerance.
  LpFiniteFunctional(double p, SparseVector z, double c);

  double p() const noexcept { return p_; }
  const SparseVector& z() const noexcept { return z_; }
  double c() const noexcept { return c_; }

  friend bool operator==(const LpFiniteFunctional&, const LpFiniteFunctional&) = default;

 private:
  double p_;
  SparseVector z_;
  double c_;
};

class LinearFunctional {
 public:
  /// Throws std::domain_error unless p > 1; throws InvariantViolation when
  /// ||mu||_q > 1 + kFamilyTolerance.
  LinearFunctional(double p, SparseVector mu);

  /// The constant zero functional.
  static LinearFunctional zero(double p) { return LinearFunctional(p, {}); }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_conjugate(p_); }
  const SparseVector& mu() const noexcept { return mu_; }
  bool is_zero() const noexcept { return mu_.empty(); }

  friend bool operator==(const LinearFunctional&, const LinearFunctional&) = default;

 private:
  double p_;
  SparseVector mu_;
};

struct InternalFunctional {
  /// Throws std::domain_error for p < 1.
  InternalFunctional(double p, SparseVector y);

  double p;
  SparseVector y;

  friend bool operator==(const InternalFunctional&, const InternalFunctional&) = default;
};

enum class Family { Internal, L1Limit, LpFinite, Linear };

class MetricFunctional {
 public:
  using Variant = std::variant<InternalFunctional, L1LimitFunctional, LpFiniteFunctional, LinearFunctional>;

  MetricFunctional(InternalFunctional f) : v_(std::move(f)) {}
  MetricFunctional(L1LimitFunctional f) : v_(std::move(f)) {}
  MetricFunctional(LpFiniteFunctional f) : v_(std::move(f)) {}
  MetricFunctional(LinearFunctional f) : v_(std::move(f)) {}

  const Variant& variant() const noexcept { return v_; }
  Family family() const noexcept { return static_cast<Family>(v_.index()); }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }

  /// Exponent of the ambient space (1 for the l1 limit family).
  double exponent() const noexcept;

  friend bool operator==(const MetricFunctional&, const MetricFunctional&) = default;

 private:
  Variant v_;
};

const char* family_name(Family f) noexcept;

enum class Classification { Finite, AtInfinity };

double evaluate_internal(double p, const SparseVector& y, const SparseVector& x);

/// h_y with ||y||_p^p computed once, for repeated evaluation against many
/// probes. Produces the same bits as evaluate_internal. Probes with
/// ||x - y||_p^p < ||y||_p^p / 2 (p > 1) are evaluated from x - y directly,
/// which costs a pass over support(y).
class PreparedInternal {
 public:
  PreparedInternal(double p, const SparseVector& y);
  double operator()(const SparseVector& x) const;

 private:
  double p_;
  const SparseVector* y_;
  double norm_pow_;
  double norm_;
};

double evaluate_l1_limit(const L1LimitFunctional& f, const SparseVector& x);
double evaluate_lp_finite(const LpFiniteFunctional& f, const SparseVector& x);
double evaluate_linear(const LinearFunctional& f, const SparseVector& x);
double evaluate(const MetricFunctional& f, const SparseVector& x);

Classification classify(const MetricFunctional& f);

/// inf over l_p of h; -infinity for functionals at infinity.
double analytic_infimum(const MetricFunctional& f);

/// Point where analytic_infimum is attained, when it is finite.
SparseVector analytic_minimizer(const MetricFunctional& f);

/// Rewrites LpFinite with c = ||z||_p and Sign-free, tail-0 L1Limit as the
/// coinciding Internal functional; identity otherwise.
MetricFunctional canonicalize(const MetricFunctional& f);

/// (c^p + s)^{1/p} - c with cp = c^p, evaluated without cancellation when
/// |s| is small against c^p.
double shifted_root_difference(double cp, double c, double s, double p);

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

}  // namespace horo
