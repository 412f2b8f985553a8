// Sparse vectors over a countable index set.
//
// The abstract index set is modeled by the natural numbers. SparseVector is
// the finite-support class c00 used for every probe and every witness;
// TailVector is a cofinitely constant element of R^J (finitely many
// overrides on top of one tail value), which is enough to hold anchors such
// as (1, 1, 1, ...) that are not summable.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace horo {

using Index = std::uint64_t;

namespace detail {

inline double abs_pow(double v, double p) {
  if (p == 1.0) return std::abs(v);
  if (p == 2.0) return v * v;
  return std::pow(std::abs(v), p);
}

/// Inverse of abs_pow on [0, inf).
inline double root(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

}  // namespace detail

/// Neumaier-compensated accumulator. Deterministic for a fixed term order.
class CompensatedSum {
 public:
  void add(double term) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Finite-support vector in canonical form: the entry map never holds an
/// exact zero, so the key set is the support and equality is structural.
class SparseVector {
 public:
  using Map = std::map<Index, double>;

  SparseVector() = default;
  explicit SparseVector(Map entries);
  SparseVector(std::initializer_list<std::pair<const Index, double>> entries);

  static SparseVector basis(Index j, double value = 1.0);

  /// Value at j (0 outside the support).
  double at(Index j) const noexcept;
  const Map& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  std::set<Index> support() const;

  /// Largest index in the support; requires a nonempty vector.
  Index max_index() const;

  SparseVector scaled(double a) const;
  /// Returns a copy with entry j replaced (a zero value removes it).
  SparseVector with(Index j, double value) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Map entries_;
};

/// Cofinitely constant vector: value `tail` everywhere except at the
/// overridden indices. Overrides equal to the tail are dropped.
class TailVector {
 public:
  using Map = std::map<Index, double>;

  TailVector() = default;
  TailVector(Map overrides, double tail);
  explicit TailVector(const SparseVector& x);

  double at(Index j) const noexcept;
  const Map& overrides() const noexcept { return overrides_; }
  double tail() const noexcept { return tail_; }
  bool has_finite_support() const noexcept { return tail_ == 0.0; }

  /// Coercion to c00; throws std::logic_error when the tail is nonzero.
  SparseVector to_sparse() const;

  friend bool operator==(const TailVector&, const TailVector&) = default;

 private:
  Map overrides_;
  double tail_ = 0.0;
};

/// Sum of |x(j)|^p over the support (the p-th power of the p-norm).
double p_norm_pow(const SparseVector& x, double p);

/// (sum |x(j)|^p)^{1/p}. Throws std::domain_error for p < 1 or non-finite p.
double p_norm(const SparseVector& x, double p);

/// Hölder conjugate p/(p-1). Throws std::domain_error for p <= 1.
double q_conjugate(double p);

/// sum over the common support of mu(j) * x(j).
double dual_pairing(const SparseVector& mu, const SparseVector& x);

/// a*x + y in canonical form.
SparseVector axpy(double a, const SparseVector& x, const SparseVector& y);

inline SparseVector operator+(const SparseVector& x, const SparseVector& y) {
  return axpy(1.0, x, y);
}
inline SparseVector operator-(const SparseVector& x, const SparseVector& y) {
  return axpy(-1.0, y, x);
}

/// The `count` smallest indices not in `avoid`, increasing.
std::vector<Index> fresh_indices(const std::set<Index>& avoid, std::size_t count);

/// The n-th (1-based) smallest index not in `avoid`. O(|avoid|).
Index nth_fresh_index(const std::set<Index>& avoid, std::size_t n);

}  // namespace horo
