#include "horo/index_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace horo {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("vector entries must be finite");
  }
}

void require_norm_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::domain_error("p-norm requires finite p >= 1, got " + std::to_string(p));
  }
}

}  // namespace

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
}

SparseVector::SparseVector(Map entries) : entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    require_finite(it->second);
    it = it->second == 0.0 ? entries_.erase(it) : std::next(it);
  }
}

SparseVector::SparseVector(std::initializer_list<std::pair<const Index, double>> entries)
    : SparseVector(Map(entries)) {}

SparseVector SparseVector::basis(Index j, double value) {
  return SparseVector(Map{{j, value}});
}

double SparseVector::at(Index j) const noexcept {
  const auto it = entries_.find(j);
  return it == entries_.end() ? 0.0 : it->second;
}

std::set<Index> SparseVector::support() const {
  std::set<Index> out;
  for (const auto& [j, v] : entries_) out.insert(out.end(), j);
  return out;
}

Index SparseVector::max_index() const {
  if (entries_.empty()) throw std::logic_error("max_index of the zero vector");
  return entries_.rbegin()->first;
}

SparseVector SparseVector::scaled(double a) const {
  Map out;
  for (const auto& [j, v] : entries_) out.emplace_hint(out.end(), j, a * v);
  return SparseVector(std::move(out));
}

SparseVector SparseVector::with(Index j, double value) const {
  require_finite(value);
  SparseVector out = *this;
  if (value == 0.0) {
    out.entries_.erase(j);
  } else {
    out.entries_[j] = value;
  }
  return out;
}

TailVector::TailVector(Map overrides, double tail) : overrides_(std::move(overrides)), tail_(tail) {
  require_finite(tail_);
  for (auto it = overrides_.begin(); it != overrides_.end();) {
    require_finite(it->second);
    it = it->second == tail_ ? overrides_.erase(it) : std::next(it);
  }
}

TailVector::TailVector(const SparseVector& x) : TailVector(x.entries(), 0.0) {}

double TailVector::at(Index j) const noexcept {
  const auto it = overrides_.find(j);
  return it == overrides_.end() ? tail_ : it->second;
}

SparseVector TailVector::to_sparse() const {
  if (tail_ != 0.0) throw std::logic_error("TailVector with nonzero tail has infinite support");
  return SparseVector(overrides_);
}

double p_norm_pow(const SparseVector& x, double p) {
  require_norm_exponent(p);
  CompensatedSum acc;
  for (const auto& [j, v] : x.entries()) acc.add(detail::abs_pow(v, p));
  return acc.value();
}

double p_norm(const SparseVector& x, double p) {
  return detail::root(p_norm_pow(x, p), p);
}

double q_conjugate(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::domain_error("conjugate exponent requires finite p > 1, got " + std::to_string(p));
  }
  return p / (p - 1.0);
}

double dual_pairing(const SparseVector& mu, const SparseVector& x) {
  CompensatedSum acc;
  auto a = mu.entries().begin();
  auto b = x.entries().begin();
  while (a != mu.entries().end() && b != x.entries().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      acc.add(a->second * b->second);
      ++a;
      ++b;
    }
  }
  return acc.value();
}

SparseVector axpy(double a, const SparseVector& x, const SparseVector& y) {
  if (a == 0.0) return y;
  SparseVector::Map out = y.entries();
  for (const auto& [j, v] : x.entries()) out[j] += a * v;
  return SparseVector(std::move(out));
}

std::vector<Index> fresh_indices(const std::set<Index>& avoid, std::size_t count) {
  std::vector<Index> out;
  out.reserve(count);
  Index j = 0;
  auto it = avoid.begin();
  while (out.size() < count) {
    while (it != avoid.end() && *it < j) ++it;
    if (it != avoid.end() && *it == j) {
      ++it;
    } else {
      out.push_back(j);
    }
    ++j;
  }
  return out;
}

Index nth_fresh_index(const std::set<Index>& avoid, std::size_t n) {
  if (n == 0) throw std::invalid_argument("fresh index position is 1-based");
  Index j = static_cast<Index>(n - 1);
  for (const Index a : avoid) {
    if (a > j) break;
    ++j;
  }
  return j;
}

}  // namespace horo
