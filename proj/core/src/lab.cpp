#include "horo/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace horo {

namespace {

constexpr double kProbeGrid = 1073741824.0;  // 2^30

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_count(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double snapped_nonzero(std::mt19937_64& rng, double magnitude) {
  for (;;) {
    const double v = snap_to_probe_grid(uniform(rng, -magnitude, magnitude));
    if (v != 0.0) return v;
  }
}

std::vector<Index> distinct_indices(std::mt19937_64& rng, Index support_max, std::size_t count) {
  std::vector<Index> pool(support_max + 1);
  std::iota(pool.begin(), pool.end(), Index{0});
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min<std::size_t>(count, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// A point where h is small: the minimizer for finite functionals, the
/// anchored part for l1 functionals at infinity, 0 for linear ones.
SparseVector minimizer_candidate(const MetricFunctional& f) {
  if (const auto* g = f.get_if<InternalFunctional>()) return g->y;
  if (const auto* g = f.get_if<LpFiniteFunctional>()) return g->z();
  if (const auto* g = f.get_if<L1LimitFunctional>()) return SparseVector(g->anchors().overrides());
  return {};
}

/// Unit p-norm vector w with <mu, w> = ||mu||_q.
SparseVector norming_direction(const SparseVector& mu, double p) {
  const double q = q_conjugate(p);
  SparseVector::Map w;
  for (const auto& [j, v] : mu.entries()) w.emplace_hint(w.end(), j, std::copysign(std::pow(std::abs(v), q - 1.0), v));
  SparseVector out(std::move(w));
  return out.scaled(1.0 / p_norm(out, p));
}

}  // namespace

// ---------------------------------------------------------------------------

double one_dim_limit(double r, Direction direction) noexcept {
  const double v = direction == Direction::PlusInfinity ? -r : r;
  return v == 0.0 ? 0.0 : v;
}

double one_dim_term(double r, double a) noexcept { return std::abs(r - a) - std::abs(a); }

// ---------------------------------------------------------------------------

double snap_to_probe_grid(double v) noexcept { return std::round(v * kProbeGrid) / kProbeGrid; }

SparseVector random_sparse(std::mt19937_64& rng, Index support_max, std::size_t max_nonzeros, double magnitude) {
  const std::size_t cap = std::min<std::size_t>(max_nonzeros, support_max + 1);
  const std::size_t nnz = uniform_count(rng, 1, std::max<std::size_t>(cap, 1));
  SparseVector::Map entries;
  for (const Index j : distinct_indices(rng, support_max, nnz)) {
    entries.emplace_hint(entries.end(), j, snapped_nonzero(rng, magnitude));
  }
  return SparseVector(std::move(entries));
}

std::vector<SparseVector> random_probes(const ProbeOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<SparseVector> probes;
  probes.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    probes.push_back(random_sparse(rng, options.support_max, options.max_nonzeros, options.magnitude));
  }
  return probes;
}

double FunctionalSampler::pick_exponent(std::initializer_list<double> choices) {
  const std::size_t k = uniform_count(rng_, 0, choices.size() - 1);
  return *(choices.begin() + k);
}

InternalFunctional FunctionalSampler::internal() {
  const double p = pick_exponent({1.0, 1.5, 2.0, 3.0});
  if (uniform(rng_, 0.0, 1.0) < 0.1) return InternalFunctional(p, {});
  return InternalFunctional(p, random_sparse(rng_, 49, 10, 10.0));
}

L1LimitFunctional FunctionalSampler::l1_limit() {
  const auto shape = l1_counter_++ % 4;
  L1LimitFunctional::ModeMap overrides;
  for (const Index j : distinct_indices(rng_, 49, uniform_count(rng_, 1, 5))) {
    overrides.emplace(j, CoordMode::anchor(snapped_nonzero(rng_, 10.0)));
  }
  const auto random_sign = [&] { return uniform(rng_, 0.0, 1.0) < 0.5 ? -1 : 1; };
  switch (shape) {
    case 0: {
      for (const Index j : distinct_indices(rng_, 49, uniform_count(rng_, 1, 3))) {
        overrides.insert_or_assign(j, CoordMode::sign(random_sign()));
      }
      return L1LimitFunctional(std::move(overrides), CoordMode::anchor(0.0));
    }
    case 1:
      return L1LimitFunctional(std::move(overrides), CoordMode::anchor(0.0));
    case 2: {
      const double tail = random_sign() * snap_to_probe_grid(uniform(rng_, 0.5, 2.0));
      return L1LimitFunctional(std::move(overrides), CoordMode::anchor(tail));
    }
    default:
      return L1LimitFunctional(std::move(overrides), CoordMode::sign(random_sign()));
  }
}

LpFiniteFunctional FunctionalSampler::lp_finite(double p, double c_slack) {
  SparseVector z = random_sparse(rng_, 49, 10, 10.0);
  const double c = p_norm(z, p) + c_slack;
  return LpFiniteFunctional(p, std::move(z), c);
}

LpFiniteFunctional FunctionalSampler::lp_finite() {
  const double p = pick_exponent({1.5, 2.0, 3.0});
  return lp_finite(p, uniform(rng_, 0.0, 5.0));
}

LinearFunctional FunctionalSampler::linear(double p, double norm_lo, double norm_hi) {
  const SparseVector raw = random_sparse(rng_, 49, 10, 1.0);
  const double target = uniform(rng_, norm_lo, norm_hi);
  return LinearFunctional(p, raw.scaled(target / p_norm(raw, q_conjugate(p))));
}

LinearFunctional FunctionalSampler::linear() { return linear(pick_exponent({1.5, 2.0, 3.0})); }

// ---------------------------------------------------------------------------

ConvergenceReport run_convergence(const MetricFunctional& f, std::vector<SparseVector> probes,
                                  const WitnessSchedule& schedule, double tolerance) {
  ConvergenceReport report{f, std::move(probes), schedule, {}, {}, tolerance, true, false};
  if (f.family() == Family::Internal) {
    report.trivial = true;
    return report;
  }

  const double p = f.exponent();
  std::vector<double> limits;
  limits.reserve(report.probes.size());
  for (const auto& x : report.probes) limits.push_back(evaluate(f, x));

  report.errors.assign(report.probes.size(), std::vector<double>(schedule.size(), 0.0));
  report.sup_error_per_step.assign(schedule.size(), 0.0);
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const SparseVector y = witness_point(f, schedule.steps()[s]);
    const PreparedInternal h_y(p, y);
    for (std::size_t i = 0; i < report.probes.size(); ++i) {
      const double err = std::abs(h_y(report.probes[i]) - limits[i]);
      report.errors[i][s] = err;
      report.sup_error_per_step[s] = std::max(report.sup_error_per_step[s], err);
    }
  }
  report.passed = report.sup_error_per_step.empty() || report.sup_error_per_step.back() <= tolerance;
  return report;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("log-log fit needs positive data");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------

LipschitzResult lipschitz_check(const MetricFunctional& f, std::size_t pair_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double p = f.exponent();
  const SparseVector anchor = minimizer_candidate(f);
  LipschitzResult result;
  for (std::size_t i = 0; i < pair_count; ++i) {
    SparseVector x;
    SparseVector x_prime;
    switch (i % 4) {
      case 0:
      case 1:
        x = random_sparse(rng, 49, 10, 10.0);
        x_prime = random_sparse(rng, 49, 10, 10.0);
        break;
      case 2:
        x = random_sparse(rng, 49, 10, 10.0);
        x_prime = x + random_sparse(rng, 49, 3, 1e-3);
        break;
      default: {
        const Index j = uniform_count(rng, 0, 49);
        x_prime = anchor;
        x = anchor + SparseVector::basis(j, snapped_nonzero(rng, 10.0));
        break;
      }
    }
    const double d = p_norm(x - x_prime, p);
    if (d == 0.0) continue;
    result.max_ratio = std::max(result.max_ratio, std::abs(evaluate(f, x) - evaluate(f, x_prime)) / d);
    ++result.pairs;
  }
  return result;
}

std::vector<double> radon_riesz_check(const SparseVector& z, double c, const WitnessSchedule& schedule) {
  const double gap = c * c - p_norm_pow(z, 2.0);
  std::vector<double> out;
  out.reserve(schedule.size());
  for (const auto n : schedule.steps()) {
    out.push_back(p_norm_pow(hilbert_finite_witness(z, c, n) - z, 2.0) - gap);
  }
  return out;
}

double based_internal(double p, const SparseVector& base, const SparseVector& y, const SparseVector& x) {
  return p_norm(x - y, p) - p_norm(base - y, p);
}

double base_point_identity_check(double p, const SparseVector& y, const SparseVector& base,
                                 std::span<const SparseVector> probes) {
  const SparseVector origin;
  const double shift = based_internal(p, origin, y, base);
  double worst = 0.0;
  for (const auto& x : probes) {
    const double rebased = based_internal(p, origin, y, x) - shift;
    worst = std::max(worst, std::abs(rebased - based_internal(p, base, y, x)));
  }
  return worst;
}

double bracket_threshold(unsigned budget) noexcept {
  return -std::pow(10.0, static_cast<double>(budget) - 1.0);
}

double infimum_bracket(const MetricFunctional& f, unsigned budget) {
  double best = evaluate(f, SparseVector{});
  const auto consider = [&](const SparseVector& x) { best = std::min(best, evaluate(f, x)); };
  consider(minimizer_candidate(f));

  for (unsigned k = 0; k <= budget; ++k) {
    const double t = std::pow(10.0, static_cast<double>(k));
    if (const auto* g = f.get_if<L1LimitFunctional>()) {
      if (g->has_sign_mode()) {
        const Index j0 = g->first_sign_index();
        consider(SparseVector::basis(j0, -t * g->mode(j0).sign_value()));
      }
      const TailVector z = g->anchors();
      if (!z.has_finite_support()) {
        // Follow the anchor on a block of t coordinates: each contributes -|z(j)|.
        SparseVector::Map block;
        for (Index j = 0; j < static_cast<Index>(t); ++j) {
          if (!g->mode(j).is_sign() && z.at(j) != 0.0) block.emplace_hint(block.end(), j, z.at(j));
        }
        consider(SparseVector(std::move(block)));
      }
    } else if (const auto* g = f.get_if<LinearFunctional>(); g && !g->is_zero()) {
      const auto& mu = g->mu().entries();
      const auto top = std::max_element(mu.begin(), mu.end(), [](const auto& a, const auto& b) {
        return std::abs(a.second) < std::abs(b.second);
      });
      // Both rays are scaled so that h drops by t.
      consider(SparseVector::basis(top->first, std::copysign(t / std::abs(top->second), top->second)));
      consider(norming_direction(g->mu(), g->p()).scaled(t / p_norm(g->mu(), g->q())));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<MetricFunctional> generate_battery(const PropsOptions& options) {
  FunctionalSampler sampler(options.seed);
  std::vector<MetricFunctional> battery;
  for (const Family family : options.families) {
    for (std::size_t i = 0; i < options.per_family; ++i) {
      switch (family) {
        case Family::Internal:
          battery.emplace_back(sampler.internal());
          break;
        case Family::L1Limit:
          battery.emplace_back(sampler.l1_limit());
          break;
        case Family::LpFinite:
          if (i % 5 == 0) {
            battery.emplace_back(sampler.lp_finite(2.0 + static_cast<double>(i % 3) * 0.5, 0.0));
          } else {
            battery.emplace_back(sampler.lp_finite());
          }
          break;
        case Family::Linear:
          if (i % 10 == 0) {
            battery.emplace_back(LinearFunctional::zero(2.0));
          } else {
            battery.emplace_back(sampler.linear());
          }
          break;
      }
    }
  }
  return battery;
}

namespace {

SuiteResult make_result(std::string name, std::size_t cases, double deviation, double tolerance) {
  return {std::move(name), cases, deviation, tolerance, deviation <= tolerance};
}

template <class Pred>
std::vector<const MetricFunctional*> select(const std::vector<MetricFunctional>& battery, Pred pred) {
  std::vector<const MetricFunctional*> out;
  for (const auto& f : battery) {
    if (pred(f)) out.push_back(&f);
  }
  return out;
}

}  // namespace

std::vector<SuiteResult> run_property_suites(const PropsOptions& options) {
  const auto battery = generate_battery(options);
  const auto has = [&](Family fam) { return options.families.count(fam) > 0; };
  std::vector<SuiteResult> results;

  ProbeOptions probe_options;
  probe_options.seed = options.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto probes = random_probes(probe_options);
  probe_options.count = 50;
  probe_options.seed += 1;
  const auto wide_probes = random_probes(probe_options);

  // h(0) = 0
  {
    double worst = 0.0;
    for (const auto& f : battery) worst = std::max(worst, std::abs(evaluate(f, SparseVector{})));
    results.push_back(make_result("origin_vanishes", battery.size(), worst, 0.0));
  }

  // 1-Lipschitz, per family
  for (const Family fam : options.families) {
    const auto members = select(battery, [&](const MetricFunctional& f) { return f.family() == fam; });
    if (members.empty()) continue;
    const std::size_t per = (options.lipschitz_pairs + members.size() - 1) / members.size();
    double worst = 0.0;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto r = lipschitz_check(*members[k], per, options.seed + 7919 * (k + 1));
      worst = std::max(worst, r.max_ratio - 1.0);
      pairs += r.pairs;
    }
    results.push_back(make_result(std::string("lipschitz_") + family_name(fam), pairs, std::max(worst, 0.0), 1e-9));
  }

  // |h(x)| <= ||x||_p and canonicalize preserving values
  {
    double norm_excess = 0.0;
    double canon_gap = 0.0;
    for (const auto& f : battery) {
      const MetricFunctional g = canonicalize(f);
      for (const auto& x : wide_probes) {
        const double hx = evaluate(f, x);
        norm_excess = std::max(norm_excess, std::abs(hx) - p_norm(x, f.exponent()));
        canon_gap = std::max(canon_gap, std::abs(hx - evaluate(g, x)));
      }
    }
    const std::size_t cases = battery.size() * wide_probes.size();
    results.push_back(make_result("norm_bound", cases, std::max(norm_excess, 0.0), 1e-12));
    results.push_back(make_result("canonicalize_preserves_values", cases, canon_gap, 1e-12));
  }

  // classify vs analytic infimum vs bracket
  {
    std::size_t mismatches = 0;
    const double threshold = bracket_threshold(options.bracket_budget);
    for (const auto& f : battery) {
      const bool finite = classify(f) == Classification::Finite;
      const double inf = analytic_infimum(f);
      const double bracket = infimum_bracket(f, options.bracket_budget);
      const bool bracket_ok = finite ? bracket >= inf - 1e-9 : bracket <= threshold;
      if (finite != std::isfinite(inf) || !bracket_ok) ++mismatches;
    }
    results.push_back(make_result("classify_coherence", battery.size(), static_cast<double>(mismatches), 0.0));
  }

  if (has(Family::LpFinite)) {
    const auto members = select(battery, [](const MetricFunctional& f) { return f.family() == Family::LpFinite; });
    double below = 0.0;
    for (const auto* f : members) {
      const double inf = analytic_infimum(*f);
      below = std::max(below, std::abs(evaluate(*f, f->get_if<LpFiniteFunctional>()->z()) - inf));
      for (const auto& x : wide_probes) below = std::max(below, inf - evaluate(*f, x));
    }
    results.push_back(make_result("lp_finite_infimum", members.size(), below, 1e-12));

    // Inner-product form at p = 2 on 1000 random inputs.
    FunctionalSampler sampler(options.seed + 2);
    double gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const LpFiniteFunctional g = sampler.lp_finite(2.0, uniform(sampler.rng(), 0.0, 5.0));
      const SparseVector x = random_sparse(sampler.rng(), 49, 10, 10.0);
      const double inner = std::sqrt(p_norm_pow(x, 2.0) - 2.0 * dual_pairing(x, g.z()) + g.c() * g.c()) - g.c();
      gap = std::max(gap, std::abs(evaluate_lp_finite(g, x) - inner));
    }
    results.push_back(make_result("hilbert_inner_product_form", 1000, gap, 1e-12));

    double rr = 0.0;
    for (int i = 0; i < 100; ++i) {
      const LpFiniteFunctional g = sampler.lp_finite(2.0, uniform(sampler.rng(), 0.0, 5.0));
      for (const double d : radon_riesz_check(g.z(), g.c(), WitnessSchedule::default_schedule())) {
        rr = std::max(rr, std::abs(d));
      }
    }
    results.push_back(make_result("radon_riesz", 100, rr, 1e-9));
  }

  // Bounded witnesses converge and are exact past the probe supports.
  if (has(Family::LpFinite) || has(Family::L1Limit)) {
    const auto members = select(battery, [](const MetricFunctional& f) {
      return f.family() == Family::LpFinite || f.family() == Family::L1Limit;
    });
    double worst = 0.0;
    for (const auto* f : members) {
      const auto report = run_convergence(*f, probes, WitnessSchedule::default_schedule(), 1e-6);
      worst = std::max(worst, report.sup_error_per_step.back());
    }
    results.push_back(make_result("bounded_witness_convergence", members.size(), worst, 1e-6));
  }

  if (has(Family::Linear)) {
    const auto members = select(battery, [](const MetricFunctional& f) { return f.family() == Family::Linear; });
    const auto schedule = WitnessSchedule::default_schedule();
    double norming = 0.0;
    for (const auto* f : members) {
      const auto& g = *f->get_if<LinearFunctional>();
      for (const auto m : schedule.steps()) {
        const LinearWitness w = linear_witness(g, m);
        norming = std::max(norming, std::abs(p_norm(w.norming, g.p()) - 1.0));
        norming = std::max(norming, std::abs(dual_pairing(w.unit_dual, w.norming) - 1.0));
      }
    }
    results.push_back(make_result("duality_norming", members.size() * schedule.size(), norming, 1e-12));

    // O(1/m) rate at p = 2 on unit-scale probes supported below the first
    // moving index of the schedule.
    ProbeOptions small;
    small.magnitude = 1.0;
    small.max_nonzeros = 5;
    small.support_max = schedule.steps().front() - 2;
    small.seed = options.seed + 3;
    const auto small_probes = random_probes(small);
    std::vector<double> ms;
    for (const auto m : schedule.steps()) ms.push_back(static_cast<double>(m));
    double slope_excess = 0.0;
    double final_error = 0.0;
    std::size_t cases = 0;
    for (const auto* f : members) {
      const auto& g = *f->get_if<LinearFunctional>();
      if (g.p() != 2.0) continue;
      const auto report = run_convergence(*f, small_probes, schedule, 1e-2);
      final_error = std::max(final_error, report.sup_error_per_step.back());
      ++cases;
      if (g.is_zero()) continue;
      const double slope = loglog_slope(ms, report.sup_error_per_step);
      slope_excess = std::max(slope_excess, std::abs(slope + 1.0) - 0.3);
    }
    results.push_back(make_result("linear_rate_slope", cases, std::max(slope_excess, 0.0), 0.0));
    results.push_back(make_result("linear_final_error", cases, final_error, 1e-2));
  }

  if (has(Family::Internal)) {
    std::mt19937_64 rng(options.seed + 5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double p = std::array{1.0, 1.5, 2.0, 3.0}[uniform_count(rng, 0, 3)];
      const SparseVector y = random_sparse(rng, 49, 10, 10.0);
      const SparseVector base = random_sparse(rng, 49, 10, 10.0);
      const SparseVector x = random_sparse(rng, 49, 10, 10.0);
      worst = std::max(worst, base_point_identity_check(p, y, base, std::span(&x, 1)));
    }
    results.push_back(make_result("base_point_identity", 1000, worst, 1e-12));
  }

  if (has(Family::L1Limit)) {
    const auto members = select(battery, [](const MetricFunctional& f) { return f.family() == Family::L1Limit; });
    double ray = 0.0;
    std::size_t dichotomy_failures = 0;
    std::size_t with_sign = 0;
    for (const auto* f : members) {
      const auto& g = *f->get_if<L1LimitFunctional>();
      if (g.has_sign_mode()) {
        ++with_sign;
        const Index j0 = g.first_sign_index();
        const int eps = g.mode(j0).sign_value();
        for (const double t : {0.5, 1.0, 3.0, 10.0, 1e3, 1e6}) {
          ray = std::max(ray, std::abs(evaluate(*f, SparseVector::basis(j0, -t * eps)) + t));
        }
        if (classify(*f) != Classification::AtInfinity) ++dichotomy_failures;
      } else if (g.anchors().has_finite_support()) {
        if (canonicalize(*f).family() != Family::Internal) ++dichotomy_failures;
      }
    }
    results.push_back(make_result("l1_sign_ray", with_sign, ray, 0.0));
    results.push_back(make_result("l1_finite_are_internal", members.size(), static_cast<double>(dichotomy_failures), 0.0));
  }

  {
    double worst = 0.0;
    std::size_t cases = 0;
    for (const double r : {2.0, -2.0, 0.5, -0.5, 0.0}) {
      for (int e = 1; e <= 12; ++e) {
        const double a = std::pow(10.0, e);
        worst = std::max(worst, std::abs(one_dim_term(r, a) - one_dim_limit(r, Direction::PlusInfinity)));
        worst = std::max(worst, std::abs(one_dim_term(r, -a) - one_dim_limit(r, Direction::MinusInfinity)));
        cases += 2;
      }
    }
    results.push_back(make_result("one_dim_limit", cases, worst, 1e-9));
  }

  return results;
}

}  // namespace horo
