#include <doctest.h>

#include <cmath>
#include <random>

#include "horo/errors.hpp"
#include "horo/lab.hpp"
#include "horo/witnesses.hpp"

using namespace horo;

namespace {

L1LimitFunctional contrast_limit() {
  return L1LimitFunctional({{0, CoordMode::sign(-1)}}, CoordMode::anchor(1.0));
}

// ||y_F||_1 from the construction: #F per Sign coordinate, |z(j)| per anchor.
double l1_witness_norm(const L1LimitFunctional& f, std::uint64_t size) {
  double s = 0.0;
  for (Index j = 0; j < size; ++j) {
    const auto& m = f.mode(j);
    s += m.is_sign() ? static_cast<double>(size) : std::abs(m.anchor_value());
  }
  return s;
}

}  // namespace

TEST_CASE("WitnessSchedule validation") {
  CHECK(WitnessSchedule::default_schedule().steps().front() == 16);
  CHECK(WitnessSchedule::default_schedule().steps().back() == 4096);
  CHECK(WitnessSchedule::default_schedule().size() == 9);
  CHECK_THROWS_AS(WitnessSchedule({}), std::invalid_argument);
  CHECK_THROWS_AS(WitnessSchedule({4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(WitnessSchedule({0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(WitnessSchedule({8, 4}), std::invalid_argument);
}

TEST_CASE("l1_witness examples") {
  const L1LimitFunctional f({{0, CoordMode::sign(1)}}, CoordMode::anchor(0.0));
  const auto y = l1_witness(f, 5);
  CHECK(y == SparseVector{{0, -5.0}});
  CHECK(evaluate_internal(1.0, y, SparseVector::basis(0)) == 1.0);
  CHECK(evaluate_l1_limit(f, SparseVector::basis(0)) == 1.0);

  const L1LimitFunctional anchored({{0, CoordMode::anchor(1.0)}}, CoordMode::anchor(0.0));
  for (std::uint64_t size : {1, 2, 10}) CHECK(l1_witness(anchored, size) == SparseVector{{0, 1.0}});

  for (std::uint64_t n : {1, 2, 5, 17}) {
    CHECK(l1_witness(contrast_limit(), n) == l1_contrast_sequences(n).second);
  }
  CHECK(l1_witness(contrast_limit(), 3) == SparseVector{{0, 3.0}, {1, 1.0}, {2, 1.0}});
}

TEST_CASE("lp_bounded_witness examples") {
  const LpFiniteFunctional unit(2.0, {}, 1.0);
  CHECK(lp_bounded_witness(unit, 3) == SparseVector::basis(2));

  const SparseVector z{{0, 1.0}, {2, -2.0}};
  for (double p : {1.5, 2.0, 3.0}) {
    const LpFiniteFunctional tight(p, z, p_norm(z, p));
    for (std::uint64_t m : {1, 4, 9}) CHECK(lp_bounded_witness(tight, m) == z);
  }

  const LpFiniteFunctional f(2.0, SparseVector{{0, 1.0}}, std::sqrt(2.0));
  const auto y = lp_bounded_witness(f, 1);
  CHECK(y.nonzeros() == 2);
  CHECK(y.at(0) == 1.0);
  CHECK(y.at(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hilbert_finite_witness examples") {
  CHECK(hilbert_finite_witness({}, 1.0, 2) == SparseVector::basis(1));
  CHECK(p_norm(hilbert_finite_witness({}, 1.0, 2), 2.0) == 1.0);
  const SparseVector z{{0, 3.0}, {1, 4.0}};
  CHECK(hilbert_finite_witness(z, 5.0, 7) == z);
  const auto y = hilbert_finite_witness(SparseVector{{0, 1.0}}, std::sqrt(2.0), 1);
  CHECK(y.at(0) == 1.0);
  CHECK(y.at(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(hilbert_finite_witness(z, 4.0, 1), InvariantViolation);
}

TEST_CASE("linear_witness examples") {
  for (double p : {1.5, 2.0, 3.0}) {
    const LinearFunctional f(p, SparseVector{{0, 1.0}});
    for (std::uint64_t m : {1, 8, 100}) {
      const auto w = linear_witness(f, m);
      CHECK(w.unit_dual == SparseVector{{0, 1.0}});
      CHECK(w.norming == SparseVector::basis(0));
      CHECK(w.point == SparseVector::basis(0, static_cast<double>(m)));
      // ||x - m e_0||_p - m -> -x(0).
      const SparseVector x{{0, 0.5}, {3, 0.25}};
      const double h = evaluate_internal(p, w.point, x);
      CHECK(std::abs(h + 0.5) <= 1.0 / static_cast<double>(m));
    }
  }

  const auto zero = linear_witness(LinearFunctional::zero(2.0), 8);
  CHECK(zero.moving_index == 7);
  CHECK(zero.norming == SparseVector::basis(7));
  CHECK(zero.point == SparseVector::basis(7, 8.0));

  const auto w = linear_witness(LinearFunctional(2.0, SparseVector{{0, 0.6}}), 1);
  CHECK(w.moving_index == 1);
  CHECK(w.unit_dual.at(1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(w.norming.at(0) == 0.6);
  CHECK(w.norming.at(1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p_norm(w.norming, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("l1 contrast sequences") {
  CHECK(l1_contrast_sequences(1).first == SparseVector{{0, 1.0}});
  CHECK(l1_contrast_sequences(3).first == SparseVector{{0, 1.0}, {2, 3.0}});
  CHECK(l1_contrast_sequences(2).second == SparseVector{{0, 2.0}, {1, 1.0}});
  CHECK(l1_contrast_sequences(1).second == SparseVector{{0, 1.0}});
  // Probes from the CLI table: e_0 against both limits.
  CHECK(evaluate(l1_contrast_internal_limit(), SparseVector::basis(0)) == -1.0);
  CHECK(evaluate(l1_contrast_at_infinity_limit(), SparseVector::basis(0)) == -1.0);
  CHECK(evaluate(l1_contrast_internal_limit(), SparseVector::basis(1, 2.0)) == 2.0);
  CHECK(evaluate(l1_contrast_at_infinity_limit(), SparseVector::basis(1, 2.0)) == 0.0);
}

TEST_CASE("witness norm bookkeeping") {
  FunctionalSampler sampler(31);
  for (int i = 0; i < 40; ++i) {
    const auto f = sampler.l1_limit();
    for (std::uint64_t size : {1, 7, 64, 300}) {
      CHECK(p_norm(l1_witness(f, size), 1.0) == doctest::Approx(l1_witness_norm(f, size)).epsilon(1e-12));
    }
  }
  for (int i = 0; i < 40; ++i) {
    const auto f = sampler.lp_finite(2.0, 3.0);
    for (std::uint64_t n : {1, 5, 100}) {
      CHECK(std::abs(p_norm(hilbert_finite_witness(f.z(), f.c(), n), 2.0) - f.c()) <= 1e-12 * std::max(1.0, f.c()));
    }
  }
  for (double p : {1.5, 2.0, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const auto f = sampler.linear(p);
      for (std::uint64_t m : {1, 16, 4096}) {
        const auto w = linear_witness(f, m);
        const double md = static_cast<double>(m);
        CHECK(std::abs(p_norm(w.point, p) - md) <= 1e-12 * md);
        CHECK(std::abs(p_norm(w.norming, p) - 1.0) <= 1e-12);
        CHECK(std::abs(dual_pairing(w.unit_dual, w.norming) - 1.0) <= 1e-12);
        CHECK(std::abs(p_norm(w.unit_dual, q_conjugate(p)) - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("bounded witnesses are exact once the moving index clears the probe") {
  FunctionalSampler sampler(32);
  std::mt19937_64 rng(32);
  for (int i = 0; i < 30; ++i) {
    const MetricFunctional l1 = sampler.l1_limit();
    const MetricFunctional lp = sampler.lp_finite();
    for (std::uint64_t step : {60, 64, 200}) {
      CHECK(witness_moving_index(l1, step) > 49);
      CHECK(witness_moving_index(lp, step) > 49);
      const auto y1 = witness_point(l1, step);
      const auto yp = witness_point(lp, step);
      for (int k = 0; k < 10; ++k) {
        const auto x = random_sparse(rng, 49, 10, 10.0);
        // Dyadic probes against integer or anchor data: bit-exact.
        CHECK(evaluate_internal(1.0, y1, x) == evaluate(l1, x));
        // ||y_m||_p^p and c^p agree only up to rounding.
        CHECK(std::abs(evaluate_internal(lp.exponent(), yp, x) - evaluate(lp, x)) <= 1e-12);
      }
    }
    const auto g = sampler.lp_finite(2.0, 2.0);
    const auto x = random_sparse(rng, 49, 10, 10.0);
    CHECK(evaluate_internal(2.0, hilbert_finite_witness(g.z(), g.c(), 60), x) == doctest::Approx(evaluate(g, x)).epsilon(1e-14));
  }
}

TEST_CASE("linear witness error decays like 1/m at p = 2") {
  const auto schedule = WitnessSchedule::default_schedule();
  std::vector<double> ms;
  for (auto m : schedule.steps()) ms.push_back(static_cast<double>(m));
  const LinearFunctional f(2.0, SparseVector{{0, 1.0}});
  const auto report = run_convergence(f, {SparseVector{{0, 1.0}}, SparseVector{{0, -0.5}, {2, 0.75}}}, schedule, 1e-3);
  CHECK(report.passed);
  const double slope = loglog_slope(ms, report.sup_error_per_step);
  CHECK(slope >= -1.3);
  CHECK(slope <= -0.7);
  // Taylor oracle: sqrt(m^2 + 2 m x0 + |x|^2) - m - x0 ~ (|x|^2 - x0^2) / (2m).
  const double m = 4096.0;
  CHECK(report.errors[1].back() == doctest::Approx(0.5625 / (2.0 * m)).epsilon(1e-3));
}

TEST_CASE("at p = 3 the rate depends on how the probe meets support(mu)") {
  const auto schedule = WitnessSchedule::default_schedule();
  std::vector<double> ms;
  for (auto m : schedule.steps()) ms.push_back(static_cast<double>(m));
  const LinearFunctional f(3.0, SparseVector{{0, 0.5}, {1, 0.5}});
  // Probe on support(mu), not parallel to the norming vector: 1/m.
  const auto on = run_convergence(f, {SparseVector{{0, 1.0}}}, schedule, 1e-2);
  const double on_slope = loglog_slope(ms, on.sup_error_per_step);
  CHECK(on_slope >= -1.3);
  CHECK(on_slope <= -0.7);
  // Probe off support(mu): |x|^p m^{1-p} / p, so slope 1 - p.
  const auto off = run_convergence(f, {SparseVector{{5, 1.0}}}, schedule, 1e-2);
  CHECK(loglog_slope(ms, off.sup_error_per_step) == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("linear witness error decays like m^(1-p) for 1 < p < 2") {
  // Off the coordinate of mu the error is (m^p + |x|^p)^{1/p} - m ~ |x|^p m^{1-p} / p.
  const auto schedule = WitnessSchedule::default_schedule();
  std::vector<double> ms;
  for (auto m : schedule.steps()) ms.push_back(static_cast<double>(m));
  const double p = 1.5;
  const LinearFunctional f(p, SparseVector{{0, 1.0}});
  const auto report = run_convergence(f, {SparseVector{{0, 1.0}, {3, 1.0}}}, schedule, 1e-1);
  const double slope = loglog_slope(ms, report.sup_error_per_step);
  CHECK(slope == doctest::Approx(1.0 - p).epsilon(0.05));
}
