#include <doctest.h>

#include "qg3/geodesic.hpp"
#include "qg3/metric.hpp"
#include "test_util.hpp"

using namespace qg3;
using qg3::test::max_abs;

namespace {

PenaltyWeights weights(double p, double s = 1.0) {
  PenaltyWeights w;
  w.p = p;
  w.s = s;
  return w;
}

}  // namespace

TEST_CASE("cost functional") {
  PenaltyWeights w = weights(2.0);
  {
    CoefficientVector c(3);
    c.add(BasisLabel(3, {{1, 3}}), 1.0);
    CHECK(cost(c, w) == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    CoefficientVector c(3);
    c.add(BasisLabel(3, {{1, 1}, {2, 1}, {3, 1}}), -0.7);
    CHECK(cost(c, weights(5.0)) == doctest::Approx(5.0 * 0.7).epsilon(1e-15));
  }
  {
    CoefficientVector c(3);
    c.add(BasisLabel(3, {{1, 2}, {2, 5}}), 0.6);
    c.add(BasisLabel(3, {{1, 1}, {2, 1}, {3, 1}}), 0.8);
    CHECK(cost(c, w) == doctest::Approx(std::sqrt(2.92)).epsilon(1e-15));
  }
}

TEST_CASE("cost is a norm, monotone in p") {
  Rng rng(44);
  PenaltyWeights w = weights(3.0);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + (t % 3);
    CoefficientVector a = random_coefficient_vector(n, rng);
    CoefficientVector b = random_coefficient_vector(n, rng);
    const double alpha = rng.gaussian();
    CHECK(cost(alpha * a, w) == doctest::Approx(std::abs(alpha) * cost(a, w)).epsilon(1e-10));
    CHECK(cost(a + b, w) <= cost(a, w) + cost(b, w) + 1e-10);
  }
  CoefficientVector c = random_coefficient_vector(3, rng);
  double prev = cost(c, weights(1.0));
  for (double p : {2.0, 4.0, 8.0}) {
    const double now = cost(c, weights(p));
    CHECK(now > prev);  // strict: c has 3-body support almost surely
    prev = now;
  }
  // without >=3-body coefficients the cost is p-independent
  CoefficientVector low = c.body_filter(1, 2);
  CHECK(cost(low, weights(1.0)) == doctest::Approx(cost(low, weights(100.0))).epsilon(1e-15));
}

TEST_CASE("metric_inner") {
  PenaltyWeights w = weights(3.0);
  {
    CoefficientVector a(2), b(2);
    a.add(BasisLabel(2, {{1, 1}}), 1.0);
    b.add(BasisLabel(2, {{2, 1}}), 1.0);
    CHECK(metric_inner(a, b, w) == 0.0);
  }
  {
    CoefficientVector a(3);
    a.add(BasisLabel(3, {{1, 1}, {2, 1}, {3, 1}}), 1.0);
    CHECK(metric_inner(a, a, w) == doctest::Approx(9.0).epsilon(1e-15));
  }
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    CoefficientVector a = random_coefficient_vector(2, rng);
    CoefficientVector b = random_coefficient_vector(2, rng);
    CoefficientVector c = random_coefficient_vector(2, rng);
    const double alpha = rng.gaussian();
    CHECK(metric_inner(a + alpha * b, c, w) ==
          doctest::Approx(metric_inner(a, c, w) + alpha * metric_inner(b, c, w)).epsilon(1e-10));
    // F^2 = <c,c> at s = 1
    const double f = cost(c, w);
    CHECK(metric_inner(c, c, w) == doctest::Approx(f * f).epsilon(1e-12));
  }
  CoefficientVector a1(1), b2(2);
  CHECK_THROWS_AS(metric_inner(a1, b2, w), std::invalid_argument);
}

TEST_CASE("trace form of the generalized metric (n=3)") {
  // <a, b>_g = tr(decode(a) decode(G b)) / (2 * 3^2)
  const Basis& basis = Basis::get(3);
  Rng rng(70);
  for (double s : {1.0, 0.5}) {
    PenaltyWeights w = weights(3.0, s);
    for (int t = 0; t < 10; ++t) {
      CoefficientVector a = random_coefficient_vector(3, rng);
      CoefficientVector b = random_coefficient_vector(3, rng);
      const double lhs = metric_inner(a, b, w);
      const double rhs = (basis.decode(a) * basis.decode(apply_metric(b, w))).trace().real() / 18.0;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("split and metric map") {
  PenaltyWeights w = weights(4.0, 0.5);
  Rng rng(9);
  CoefficientVector c = random_coefficient_vector(3, rng);

  BodySplit parts = split_stq(c);
  CHECK(parts.S.max_body() <= 1);
  CHECK(parts.T.body_filter(2, 2).terms.size() == parts.T.terms.size());
  CHECK(parts.Q.body_filter(3, 3).terms.size() == parts.Q.terms.size());
  CHECK((parts.S + parts.T + parts.Q - c).norm2() == 0.0);

  // pure 2-body is fixed by G
  CHECK((apply_metric(parts.T, w) - parts.T).norm2() == 0.0);
  // pure 1-body scales by s
  CHECK((apply_metric(parts.S, w) - 0.5 * parts.S).norm2() < 1e-15);
  // G^{-1} G = id
  CHECK((apply_metric_inverse(apply_metric(c, w), w) - c).norm2() < 1e-12);

  CoefficientVector c2(2);
  CHECK_THROWS_AS(split_stq(c2), std::invalid_argument);
}

TEST_CASE("path_length") {
  PenaltyWeights w = weights(2.0);
  CoefficientVector unit(2);
  unit.add(BasisLabel(2, {{1, 1}}), 1.0);

  Schedule sch;
  sch.n = 2;
  sch.segments.push_back({2.0, unit});
  CHECK(path_length(sch, w) == doctest::Approx(2.0).epsilon(1e-15));

  // refinement invariance
  Rng rng(15);
  Schedule r = random_schedule(2, 3, rng, w, false);
  Schedule refined;
  refined.n = 2;
  for (const auto& seg : r.segments) {
    refined.segments.push_back({seg.dt * 0.25, seg.h});
    refined.segments.push_back({seg.dt * 0.75, seg.h});
  }
  CHECK(path_length(refined, w) == doctest::Approx(path_length(r, w)).epsilon(1e-12));

  // degree-1 homogeneity: double dt, halve coefficients
  Schedule scaled;
  scaled.n = 2;
  for (const auto& seg : r.segments) {
    Segment s2;
    s2.dt = 2.0 * seg.dt;
    s2.h = 0.5 * seg.h;
    scaled.segments.push_back(std::move(s2));
  }
  CHECK(path_length(scaled, w) == doctest::Approx(path_length(r, w)).epsilon(1e-12));

  // penalized segment from the cost example
  CoefficientVector mix(3);
  mix.add(BasisLabel(3, {{1, 2}, {2, 5}}), 0.6);
  mix.add(BasisLabel(3, {{1, 1}, {2, 1}, {3, 1}}), 0.8);
  Schedule pen;
  pen.n = 3;
  pen.segments.push_back({1.0, mix});
  CHECK(path_length(pen, w) == doctest::Approx(std::sqrt(2.92)).epsilon(1e-12));
}

TEST_CASE("normalize_schedule") {
  PenaltyWeights w = weights(3.0);
  Rng rng(23);

  Schedule sch = random_schedule(2, 3, rng, w, true);
  Schedule same = normalize_schedule(sch, w);
  for (size_t i = 0; i < sch.segments.size(); ++i) {
    CHECK(same.segments[i].dt == doctest::Approx(sch.segments[i].dt).epsilon(1e-12));
    CHECK((same.segments[i].h - sch.segments[i].h).norm2() < 1e-12);
  }

  // a segment with F = 2 stretches to twice the duration
  CoefficientVector c(2);
  c.add(BasisLabel(2, {{1, 1}}), 2.0);
  Schedule raw;
  raw.n = 2;
  raw.segments.push_back({1.0, c});
  Schedule norm = normalize_schedule(raw, w);
  CHECK(norm.segments[0].dt == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cost(norm.segments[0].h, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(evolve_schedule(norm) - evolve_schedule(raw)) < 1e-10);
  CHECK(path_length(norm, w) == doctest::Approx(path_length(raw, w)).epsilon(1e-12));

  Schedule zero;
  zero.n = 2;
  zero.segments.push_back({1.0, CoefficientVector(2)});
  CHECK_THROWS_AS(normalize_schedule(zero, w), validation_error);
}
