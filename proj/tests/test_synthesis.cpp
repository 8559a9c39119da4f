#include <doctest.h>

#include "qg3/io.hpp"
#include "qg3/synthesis.hpp"
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

TEST_CASE("project_two_body") {
  Rng rng(1);
  PenaltyWeights w = weights(9.0);
  Schedule sch = random_schedule(3, 2, rng, w);

  Schedule p = project_two_body(sch);
  for (const auto& seg : p.segments) CHECK(seg.h.max_body() <= 2);
  // idempotent
  Schedule pp = project_two_body(p);
  for (size_t i = 0; i < p.segments.size(); ++i)
    CHECK((pp.segments[i].h - p.segments[i].h).norm2() == 0.0);
  // exact coefficient subset: dropped part is exactly the >=3-body content
  for (size_t i = 0; i < sch.segments.size(); ++i) {
    CoefficientVector dropped = sch.segments[i].h - p.segments[i].h;
    CHECK((dropped - sch.segments[i].h.body_filter(3, 3)).norm2() == 0.0);
  }

  // 1-/2-body schedules pass through unchanged; pure 3-body becomes zero
  Schedule low = random_schedule(2, 2, rng, w);
  Schedule low_p = project_two_body(low);
  for (size_t i = 0; i < low.segments.size(); ++i)
    CHECK((low_p.segments[i].h - low.segments[i].h).norm2() == 0.0);

  CoefficientVector q(3);
  q.add(BasisLabel(3, {{1, 1}, {2, 2}, {3, 3}}), 1.0);
  Schedule pure;
  pure.n = 3;
  pure.segments.push_back({1.0, q});
  CHECK(project_two_body(pure).segments[0].h.empty());
}

TEST_CASE("projection_bound values") {
  CHECK(projection_bound(0.0, 2, 9.0) == 0.0);
  CHECK(projection_bound(1.0, 1, 9.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (int n = 1; n <= 3; ++n)
    CHECK(projection_bound(2.5, n, static_cast<double>(pow9(n))) ==
          doctest::Approx(2.5 / pow3(n)).epsilon(1e-15));
  CHECK_THROWS_AS(projection_bound(-1.0, 1, 9.0), std::invalid_argument);
  CHECK_THROWS_AS(projection_bound(1.0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("slice_and_average") {
  PenaltyWeights w = weights(3.0);
  Rng rng(6);

  {
    // constant schedule: every slice mean equals the constant
    CoefficientVector h = random_coefficient_vector(2, rng);
    Schedule sch;
    sch.n = 2;
    sch.segments.push_back({1.0, h});
    auto slices = slice_and_average(sch, 0.25);
    CHECK(slices.size() == 4);
    for (const auto& s : slices) {
      CHECK(s.width == doctest::Approx(0.25).epsilon(1e-12));
      CHECK((s.mean - h).norm2() < 1e-12);
    }
  }
  {
    // two equal-length segments inside one slice average arithmetically
    CoefficientVector a(1), b(1);
    a.add(BasisLabel(1, {{1, 1}}), 1.0);
    b.add(BasisLabel(1, {{1, 2}}), 1.0);
    Schedule sch;
    sch.n = 1;
    sch.segments.push_back({0.05, a});
    sch.segments.push_back({0.05, b});
    auto slices = slice_and_average(sch, 0.1);
    CHECK(slices.size() == 1);
    CHECK((slices[0].mean - 0.5 * (a + b)).norm2() < 1e-12);
  }
  {
    // integral identity: sum_j width_j mean_j = sum_segments dt h, exactly,
    // including a short last slice
    Schedule sch = random_schedule(2, 4, rng, w);
    auto slices = slice_and_average(sch, 0.07);
    CoefficientVector got(2), want(2);
    for (const auto& s : slices) got += s.width * s.mean;
    for (const auto& seg : sch.segments) want += seg.dt * seg.h;
    CHECK((got - want).norm2() < 1e-12);
  }
  Schedule empty;
  empty.n = 2;
  CHECK_THROWS_AS(slice_and_average(empty, 0.1), validation_error);
}

TEST_CASE("mean_bound") {
  CHECK(mean_bound(1.0, 0.0) == 0.0);
  CHECK(mean_bound(1.0, 1.0) == doctest::Approx(2.0 * (std::exp(1.0) - 2.0)).epsilon(1e-14));
  // -> c^2 delta^2 as delta -> 0
  const double c = 2.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const double ratio = mean_bound(c, delta) / (c * c * delta * delta);
    CHECK(std::abs(ratio - 1.0) < c * delta);
  }
  CHECK_THROWS_AS(mean_bound(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("norm_cap_two_body") {
  CHECK(norm_cap_two_body(1) == doctest::Approx(5.656854249492381).epsilon(1e-14));
  CHECK(norm_cap_two_body(3) == doctest::Approx(12.0 * std::sqrt(2.0)).epsilon(1e-14));
  // every normalized 1-/2-body vector obeys the cap (Frobenius gives the
  // much tighter sqrt(2*3^(n-1)))
  Rng rng(64);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + (t % 3);
    const Basis& b = Basis::get(n);
    CoefficientVector c = random_normalized_hamiltonian(n, rng, weights(9.0), 2);
    CHECK(spectral_norm(b.decode(c)) <= norm_cap_two_body(n));
  }
}

TEST_CASE("trotter_slice") {
  const Basis& b1 = Basis::get(1);
  {
    // a single term is factored exactly
    CoefficientVector mean(1);
    mean.add(BasisLabel(1, {{1, 4}}), 0.83);
    Matrix exact = hermitian_expm(b1.decode(mean), 0.1);
    CHECK(max_abs(exact - trotter_slice_unitary(mean, 0.1)) < 1e-12);
    CHECK(max_abs(exact - realize(trotter_slice(mean, 0.1))) < 1e-12);
    GateSequence gs = trotter_slice(mean, 0.1);
    CHECK(gs.gates.size() == 10);  // ceil(1/0.1) reps, one term each
    CHECK(gs.gates[0].angle == doctest::Approx(0.83 * 0.01).epsilon(1e-14));
  }
  {
    // commuting terms are exact too
    CoefficientVector mean(2);
    mean.add(BasisLabel(2, {{1, 3}}), 0.4);
    mean.add(BasisLabel(2, {{2, 6}}), -0.7);
    Matrix exact = hermitian_expm(Basis::get(2).decode(mean), 0.1);
    CHECK(max_abs(exact - trotter_slice_unitary(mean, 0.1)) < 1e-10);
  }
  {
    // noncommuting pair: defect scales as width^3
    CoefficientVector mean(1);
    mean.add(BasisLabel(1, {{1, 1}}), 0.7);
    mean.add(BasisLabel(1, {{1, 3}}), 0.5);
    double defects[3];
    int i = 0;
    for (double width : {0.1, 0.05, 0.025}) {
      Matrix exact = hermitian_expm(b1.decode(mean), width);
      defects[i++] = spectral_norm(exact - trotter_slice_unitary(mean, width));
    }
    const double slope = std::log(defects[0] / defects[2]) / std::log(4.0);
    CHECK(slope > 2.6);
    CHECK(slope < 3.4);
  }
  {
    // gate counts stay under L * ceil(1/width)
    Rng rng(9);
    CoefficientVector mean = random_coefficient_vector(2, rng, 2);
    GateSequence gs = trotter_slice(mean, 0.05);
    CHECK(static_cast<long long>(gs.gates.size()) <= two_body_count(2) * 20);
    CHECK(max_abs(realize(gs) - trotter_slice_unitary(mean, 0.05)) < 1e-12);
  }
  CoefficientVector bad(3);
  bad.add(BasisLabel(3, {{1, 1}, {2, 1}, {3, 1}}), 1.0);
  CHECK_THROWS_AS(trotter_slice(bad, 0.1), validation_error);
}

TEST_CASE("synthesize end to end") {
  PenaltyWeights w = weights(81.0);
  {
    // constant single-term schedule: all three approximations are exact
    CoefficientVector h(2);
    h.add(BasisLabel(2, {{1, 2}}), 1.0);
    Schedule sch;
    sch.n = 2;
    sch.segments.push_back({1.0, h});
    SynthesisReport r = synthesize(sch, w, 0.25, {});
    CHECK(r.budget.measured_error < 1e-10);
    CHECK(r.budget.projection == 0.0);
    CHECK(r.budget.trotter_total < 1e-10);
  }
  {
    // n=1 schedule has no >=3-body content: the projection term is zero
    Rng rng(33);
    Schedule sch = random_schedule(1, 3, rng, weights(9.0));
    SynthesisReport r = synthesize(sch, weights(9.0), 0.1, {});
    CHECK(r.budget.projection == 0.0);
    CHECK(r.budget.measured_error <= r.budget.a_priori_total);
  }
  {
    // n=2 normalized random schedule: budget sound, parts add up
    Rng rng(34);
    Schedule sch = random_schedule(2, 3, rng, w);
    SynthesisReport r = synthesize(sch, w, 0.05, {});
    CHECK(r.budget.measured_error <= r.budget.a_priori_total);
    CHECK(r.budget.a_priori_total ==
          doctest::Approx(r.budget.projection + r.budget.mean_total + r.budget.trotter_total)
              .epsilon(1e-15));
    CHECK(r.budget.gate_count == static_cast<long long>(r.gates.gates.size()));

    // per-slice telescoping: |prod U_M^j - prod U_slice^j| <= sum defects
    const Basis& basis = Basis::get(2);
    auto slices = slice_and_average(project_two_body(sch), 0.05);
    const double nominal_tau = 0.05 / 20;
    Matrix um = Matrix::Identity(9, 9), ua = Matrix::Identity(9, 9);
    double defect_sum = 0.0;
    for (const auto& s : slices) {
      um = hermitian_expm(basis.decode(s.mean), s.width) * um;
      Matrix us = trotter_slice_unitary(s.mean, s.width, nominal_tau);
      ua = us * ua;
      defect_sum += spectral_norm(hermitian_expm(basis.decode(s.mean), s.width) - us);
    }
    CHECK(spectral_norm(um - ua) <= defect_sum + 1e-10);
    CHECK(defect_sum == doctest::Approx(r.budget.trotter_total).epsilon(1e-12));

    // halving delta does not increase the measured error
    SynthesisReport r2 = synthesize(sch, w, 0.025, {});
    CHECK(r2.budget.measured_error <= r.budget.measured_error + 1e-9);

    // deterministic: identical inputs give byte-identical reports
    SynthesisReport r3 = synthesize(sch, w, 0.05, {});
    Json config{{"same", true}};
    CHECK(report_to_json(r, config).dump() == report_to_json(r3, config).dump());
    SynthesisOptions serial;
    serial.parallel = false;
    SynthesisReport r4 = synthesize(sch, w, 0.05, serial);
    CHECK(report_to_json(r, config).dump() == report_to_json(r4, config).dump());
  }
  {
    // unnormalized schedules are rejected naming the segment
    CoefficientVector big(2);
    big.add(BasisLabel(2, {{1, 1}}), 2.0);
    Schedule sch;
    sch.n = 2;
    sch.segments.push_back({0.5, big});
    CHECK_THROWS_WITH_AS(synthesize(sch, w, 0.1, {}), doctest::Contains("segment 0"),
                         validation_error);
    // delta larger than the duration is rejected
    Schedule ok;
    ok.n = 2;
    CoefficientVector h(2);
    h.add(BasisLabel(2, {{1, 1}}), 1.0);
    ok.segments.push_back({0.5, h});
    CHECK_THROWS_AS(synthesize(ok, w, 0.6, {}), validation_error);
  }
}

TEST_CASE("gate_count_estimate") {
  // cubic in d at fixed (n, k)
  CHECK(gate_count_estimate(2.0, 2, 1) == 8 * gate_count_estimate(1.0, 2, 1));
  // k -> k+1 multiplies by n^2
  CHECK(gate_count_estimate(1.0, 2, 2) == 4 * gate_count_estimate(1.0, 2, 1));
  CHECK(gate_count_estimate(1.0, 3, 2) == 9 * gate_count_estimate(1.0, 3, 1));

  // emitted gates never exceed the forecast on random instances
  Rng rng(77);
  PenaltyWeights w = weights(81.0);
  for (int t = 0; t < 20; ++t) {
    Schedule sch = random_schedule(2, 2 + (t % 3), rng, w);
    // stretch to total duration 1.5 so delta = 1/(n^k d) fits inside
    const double total = sch.total_duration();
    for (auto& seg : sch.segments) seg.dt *= 1.5 / total;
    const double d = path_length(sch, w);
    const int k = 1;
    const double delta = 1.0 / (std::pow(2.0, k) * d);
    SynthesisReport r = synthesize(sch, w, delta, {});
    CHECK(r.budget.gate_count <= gate_count_estimate(d, 2, k));
  }
}
