// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "qg3/campaign.hpp"
#include "qg3/io.hpp"

using namespace qg3;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) { return format_double(v); }

// 1. basis counts for n = 1..4
void criterion_basis_counts() {
  auto start = Clock::now();
  const long long want_total[4] = {8, 80, 728, 6560};
  const long long want_low[4] = {8, 80, 216, 416};
  bool pass = true;
  for (int n = 1; n <= 4; ++n) {
    pass = pass && static_cast<long long>(enumerate_basis(n).size()) == want_total[n - 1];
    pass = pass && static_cast<long long>(enumerate_basis(n, 2).size()) == want_low[n - 1];
  }
  const double t = seconds_since(start);
  pass = pass && t < 1.0;
  report(1, "basis counting 9^n-1 / 32n^2-24n, n=1..4", pass, "elapsed " + fmt(t) + " s");
}

// 2. bracket closure reaches full rank
void criterion_closure() {
  auto start = Clock::now();
  ClosureReport r2 = bracket_closure(2);
  ClosureReport r3 = bracket_closure(3);
  const double t = seconds_since(start);
  bool pass = r2.achieved_rank == 80 && r3.achieved_rank == 728 && t < 60.0;
  report(2, "bracket closure rank 80 (n=2) and 728 (n=3)", pass,
         "ranks " + std::to_string(r2.achieved_rank) + "/" + std::to_string(r3.achieved_rank) +
             ", depth " + std::to_string(r3.depth_used) + ", elapsed " + fmt(t) + " s");
}

// 3. operator norm facts and the non-invariant expectation norm
void criterion_norm_facts() {
  const double l8 = spectral_norm(gell_mann(8));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  Matrix u(2, 2);
  u << Complex(1, 0), Complex(0, -1), Complex(0, 1), Complex(-1, 0);
  u /= std::sqrt(2.0);
  const double em = expectation_norm(m);
  const double emu = expectation_norm(m * u);
  bool pass = std::abs(l8 - 2.0 / std::sqrt(3.0)) <= 1e-10;
  pass = pass && std::abs(em - 0.5) <= 1e-6;
  pass = pass && std::abs(emu - (0.5 + std::sqrt(2.0) / 4.0)) <= 1e-6;
  report(3, "norm facts: |l8| = 2/sqrt(3), counterexample 1/2 and 1/2+sqrt(2)/4", pass,
         "|l8|=" + fmt(l8) + " |M|_1=" + fmt(em) + " |MU|_1=" + fmt(emu));
}

// 4. power inequality over 1000 seeded unitary pairs
void criterion_prop1() {
  auto start = Clock::now();
  CampaignReport r = run_prop1_campaign(1000, 20260811, {});
  const double t = seconds_since(start);
  bool pass = r.all_pass() && t < 30.0;
  report(4, "unitary power inequality, 1000 trials, dims 3 and 9, N in 2..8", pass,
         std::to_string(r.passed) + "/1000, worst margin " + fmt(r.worst_margin) + ", elapsed " +
             fmt(t) + " s");
}

// 5. mean-Hamiltonian bound over 50 seeded piecewise-constant Hamiltonians
void criterion_mean_bound() {
  auto start = Clock::now();
  CampaignReport r = run_mean_campaign(50, 20260811, {});
  const double t = seconds_since(start);
  bool pass = r.all_pass() && t < 60.0;
  report(5, "mean-Hamiltonian bound 2(e^{cD}-1-cD), c in {1, 5.657}, D in {0.1, 0.01}", pass,
         std::to_string(r.passed) + "/50, worst margin " + fmt(r.worst_margin) +
             ", ratio cap 1.25, elapsed " + fmt(t) + " s");
}

// 6. projection bound over 50 seeded schedules, p in {9, 81}
void criterion_projection() {
  auto start = Clock::now();
  CampaignReport r = run_projection_campaign(50, 20260811, {});
  const double t = seconds_since(start);
  // the n=3 trials must exercise real >=3-body content (n <= 2 admits none)
  double largest_lhs = 0.0;
  for (const auto& row : r.rows) largest_lhs = std::max(largest_lhs, row.lhs);
  bool pass = r.all_pass() && largest_lhs > 1e-6 && t < 120.0;
  report(6, "projection bound 3^n d/p, 50 schedules, p in {9, 81}", pass,
         std::to_string(r.passed) + "/50, worst margin " + fmt(r.worst_margin) +
             ", largest |U-U_P| " + fmt(largest_lhs) + ", elapsed " + fmt(t) + " s");
}

// 7. three-qutrit geodesics: closed form vs ODE vs integration; conservation
void criterion_geodesics() {
  auto start = Clock::now();
  const Basis& basis = Basis::get(3);
  double worst_residual = 0.0;
  double worst_match = 0.0;
  double worst_s_drift = 0.0;
  double worst_f_drift = 0.0;
  for (int i = 0; i < 20; ++i) {
    Rng rng(derive_seed(777, i));
    PenaltyWeights w;
    w.p = 2.0 + (i % 3);
    w.s = 1.0;
    StqData d = random_stq_data(rng, w);

    // (a) central-difference residual of the closed form against the ODE
    for (double t : {0.25, 0.75}) {
      const double eps = 1e-5;
      StqState plus = stq_solution(d, t + eps);
      StqState minus = stq_solution(d, t - eps);
      StqState rhs = stq_ode_rhs(d, stq_solution(d, t));
      worst_residual = std::max(
          worst_residual, ((plus.T - minus.T) / (2 * eps) - rhs.T).cwiseAbs().maxCoeff());
      worst_residual = std::max(
          worst_residual, ((plus.Q - minus.Q) / (2 * eps) - rhs.Q).cwiseAbs().maxCoeff());
    }

    // (b) numeric integration of the system matches the closed form
    auto traj = integrate_stq(d, 1.0, 500);
    for (size_t k = 0; k < traj.size(); k += 5) {
      const auto& y = traj[k];
      StqState ref = stq_solution(d, y.t);
      worst_match = std::max({worst_match, spectral_norm(y.S - ref.S),
                              spectral_norm(y.T - ref.T), spectral_norm(y.Q - ref.Q)});
    }

    // (c,d) conservation along the momentum-equation integration
    auto cost_of = [&](const RealVector& h) {
      double low = 0.0, high = 0.0;
      for (int k = 0; k < basis.size(); ++k)
        (basis.body_of(k) <= 2 ? low : high) += h[k] * h[k];
      return std::sqrt(low + w.p * w.p * high);
    };
    CoefficientVector l0 = basis.encode(d.S0 + d.T0 + d.Q0);
    auto geo = integrate_geodesic(l0, w, 1.0, 500);
    const double f0 = cost_of(geo.front().H);
    for (const auto& st : geo) {
      worst_f_drift = std::max(worst_f_drift, std::abs(cost_of(st.H) - f0) / f0);
      RealVector dl = st.L - geo.front().L;
      for (int k = 0; k < basis.size(); ++k)
        if (basis.body_of(k) == 1) worst_s_drift = std::max(worst_s_drift, std::abs(dl[k]));
    }
  }
  bool pass = worst_residual <= 1e-7 && worst_match <= 1e-6 && worst_s_drift <= 1e-8 &&
              worst_f_drift <= 1e-6;
  report(7, "three-qutrit geodesics: residual/match/S/F over 20 seeds", pass,
         "residual " + fmt(worst_residual) + ", match " + fmt(worst_match) + ", S drift " +
             fmt(worst_s_drift) + ", F drift " + fmt(worst_f_drift) + ", elapsed " +
             fmt(seconds_since(start)) + " s");
}

// 8. approximate-unitary error strictly decreases across p = 1e2, 1e3, 1e4
void criterion_approx_trend() {
  auto start = Clock::now();
  Rng rng(4242);
  PenaltyWeights wref;
  wref.p = 100.0;
  StqData base = random_stq_data(rng, wref);
  double gaps[3];
  int idx = 0;
  for (double p : {1e2, 1e3, 1e4}) {
    StqData d = base;
    d.w.p = p;
    d.w.s = 1.0;
    gaps[idx++] = spectral_norm(structured_evolution(d, 0.5, 500) - approx_unitary(d, 0.5));
  }
  bool pass = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  report(8, "approximate-unitary error strictly decreases over p in {1e2,1e3,1e4}", pass,
         "gaps " + fmt(gaps[0]) + " > " + fmt(gaps[1]) + " > " + fmt(gaps[2]) + ", elapsed " +
             fmt(seconds_since(start)) + " s");
}

// 9. per-slice factoring defect slope in [2.6, 3.4]
void criterion_trotter_order() {
  auto start = Clock::now();
  CampaignReport r = run_trotter_campaign(20, 20260811, {});
  double lo = 1e9, hi = -1e9;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.lhs);
    hi = std::max(hi, row.lhs);
  }
  bool pass = r.all_pass();
  report(9, "factoring defect slope in [2.6, 3.4] over widths {0.1, 0.05, 0.025}", pass,
         "slopes in [" + fmt(lo) + ", " + fmt(hi) + "], elapsed " + fmt(seconds_since(start)) +
             " s");
}

// 10. end-to-end synthesis of the shipped schedule
void criterion_end_to_end() {
  auto start = Clock::now();
  const std::string path = std::string(QG3_DATA_DIR) + "/example_schedule.json";
  Schedule sch = load_schedule(path);
  PenaltyWeights w;
  w.p = 81.0;
  const double d = path_length(sch, w);
  SynthesisReport r = synthesize(sch, w, 0.05, {});
  SynthesisReport r_half = synthesize(sch, w, 0.025, {});
  const double t = seconds_since(start);
  bool pass = std::abs(d - 1.0) < 1e-9;
  pass = pass && r.budget.measured_error <= 0.1;
  pass = pass && r.budget.measured_error <= r.budget.a_priori_total;
  pass = pass && r_half.budget.measured_error <= r.budget.measured_error + 1e-9;
  pass = pass && t < 120.0;
  report(10, "shipped n=2 d=1 schedule: |U-U_A| <= 0.1, sound budget, delta halving", pass,
         "measured " + fmt(r.budget.measured_error) + " (a priori " +
             fmt(r.budget.a_priori_total) + "), halved " + fmt(r_half.budget.measured_error) +
             ", gates " + std::to_string(r.budget.gate_count) + ", elapsed " + fmt(t) + " s");
}

// 11. repeated runs with the same seed are byte-identical
void criterion_determinism() {
  auto start = Clock::now();
  Json config{{"criterion", 11}};

  CampaignReport c1 = run_prop1_campaign(200, 31337, {});
  CampaignReport c2 = run_prop1_campaign(200, 31337, {});
  bool pass = campaign_to_json(c1, config).dump() == campaign_to_json(c2, config).dump();

  const std::string path = std::string(QG3_DATA_DIR) + "/example_schedule.json";
  Schedule sch = load_schedule(path);
  PenaltyWeights w;
  w.p = 81.0;
  SynthesisReport s1 = synthesize(sch, w, 0.05, {});
  SynthesisOptions serial;
  serial.parallel = false;
  SynthesisReport s2 = synthesize(sch, w, 0.05, serial);
  pass = pass && report_to_json(s1, config).dump() == report_to_json(s2, config).dump();
  pass = pass && slices_to_csv(s1, config) == slices_to_csv(s2, config);

  Rng ra(5), rb(5);
  PenaltyWeights wg;
  wg.p = 3.0;
  CoefficientVector la = apply_metric(random_normalized_hamiltonian(3, ra, wg), wg);
  CoefficientVector lb = apply_metric(random_normalized_hamiltonian(3, rb, wg), wg);
  auto ta = integrate_geodesic(la, wg, 1.0, 200);
  auto tb = integrate_geodesic(lb, wg, 1.0, 200);
  pass = pass && (ta.back().L - tb.back().L).norm() == 0.0 &&
         (ta.back().U - tb.back().U).cwiseAbs().maxCoeff() == 0.0;

  report(11, "determinism: same seed gives byte-identical reports", pass,
         "elapsed " + fmt(seconds_since(start)) + " s");
}

}  // namespace

int main() {
  std::printf("acceptance suite (schema %s)\n", kSchemaVersion);
  criterion_basis_counts();
  criterion_closure();
  criterion_norm_facts();
  criterion_prop1();
  criterion_mean_bound();
  criterion_projection();
  criterion_geodesics();
  criterion_approx_trend();
  criterion_trotter_order();
  criterion_end_to_end();
  criterion_determinism();
  std::printf("%s: %d/11 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE", 11 - failures);
  return failures;
}
