#include "qg3/campaign.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

namespace qg3 {

namespace {

template <typename TrialFn>
CampaignReport run_trials(const std::string& name, int trials, std::uint64_t seed,
                          bool parallel, TrialFn fn) {
  if (trials < 1) throw std::invalid_argument(name + ": trials must be >= 1");
  CampaignReport report;
  report.name = name;
  report.seed = seed;
  report.trials = trials;
  report.rows.resize(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    report.rows[i] = fn(i, rng);
    report.rows[i].index = i;
  }
  (void)parallel;
  report.passed = 0;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    if (row.pass) ++report.passed;
    report.worst_margin = std::min(report.worst_margin, row.margin);
  }
  return report;
}

}  // namespace

CampaignReport run_prop1_campaign(int trials, std::uint64_t seed, const CampaignOptions& opts) {
  CampaignReport report = run_trials(
      "prop1", trials, seed, opts.parallel, [](int i, Rng& rng) {
        const int dim = (i % 2 == 0) ? 3 : 9;
        const int n = 2 + (i % 7);
        Matrix a = random_unitary(dim, rng);
        Matrix b = random_unitary(dim, rng);
        PowerGap g = unitary_power_gap(a, b, n);
        TrialRow row;
        row.lhs = g.lhs;
        row.rhs = g.rhs;
        row.margin = g.rhs + 1e-10 - g.lhs;
        row.pass = row.margin >= 0.0;
        row.note = "dim=" + std::to_string(dim) + " N=" + std::to_string(n);
        return row;
      });
  report.params["tolerance"] = 1e-10;
  return report;
}

CampaignReport run_projection_campaign(int trials, std::uint64_t seed,
                                       const CampaignOptions& opts) {
  CampaignReport report = run_trials(
      "projection", trials, seed, opts.parallel, [](int i, Rng& rng) {
        const int n = 1 + (i % 3);
        PenaltyWeights w;
        w.p = (i % 2 == 0) ? 9.0 : 81.0;
        Schedule sch = random_schedule(n, 2 + (i % 3), rng, w);
        const double d = path_length(sch, w);
        Matrix u = evolve_schedule(sch);
        Matrix up = evolve_schedule(project_two_body(sch));
        TrialRow row;
        row.lhs = spectral_norm(u - up);
        row.rhs = projection_bound(d, n, w.p);
        row.margin = row.rhs - row.lhs;
        row.pass = row.margin >= 0.0;
        // with p = 9^n the bound reads d / 3^n
        if (w.p == static_cast<double>(pow9(n)))
          row.pass = row.pass && row.lhs <= d / pow3(n);
        row.note = "n=" + std::to_string(n) + " p=" + std::to_string(w.p) +
                   " d=" + std::to_string(d);
        return row;
      });
  report.params["p_low"] = 9.0;
  report.params["p_high"] = 81.0;
  return report;
}

CampaignReport run_mean_campaign(int trials, std::uint64_t seed, const CampaignOptions& opts) {
  CampaignReport report = run_trials(
      "mean", trials, seed, opts.parallel, [](int i, Rng& rng) {
        const int n = 1 + (i % 2);
        const double c = (i % 4 < 2) ? 1.0 : norm_cap_two_body(1);
        const double delta = (i % 2 == 0) ? 0.1 : 0.01;
        const Basis& basis = Basis::get(n);
        // piecewise-constant H(t) on [0, delta] with |H(t)| <= c
        Schedule sch;
        sch.n = n;
        const int pieces = 2 + (i % 3);
        for (int j = 0; j < pieces; ++j) {
          Segment seg;
          seg.dt = delta / pieces;
          seg.h = random_coefficient_vector(n, rng);
          const double norm = spectral_norm(basis.decode(seg.h));
          seg.h *= c * rng.uniform(0.6, 1.0) / norm;
          sch.segments.push_back(std::move(seg));
        }
        Matrix u = evolve_schedule(sch);
        CoefficientVector mean(n);
        for (const auto& seg : sch.segments) {
          CoefficientVector part = seg.h;
          part *= seg.dt / delta;
          mean += part;
        }
        TrialRow row;
        row.lhs = spectral_norm(u - hermitian_expm(basis.decode(mean), delta));
        row.rhs = mean_bound(c, delta);
        row.margin = row.rhs - row.lhs;
        const double ratio = row.lhs / (c * c * delta * delta);
        row.pass = row.margin >= 0.0 && ratio <= 1.25;
        row.note = "n=" + std::to_string(n) + " c=" + std::to_string(c) +
                   " delta=" + std::to_string(delta) + " ratio=" + std::to_string(ratio);
        return row;
      });
  report.params["ratio_cap"] = 1.25;
  return report;
}

CampaignReport run_trotter_campaign(int trials, std::uint64_t seed, const CampaignOptions& opts) {
  CampaignReport report = run_trials(
      "trotter", trials, seed, opts.parallel, [](int i, Rng& rng) {
        const int n = 1 + (i % 2);
        const Basis& basis = Basis::get(n);
        const std::vector<BasisLabel> pool = enumerate_basis(n, 2);
        // draw a noncommuting label pair
        BasisLabel a, b;
        do {
          a = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
          b = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
        } while (a == b || commutator_expand(a, b).empty());
        CoefficientVector mean(n);
        mean.add(a, rng.gaussian());
        mean.add(b, rng.gaussian());
        mean *= 1.0 / mean.norm2();

        const double widths[3] = {0.1, 0.05, 0.025};
        double lx[3], ly[3];
        for (int j = 0; j < 3; ++j) {
          const Matrix exact = hermitian_expm(basis.decode(mean), widths[j]);
          const double defect = spectral_norm(exact - trotter_slice_unitary(mean, widths[j]));
          lx[j] = std::log(widths[j]);
          ly[j] = std::log(std::max(defect, 1e-300));
        }
        // least-squares slope through the three points
        const double mx = (lx[0] + lx[1] + lx[2]) / 3.0;
        const double my = (ly[0] + ly[1] + ly[2]) / 3.0;
        double num = 0.0, den = 0.0;
        for (int j = 0; j < 3; ++j) {
          num += (lx[j] - mx) * (ly[j] - my);
          den += (lx[j] - mx) * (lx[j] - mx);
        }
        const double slope = num / den;
        TrialRow row;
        row.lhs = slope;
        row.rhs = 3.0;
        row.margin = std::min(slope - 2.6, 3.4 - slope);
        row.pass = row.margin >= 0.0;
        row.note = "n=" + std::to_string(n) + " pair=" + a.str() + "," + b.str() +
                   " slope=" + std::to_string(slope);
        return row;
      });
  report.params["slope_lo"] = 2.6;
  report.params["slope_hi"] = 3.4;
  return report;
}

CampaignReport run_closure_campaign(int n, const CampaignOptions& opts) {
  CampaignReport report;
  report.name = "closure";
  report.seed = 0;
  report.trials = 1;
  ClosureReport cr = opts.parallel ? bracket_closure(n) : bracket_closure_serial(n);
  TrialRow row;
  row.index = 0;
  row.lhs = cr.achieved_rank;
  row.rhs = cr.target_rank;
  row.margin = static_cast<double>(cr.achieved_rank - cr.target_rank);
  row.pass = cr.achieved_rank == cr.target_rank;
  row.note = "n=" + std::to_string(n) + " depth=" + std::to_string(cr.depth_used);
  report.rows.push_back(row);
  report.passed = row.pass ? 1 : 0;
  report.worst_margin = row.margin;
  report.params["n"] = n;
  report.params["depth"] = cr.depth_used;
  return report;
}

}  // namespace qg3
