// qg3 — basis inspection, bound-verification campaigns, geodesic runs,
// gate synthesis and parameter sweeps for the n-qutrit penalty geometry.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qg3/campaign.hpp"
#include "qg3/io.hpp"

namespace {

using namespace qg3;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCampaignFailure = 3;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

void emit(const GlobalOpts& g, const std::string& content) {
  if (g.out.empty())
    std::cout << content;
  else
    write_text_file(g.out, content);
}

std::string csv_header(const Json& config) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "# config=" << config.dump() << "\n";
  return os.str();
}

// --- basis ------------------------------------------------------------------

int cmd_basis(const GlobalOpts& g, int n, int max_body, bool list) {
  if (n > 4) {
    std::cerr << "basis: n = " << n
              << " exceeds the desk-scale capacity (label commands stop at n = 4)\n";
    return kExitUsage;
  }
  Json config{{"command", "basis"}, {"n", n}, {"max_body", max_body}, {"seed", g.seed}};
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["total"] = static_cast<long long>(enumerate_basis(n).size());
  j["upto2body"] = static_cast<long long>(enumerate_basis(n, 2).size());
  if (list) {
    Json labels = Json::array();
    for (const auto& l : enumerate_basis(n, max_body)) labels.push_back(label_to_json(l));
    j["labels"] = std::move(labels);
  }
  emit(g, j.dump(2) + "\n");
  return kExitOk;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const GlobalOpts& g, const std::string& lemma, int n, int trials, bool serial) {
  CampaignOptions opts;
  opts.parallel = !serial;
  CampaignReport report;
  if (lemma == "closure") {
    if (n > 3) {
      std::cerr << "verify closure: dense-matrix commands stop at n = 3\n";
      return kExitUsage;
    }
    report = run_closure_campaign(n, opts);
  } else if (lemma == "prop1") {
    report = run_prop1_campaign(trials, g.seed, opts);
  } else if (lemma == "lemma3") {
    report = run_projection_campaign(trials, g.seed, opts);
  } else if (lemma == "lemma4") {
    report = run_mean_campaign(trials, g.seed, opts);
  } else if (lemma == "trotter") {
    report = run_trotter_campaign(trials, g.seed, opts);
  } else {
    std::cerr << "verify: unknown name '" << lemma
              << "' (expected closure|prop1|lemma3|lemma4|trotter)\n";
    return kExitUsage;
  }
  Json config{{"command", "verify"}, {"lemma", lemma},   {"n", n},
              {"trials", trials},    {"seed", g.seed},   {"serial", serial}};
  emit(g, campaign_to_json(report, config).dump(2) + "\n");
  std::cerr << report.name << ": " << report.passed << "/" << report.trials
            << " pass, worst margin " << format_double(report.worst_margin) << "\n";
  return report.all_pass() ? kExitOk : kExitCampaignFailure;
}

// --- geodesic ---------------------------------------------------------------

int cmd_geodesic(const GlobalOpts& g, const std::string& mode, int n, double p, double s,
                 double t_f, int steps) {
  if (n > 3) {
    std::cerr << "geodesic: dense-matrix commands stop at n = 3\n";
    return kExitUsage;
  }
  if ((mode == "analytic" || mode == "compare") && n != 3) {
    std::cerr << "geodesic: mode '" << mode << "' requires n = 3\n";
    return kExitUsage;
  }
  if (mode != "numeric" && mode != "analytic" && mode != "compare") {
    std::cerr << "geodesic: unknown mode '" << mode << "'\n";
    return kExitUsage;
  }
  PenaltyWeights w;
  w.p = p > 0 ? p : PenaltyWeights::default_for(n).p;
  w.s = s;
  Json config{{"command", "geodesic"}, {"mode", mode},   {"n", n},
              {"penalty_p", w.p},      {"one_body_s", w.s}, {"t_f", t_f},
              {"steps", steps},        {"seed", g.seed}};

  const Basis& basis = Basis::get(n);
  Rng rng(g.seed);
  CoefficientVector h0 = random_normalized_hamiltonian(n, rng, w);
  CoefficientVector l0 = apply_metric(h0, w);

  std::ostringstream os;
  os << csv_header(config);
  if (mode == "numeric") {
    auto traj = integrate_geodesic(l0, w, t_f, steps);
    os << "t,F,normS,normT,normQ,unitarity_defect\n";
    for (const auto& st : traj) {
      CoefficientVector hc = basis.from_dense(st.H);
      os << format_double(st.t) << "," << format_double(cost(hc, w)) << ","
         << format_double(spectral_norm(basis.decode(hc.body_filter(1, 1)))) << ","
         << format_double(spectral_norm(basis.decode(hc.body_filter(2, 2)))) << ","
         << format_double(spectral_norm(basis.decode(hc.body_filter(3, n)))) << ","
         << format_double(unitarity_defect(st.U)) << "\n";
    }
  } else {
    StqData d;
    d.w = w;
    BodySplit parts = split_stq(apply_metric(h0, w));
    d.S0 = basis.decode(parts.S);
    d.T0 = basis.decode(parts.T);
    d.Q0 = basis.decode(parts.Q);
    if (mode == "analytic") {
      os << "t,F,normS,normT,normQ,unitarity_defect\n";
      for (int k = 0; k <= steps; ++k) {
        const double t = t_f * k / steps;
        StqState st = stq_solution(d, t);
        Matrix hd = st.S / w.class_weight(1) + st.T + st.Q / w.class_weight(3);
        os << format_double(t) << "," << format_double(cost(basis.encode(hd), w)) << ","
           << format_double(spectral_norm(st.S)) << "," << format_double(spectral_norm(st.T))
           << "," << format_double(spectral_norm(st.Q)) << ",0\n";
      }
    } else {  // compare: numeric integration of the structured system vs closed form
      auto traj = integrate_stq(d, t_f, steps);
      os << "t,dS,dT,dQ\n";
      double max_disc = 0.0;
      for (const auto& st : traj) {
        StqState ref = stq_solution(d, st.t);
        const double ds = spectral_norm(st.S - ref.S);
        const double dt = spectral_norm(st.T - ref.T);
        const double dq = spectral_norm(st.Q - ref.Q);
        max_disc = std::max({max_disc, ds, dt, dq});
        os << format_double(st.t) << "," << format_double(ds) << "," << format_double(dt) << ","
           << format_double(dq) << "\n";
      }
      std::cerr << "max discrepancy " << format_double(max_disc) << "\n";
    }
  }
  emit(g, os.str());
  return kExitOk;
}

// --- synthesize ---------------------------------------------------------------

int cmd_synthesize(const GlobalOpts& g, const std::string& schedule_path, double p, double s,
                   double delta, const std::string& gate_norm, bool serial) {
  Schedule sch = load_schedule(schedule_path);
  PenaltyWeights w;
  w.p = p > 0 ? p : PenaltyWeights::default_for(sch.n).p;
  w.s = s;
  SynthesisOptions opts;
  opts.parallel = !serial;
  SynthesisReport report = synthesize(sch, w, delta, opts);
  Json config{{"command", "synthesize"}, {"schedule", schedule_path}, {"penalty_p", w.p},
              {"one_body_s", w.s},       {"delta", delta},            {"seed", g.seed},
              {"gate_norm", gate_norm},  {"serial", serial}};
  if (g.format == "csv") {
    emit(g, slices_to_csv(report, config));
  } else {
    Json j = report_to_json(report, config);
    if (gate_norm == "opnorm")
      j["gates"] = gates_to_json(report.gates, GateConvention::kOperatorNorm)["gates"];
    emit(g, j.dump(2) + "\n");
  }
  std::cerr << "gates=" << report.budget.gate_count
            << " a_priori_total=" << format_double(report.budget.a_priori_total)
            << " measured_error=" << format_double(report.budget.measured_error) << "\n";
  return kExitOk;
}

// --- sweep --------------------------------------------------------------------

int cmd_sweep(const GlobalOpts& g, const std::string& parameter, std::vector<double> values,
              const std::string& schedule_path, int n, double p, double s, double delta,
              int segments) {
  if (values.empty()) {
    std::cerr << "sweep: empty value range\n";
    return kExitUsage;
  }
  if (parameter != "p" && parameter != "delta") {
    std::cerr << "sweep: unknown parameter '" << parameter << "' (expected p|delta)\n";
    return kExitUsage;
  }
  Json config{{"command", "sweep"},  {"parameter", parameter}, {"n", n},
              {"penalty_p", p},      {"one_body_s", s},        {"delta", delta},
              {"segments", segments}, {"seed", g.seed},        {"schedule", schedule_path}};

  // fixed raw curve family: from file, or seeded with all body weights
  Schedule raw;
  if (!schedule_path.empty()) {
    raw = load_schedule(schedule_path);
  } else {
    PenaltyWeights wgen;
    wgen.p = p > 0 ? p : 9.0;
    wgen.s = s;
    Rng rng(g.seed);
    raw = random_schedule(n, segments, rng, wgen, /*normalized=*/false);
  }

  std::ostringstream os;
  os << csv_header(config);
  os << "value,path_length,projection,mean_total,trotter_total,a_priori_total,measured_error\n";
  double prev_len = -1.0;
  bool monotone = true;
  for (double v : values) {
    PenaltyWeights w;
    w.p = parameter == "p" ? v : (p > 0 ? p : PenaltyWeights::default_for(n).p);
    w.s = s;
    const double dl = parameter == "delta" ? v : delta;
    Schedule normalized = normalize_schedule(raw, w);
    const double len = path_length(raw, w);
    SynthesisReport r = synthesize(normalized, w, dl, {});
    os << format_double(v) << "," << format_double(len) << ","
       << format_double(r.budget.projection) << "," << format_double(r.budget.mean_total) << ","
       << format_double(r.budget.trotter_total) << "," << format_double(r.budget.a_priori_total)
       << "," << format_double(r.budget.measured_error) << "\n";
    if (parameter == "p") {
      if (prev_len >= 0.0 && len < prev_len - 1e-12) monotone = false;
      prev_len = len;
    }
  }
  if (parameter == "p") os << "# path_length_monotone=" << (monotone ? "true" : "false") << "\n";
  emit(g, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-qutrit penalty-metric geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed (determines all randomness)");
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--format", g.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "enumerate the su(3^n) product basis");
  int basis_n = 2, basis_max_body = 0;
  bool basis_list = false;
  basis_cmd->add_option("--n", basis_n, "site count")->required();
  basis_cmd->add_option("--max-body", basis_max_body, "restrict listed labels to <= this body weight");
  basis_cmd->add_flag("--list", basis_list, "include the label list");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a bound-verification campaign");
  std::string lemma;
  int verify_n = 2, trials = 0;
  bool verify_serial = false;
  verify_cmd->add_option("lemma", lemma, "closure|prop1|lemma3|lemma4|trotter")->required();
  verify_cmd->add_option("--n", verify_n, "site count (closure)");
  verify_cmd->add_option("--trials", trials, "trial count (default per campaign)");
  verify_cmd->add_flag("--serial", verify_serial, "use the serial reference kernels");

  // geodesic
  auto* geo_cmd = app.add_subcommand("geodesic", "integrate or evaluate geodesic flows");
  std::string mode = "numeric";
  int geo_n = 3, steps = 1000;
  double geo_p = 0.0, geo_s = 1.0, t_f = 1.0;
  geo_cmd->add_option("--mode", mode, "numeric|analytic|compare")->required();
  geo_cmd->add_option("--n", geo_n, "site count (numeric mode only; others need 3)");
  geo_cmd->add_option("--penalty-p", geo_p, "penalty parameter (default 9^n)");
  geo_cmd->add_option("--one-body-s", geo_s, "one-body metric weight");
  geo_cmd->add_option("--t-f", t_f, "final time");
  geo_cmd->add_option("--steps", steps, "integration steps");

  // synthesize
  auto* syn_cmd = app.add_subcommand("synthesize", "compile a schedule into one-/two-body gates");
  std::string schedule_path, gate_norm = "trace";
  double syn_p = 0.0, syn_s = 1.0, syn_delta = 0.05;
  bool syn_serial = false;
  syn_cmd->add_option("--schedule", schedule_path, "schedule JSON file")->required();
  syn_cmd->add_option("--penalty-p", syn_p, "penalty parameter (default 9^n)");
  syn_cmd->add_option("--one-body-s", syn_s, "one-body metric weight");
  syn_cmd->add_option("--delta", syn_delta, "slice width");
  syn_cmd->add_option("--gate-norm", gate_norm, "gate generator convention: trace|opnorm")
      ->check(CLI::IsMember({"trace", "opnorm"}));
  syn_cmd->add_flag("--serial", syn_serial, "per-slice work on one thread");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "error budget vs a parameter");
  std::string sweep_parameter, sweep_schedule;
  std::vector<double> sweep_values;
  int sweep_n = 2, sweep_segments = 3;
  double sweep_p = 0.0, sweep_s = 1.0, sweep_delta = 0.05;
  sweep_cmd->add_option("--parameter", sweep_parameter, "p|delta")->required();
  sweep_cmd->add_option("--values", sweep_values, "parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("--schedule", sweep_schedule, "schedule JSON file (default: seeded family)");
  sweep_cmd->add_option("--n", sweep_n, "site count for the seeded family");
  sweep_cmd->add_option("--segments", sweep_segments, "segments of the seeded family");
  sweep_cmd->add_option("--penalty-p", sweep_p, "fixed p for delta sweeps");
  sweep_cmd->add_option("--one-body-s", sweep_s, "one-body metric weight");
  sweep_cmd->add_option("--delta", sweep_delta, "fixed slice width for p sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (basis_cmd->parsed()) return cmd_basis(g, basis_n, basis_max_body, basis_list);
    if (verify_cmd->parsed()) {
      if (trials == 0)
        trials = lemma == "prop1" ? 1000 : (lemma == "trotter" ? 20 : 50);
      return cmd_verify(g, lemma, verify_n, trials, verify_serial);
    }
    if (geo_cmd->parsed()) return cmd_geodesic(g, mode, geo_n, geo_p, geo_s, t_f, steps);
    if (syn_cmd->parsed())
      return cmd_synthesize(g, schedule_path, syn_p, syn_s, syn_delta, gate_norm, syn_serial);
    if (sweep_cmd->parsed())
      return cmd_sweep(g, sweep_parameter, sweep_values, sweep_schedule, sweep_n, sweep_p,
                       sweep_s, sweep_delta, sweep_segments);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
