#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qg3/synthesis.hpp"

namespace qg3 {

struct TrialRow {
  int index = 0;
  bool pass = false;
  double margin = 0.0;  // >= 0 on pass; bound minus measured value
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct CampaignReport {
  std::string name;
  std::uint64_t seed = 0;
  int trials = 0;
  int passed = 0;
  double worst_margin = 0.0;
  std::map<std::string, double> params;
  std::vector<TrialRow> rows;

  bool all_pass() const { return passed == trials; }
};

struct CampaignOptions {
  bool parallel = true;  // trials are independent; the report is identical either way
};

/// |A^N - B^N| <= N |A - B| over random unitary pairs (dims 3 and 9,
/// N cycling 2..8).
CampaignReport run_prop1_campaign(int trials, std::uint64_t seed,
                                  const CampaignOptions& opts = {});

/// |U - U_P| <= 3^n d / p over seeded normalized schedules, n cycling 1..3
/// and p alternating {9, 81}. Only n = 3 admits >=3-body terms, so those
/// trials carry the nontrivial content; n <= 2 verifies the degenerate case.
CampaignReport run_projection_campaign(int trials, std::uint64_t seed,
                                       const CampaignOptions& opts = {});

/// |U - exp(-i mean delta)| <= 2(e^{c delta} - 1 - c delta) over piecewise-
/// constant Hamiltonians with |H| <= c, c in {1, 4 sqrt 2}, delta in
/// {0.1, 0.01}; also checks measured/(c delta)^2 <= 1.25.
CampaignReport run_mean_campaign(int trials, std::uint64_t seed,
                                 const CampaignOptions& opts = {});

/// Per-slice factoring defect scales as width^3: log-log slope over
/// {0.1, 0.05, 0.025} must lie in [2.6, 3.4] for noncommuting two-term means.
CampaignReport run_trotter_campaign(int trials, std::uint64_t seed,
                                    const CampaignOptions& opts = {});

/// Bracket-closure rank report as a single-row campaign.
CampaignReport run_closure_campaign(int n, const CampaignOptions& opts = {});

}  // namespace qg3
