#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qg3/geodesic.hpp"

namespace qg3 {

/// One gate factor exp(-i angle Λ_label); labels have body weight <= 2.
struct Gate {
  BasisLabel label;
  double angle = 0.0;
};

/// Ordered gate list; the first gate acts first, so the realized unitary is
/// the right-to-left product of the factors.
struct GateSequence {
  int n = 0;
  std::vector<Gate> gates;
};

Matrix realize(const GateSequence& gs);

/// Number of one- and two-body basis elements: L = 32 n^2 - 24 n.
long long two_body_count(int n);

/// Operator-norm cap 4 sqrt(2) n for normalized (F <= 1) one-/two-body
/// Hamiltonians; the constant c fed to mean_bound.
double norm_cap_two_body(int n);

/// Restriction of every segment to body weight <= 2. Idempotent.
Schedule project_two_body(const Schedule& sch);

/// A-priori projection error 3^n d / p.
double projection_bound(double d, int n, double p);

struct Slice {
  double width = 0.0;
  CoefficientVector mean;
};

/// Cuts the schedule into slices of width delta (last one may be shorter)
/// and returns the duration-weighted mean Hamiltonian of each slice;
/// sum_j width_j * mean_j equals the schedule integral exactly.
std::vector<Slice> slice_and_average(const Schedule& sch, double delta);

/// A-priori mean-Hamiltonian error 2 (e^{c delta} - 1 - c delta) = O(c^2 delta^2).
double mean_bound(double c, double delta);

/// First-order product-formula factorization of exp(-i mean width): the
/// window is cut into ceil(1/width) sub-intervals and every term contributes
/// one factor per sub-interval, in canonical label order. Throws on >=3-body
/// terms (project first). `sub_width` overrides the nominal sub-interval
/// size (used for a short final slice, whose sub-intervals keep the full
/// slice's size instead of the pathological ceil(1/width)).
GateSequence trotter_slice(const CoefficientVector& mean, double width, double sub_width = 0.0);

/// The unitary realized by trotter_slice, computed factor-cached.
Matrix trotter_slice_unitary(const CoefficientVector& mean, double width, double sub_width = 0.0);

struct SliceDiagnostics {
  int index = 0;
  double width = 0.0;
  double norm_cap = 0.0;       // c used in the mean bound
  double mean_bound = 0.0;     // a-priori per-slice mean-Hamiltonian term
  double trotter_defect = 0.0; // measured |exp(-i mean width) - U_slice|
  long long gate_count = 0;
};

struct ErrorBudget {
  double projection = 0.0;      // 3^n/p * integral F(H - H_P); <= 3^n d / p
  double mean_total = 0.0;      // sum of per-slice mean bounds
  double trotter_total = 0.0;   // sum of measured per-slice defects
  double a_priori_total = 0.0;  // sum of the three
  double measured_error = 0.0;  // |U - U_A|
  long long gate_count = 0;
  // parameters
  int n = 0;
  double p = 0.0;
  double delta = 0.0;
  int slices = 0;
  double norm_cap = 0.0;
  double path_length = 0.0;
};

struct SynthesisReport {
  std::string input_digest;
  GateSequence gates;
  ErrorBudget budget;
  std::vector<SliceDiagnostics> slices;
};

struct SynthesisOptions {
  bool parallel = true;  // per-slice work; the output is identical either way
};

/// Full pipeline: project to one-/two-body, slice and average, factor each
/// slice into gates, concatenate in time order. The budget combines the
/// a-priori projection and mean terms with the measured per-slice factoring
/// defects (summed; valid for products of unitaries), and the measured total
/// error against the exact schedule evolution.
/// Requires F(H) <= 1 per segment and delta <= total duration.
SynthesisReport synthesize(const Schedule& sch, const PenaltyWeights& w, double delta,
                           const SynthesisOptions& opts = {});

/// Gate-count forecast for target length d with 1/delta = n^k d: slice count
/// times the worst-case gates per slice, i.e. c1 d^3 n^{2k+2} with
/// c1 = L/n^2 up to the integer slice/sub-interval counts.
long long gate_count_estimate(double d, int n, int k);

std::uint64_t fnv1a64(const std::string& s);

/// Stable digest of a schedule (canonical text form).
std::string schedule_digest(const Schedule& sch);

}  // namespace qg3
