#pragma once

#include <vector>

#include "qg3/linalg.hpp"
#include "qg3/metric.hpp"

namespace qg3 {

/// One sample along an integrated geodesic. L and H are dense coefficient
/// vectors over the canonical basis (H = G^{-1} L); U is the accumulated
/// evolution operator.
struct GeodesicState {
  double t = 0.0;
  RealVector L;
  RealVector H;
  Matrix U;
};

/// Right-hand side of the momentum equation dL/dt = i [L, G^{-1}(L)],
/// evaluated through dense matrices and re-encoded. Hermitian-valued exactly.
CoefficientVector geodesic_rhs(const CoefficientVector& l, const PenaltyWeights& w);

struct IntegrateOptions {
  double energy_drift_tol = 1e-3;  // diagnostic threshold, relative
};

/// Classical RK4 on the coupled system dL/dt = i[L, G^{-1}L], dU/dt = -iHU.
/// Returns steps+1 states including t = 0. Throws validation_error with a
/// refinement hint when the metric energy drifts beyond the tolerance.
std::vector<GeodesicState> integrate_geodesic(const CoefficientVector& l0,
                                              const PenaltyWeights& w, double t_f, int steps,
                                              const IntegrateOptions& opts = {});

/// Initial data of the structured three-qutrit system: Hermitian momentum
/// parts of pure body weight 1 (S0), 2 (T0), 3 (Q0).
struct StqData {
  Matrix S0, T0, Q0;
  PenaltyWeights w;

  void validate() const;  // Hermiticity and body-weight purity
};

struct StqState {
  double t = 0.0;
  Matrix S, T, Q;
};

/// Closed-form flow of the structured system: S frozen, Q conjugated by the
/// one-body rotation, T doubly conjugated. Exactly solves stq_ode_rhs.
StqState stq_solution(const StqData& d, double t);

/// The structured ODE right-hand side (weights taken from d.w):
///   dS = 0
///   dT = i [ (1 - 1/wS) S + (1 - 1/wQ) Q, T ]
///   dQ = i (1/wQ - 1/wS) [S, Q]
/// This system coincides with the full momentum equation only when T0 = 0 or
/// Q0 = 0: for su(3) factors, [T, Q] has a 3-body component that the
/// structured form drops (the d-symbols do not vanish as they do for
/// qubits), so generic structured trajectories are not geodesics.
StqState stq_ode_rhs(const StqData& d, const StqState& y);

/// RK4 integration of the structured system itself; cross-validates the
/// closed form on generic data.
std::vector<StqState> integrate_stq(const StqData& d, double t_f, int steps);

/// Evolution operator of the structured flow: dU/dt = -i H(t) U with
/// H(t) = (1/wS) S(t) + T(t) + (1/wQ) Q(t) from the closed form. This is the
/// reference the large-penalty approximations are measured against.
Matrix structured_evolution(const StqData& d, double t_f, int steps);

/// Large-penalty approximate Hamiltonian
/// (1/wS) S0 + e^{-it S0/wS} e^{it(S0+Q0)} T0 e^{-it(S0+Q0)} e^{it S0/wS}.
Matrix approx_hamiltonian(const StqData& d, double t);

/// Three-factor approximate unitary
/// e^{-it S0/wS} e^{it(S0+Q0)} e^{-it(S0+T0+Q0)}.
Matrix approx_unitary(const StqData& d, double t);

/// First-order reduction e^{-it S0/wS} e^{-it R(T0)} where R keeps only the
/// diagonal of T0 in the eigenbasis of S0+Q0. Requires a non-degenerate
/// spectrum (minimum gap > 1e-8); throws validation_error naming the gap.
Matrix perturbative_unitary(const StqData& d, double t);

/// Time-ordered product of per-segment exponentials (later segments multiply
/// on the left). Empty schedule gives the identity.
Matrix evolve_schedule(const Schedule& sch);

// --- Seeded random instances (the test/campaign family) -------------------

/// Independent standard normal coefficient per label with body weight
/// <= max_body (0 = all).
CoefficientVector random_coefficient_vector(int n, Rng& rng, int max_body = 0);

/// Same, then rescaled so that cost F(H) = 1.
CoefficientVector random_normalized_hamiltonian(int n, Rng& rng, const PenaltyWeights& w,
                                                int max_body = 0);

/// Structured initial data from a normalized Hamiltonian: L = G(H) split into
/// body classes and decoded.
StqData random_stq_data(Rng& rng, const PenaltyWeights& w);

/// Piecewise-constant schedule with `segments` random segments; durations
/// uniform in [0.1, 0.4]. When normalized, every segment has F(H) = 1 so the
/// path length equals the total duration.
Schedule random_schedule(int n, int segments, Rng& rng, const PenaltyWeights& w,
                         bool normalized = true, int max_body = 0);

}  // namespace qg3
