#pragma once

#include <vector>

#include "qg3/basis.hpp"

namespace qg3 {

/// Weights of the diagonal right-invariant metric on the coefficient space.
///
/// `p` is the cost penalty for >=3-body directions: the quadratic form
/// carries p^2 on those coordinates, so a single penalized coefficient h
/// costs p|h|. `s` is the one-body weight of the generalized three-qutrit
/// metric; s = 1 recovers the plain penalty metric. Consequently the metric
/// map G scales the body classes by (s, 1, p^2); the symbol "p" in the
/// closed-form three-qutrit solution denotes that 3-body eigenvalue p^2.
struct PenaltyWeights {
  double p = 9.0;
  double s = 1.0;

  void validate() const {
    if (p <= 0.0 || s <= 0.0) throw std::invalid_argument("PenaltyWeights: p and s must be > 0");
  }

  /// Metric eigenvalue of a body-weight class.
  double class_weight(int body) const {
    if (body <= 1) return s;
    if (body == 2) return 1.0;
    return p * p;
  }

  static PenaltyWeights default_for(int n) {
    PenaltyWeights w;
    w.p = static_cast<double>(pow9(n));
    return w;
  }
};

/// Piecewise-constant Hamiltonian schedule.
struct Segment {
  double dt = 0.0;
  CoefficientVector h;
};

struct Schedule {
  int n = 0;
  std::vector<Segment> segments;

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.dt;
    return t;
  }

  void validate() const;
};

/// Cost functional F(H) = sqrt(sum' h^2 + p^2 sum'' h^2), where the primed
/// sum ranges over body weight <= 2 and the double-primed over >= 3.
double cost(const CoefficientVector& c, const PenaltyWeights& w);

/// Diagonal metric inner product sum_sigma g_sigma a_sigma b_sigma with
/// g = (s, 1, p^2) per body class. cost(c,w)^2 == metric_inner(c,c,w) at s=1.
double metric_inner(const CoefficientVector& a, const CoefficientVector& b,
                    const PenaltyWeights& w);

/// Three-qutrit body-weight split (1-body S, 2-body T, 3-body Q).
struct BodySplit {
  CoefficientVector S, T, Q;
};

BodySplit split_stq(const CoefficientVector& c);

/// The metric map G (class scaling by s, 1, p^2) and its inverse.
CoefficientVector apply_metric(const CoefficientVector& c, const PenaltyWeights& w);
CoefficientVector apply_metric_inverse(const CoefficientVector& c, const PenaltyWeights& w);

/// Curve length sum_segments dt * F(H); invariant under segment refinement.
double path_length(const Schedule& sch, const PenaltyWeights& w);

/// Rescales every segment to F(H) = 1, adjusting durations so each segment
/// generates the same unitary; total duration becomes the path length.
/// Throws validation_error on a zero-cost segment.
Schedule normalize_schedule(const Schedule& sch, const PenaltyWeights& w);

}  // namespace qg3
