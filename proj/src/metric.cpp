#include "qg3/metric.hpp"

#include <cmath>
#include <string>

namespace qg3 {

void Schedule::validate() const {
  if (n < 1) throw validation_error("schedule: n must be >= 1");
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].dt > 0.0))
      throw validation_error("schedule: segment " + std::to_string(i) + " has non-positive duration");
    if (segments[i].h.n != n)
      throw validation_error("schedule: segment " + std::to_string(i) + " has mismatched site count");
    for (const auto& [l, v] : segments[i].h.terms) l.validate();
  }
}

double cost(const CoefficientVector& c, const PenaltyWeights& w) {
  w.validate();
  double low = 0.0, high = 0.0;
  for (const auto& [l, v] : c.terms) {
    if (l.body() <= 2)
      low += v * v;
    else
      high += v * v;
  }
  return std::sqrt(low + w.p * w.p * high);
}

double metric_inner(const CoefficientVector& a, const CoefficientVector& b,
                    const PenaltyWeights& w) {
  w.validate();
  if (a.n != b.n) throw std::invalid_argument("metric_inner: site count mismatch");
  const CoefficientVector& small = a.terms.size() <= b.terms.size() ? a : b;
  const CoefficientVector& large = a.terms.size() <= b.terms.size() ? b : a;
  double acc = 0.0;
  for (const auto& [l, v] : small.terms) {
    auto it = large.terms.find(l);
    if (it == large.terms.end()) continue;
    acc += w.class_weight(l.body()) * v * it->second;
  }
  return acc;
}

BodySplit split_stq(const CoefficientVector& c) {
  if (c.n != 3) throw std::invalid_argument("split_stq: requires n = 3");
  BodySplit out;
  out.S = c.body_filter(1, 1);
  out.T = c.body_filter(2, 2);
  out.Q = c.body_filter(3, 3);
  return out;
}

CoefficientVector apply_metric(const CoefficientVector& c, const PenaltyWeights& w) {
  w.validate();
  CoefficientVector out(c.n);
  for (const auto& [l, v] : c.terms) out.terms.emplace(l, w.class_weight(l.body()) * v);
  return out;
}

CoefficientVector apply_metric_inverse(const CoefficientVector& c, const PenaltyWeights& w) {
  w.validate();
  CoefficientVector out(c.n);
  for (const auto& [l, v] : c.terms) out.terms.emplace(l, v / w.class_weight(l.body()));
  return out;
}

double path_length(const Schedule& sch, const PenaltyWeights& w) {
  double len = 0.0;
  for (const auto& seg : sch.segments) len += seg.dt * cost(seg.h, w);
  return len;
}

Schedule normalize_schedule(const Schedule& sch, const PenaltyWeights& w) {
  Schedule out;
  out.n = sch.n;
  out.segments.reserve(sch.segments.size());
  for (size_t i = 0; i < sch.segments.size(); ++i) {
    const double f = cost(sch.segments[i].h, w);
    if (f <= 0.0)
      throw validation_error("normalize_schedule: segment " + std::to_string(i) +
                             " has zero cost");
    Segment seg;
    seg.dt = sch.segments[i].dt * f;
    seg.h = sch.segments[i].h;
    seg.h *= 1.0 / f;
    out.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace qg3
