#include "qg3/synthesis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qg3 {

Matrix realize(const GateSequence& gs) {
  const Basis& basis = Basis::get(gs.n);
  Matrix u = Matrix::Identity(basis.dim(), basis.dim());
  for (const auto& g : gs.gates) {
    const int idx = basis.index_of(g.label);
    if (idx < 0) throw std::invalid_argument("realize: unknown label " + g.label.str());
    u = hermitian_expm(basis.element(idx), g.angle) * u;
  }
  return u;
}

long long two_body_count(int n) { return 32LL * n * n - 24LL * n; }

double norm_cap_two_body(int n) { return 4.0 * std::sqrt(2.0) * n; }

Schedule project_two_body(const Schedule& sch) {
  Schedule out;
  out.n = sch.n;
  out.segments.reserve(sch.segments.size());
  for (const auto& seg : sch.segments)
    out.segments.push_back({seg.dt, seg.h.body_filter(1, 2)});
  return out;
}

double projection_bound(double d, int n, double p) {
  if (d < 0.0) throw std::invalid_argument("projection_bound: d must be >= 0");
  if (!(p > 0.0)) throw std::invalid_argument("projection_bound: p must be > 0");
  return pow3(n) * d / p;
}

std::vector<Slice> slice_and_average(const Schedule& sch, double delta) {
  sch.validate();
  if (sch.segments.empty()) throw validation_error("slice_and_average: empty schedule");
  if (!(delta > 0.0)) throw std::invalid_argument("slice_and_average: delta must be > 0");
  const double total = sch.total_duration();

  std::vector<Slice> out;
  size_t seg = 0;
  double seg_used = 0.0;  // duration consumed within the current segment
  double t = 0.0;
  while (t < total - 1e-12) {
    const double width = std::min(delta, total - t);
    Slice s;
    s.width = width;
    s.mean = CoefficientVector(sch.n);
    double remaining = width;
    while (remaining > 1e-15 && seg < sch.segments.size()) {
      const double avail = sch.segments[seg].dt - seg_used;
      const double take = std::min(avail, remaining);
      CoefficientVector part = sch.segments[seg].h;
      part *= take / width;
      s.mean += part;
      seg_used += take;
      remaining -= take;
      if (sch.segments[seg].dt - seg_used <= 1e-15) {
        ++seg;
        seg_used = 0.0;
      }
    }
    out.push_back(std::move(s));
    t += width;
  }
  return out;
}

double mean_bound(double c, double delta) {
  if (c < 0.0 || delta < 0.0) throw std::invalid_argument("mean_bound: arguments must be >= 0");
  const double x = c * delta;
  return 2.0 * (std::expm1(x) - x);
}

namespace {

int inner_steps(double width) {
  return static_cast<int>(std::ceil(1.0 / width - 1e-12));
}

// sub-interval count: ceil(1/width) nominally, or sized by an explicit
// sub-interval width
int slice_reps(double width, double sub_width) {
  if (sub_width <= 0.0) return inner_steps(width);
  return std::max(1, static_cast<int>(std::ceil(width / sub_width - 1e-12)));
}

}  // namespace

GateSequence trotter_slice(const CoefficientVector& mean, double width, double sub_width) {
  if (!(width > 0.0)) throw std::invalid_argument("trotter_slice: width must be > 0");
  if (mean.max_body() > 2)
    throw validation_error("trotter_slice: mean has >=3-body terms; project first");
  const int reps = slice_reps(width, sub_width);
  const double tau = width / reps;
  GateSequence gs;
  gs.n = mean.n;
  gs.gates.reserve(static_cast<size_t>(reps) * mean.terms.size());
  for (int r = 0; r < reps; ++r)
    for (const auto& [l, h] : mean.terms) gs.gates.push_back({l, h * tau});
  return gs;
}

Matrix trotter_slice_unitary(const CoefficientVector& mean, double width, double sub_width) {
  if (!(width > 0.0)) throw std::invalid_argument("trotter_slice_unitary: width must be > 0");
  if (mean.max_body() > 2)
    throw validation_error("trotter_slice_unitary: mean has >=3-body terms; project first");
  const Basis& basis = Basis::get(mean.n);
  const int reps = slice_reps(width, sub_width);
  const double tau = width / reps;
  Matrix step = Matrix::Identity(basis.dim(), basis.dim());
  for (const auto& [l, h] : mean.terms)
    step = hermitian_expm(basis.element(basis.index_of(l)), h * tau) * step;
  Matrix u = Matrix::Identity(basis.dim(), basis.dim());
  for (int r = 0; r < reps; ++r) u = step * u;
  return u;
}

SynthesisReport synthesize(const Schedule& sch, const PenaltyWeights& w, double delta,
                           const SynthesisOptions& opts) {
  sch.validate();
  w.validate();
  if (sch.segments.empty()) throw validation_error("synthesize: empty schedule");
  if (!(delta > 0.0)) throw std::invalid_argument("synthesize: delta must be > 0");
  const double total = sch.total_duration();
  if (delta > total + 1e-12)
    throw validation_error("synthesize: delta exceeds the total duration");
  for (size_t i = 0; i < sch.segments.size(); ++i) {
    const double f = cost(sch.segments[i].h, w);
    if (f > 1.0 + 1e-9)
      throw validation_error("synthesize: segment " + std::to_string(i) +
                             " is not normalized (F = " + std::to_string(f) + ")");
  }

  const Basis& basis = Basis::get(sch.n);
  const Matrix u_target = evolve_schedule(sch);
  const Schedule projected = project_two_body(sch);
  const double d = path_length(sch, w);
  const double cap = norm_cap_two_body(sch.n);
  // projection term: one step into the chain behind projection_bound(d,n,p),
  //   |U - U_P| <= 3^n/p * integral F(H - H_P) dt <= 3^n d / p,
  // so schedules without >=3-body content get an exact zero
  double dropped_length = 0.0;
  for (const auto& seg : sch.segments)
    dropped_length += seg.dt * cost(seg.h.body_filter(3, sch.n), w);

  const std::vector<Slice> slices = slice_and_average(projected, delta);
  const int count = static_cast<int>(slices.size());

  // all slices share the nominal sub-interval size delta/ceil(1/delta), so a
  // short final slice just carries proportionally fewer sub-intervals
  const double nominal_tau = delta / inner_steps(delta);
  std::vector<GateSequence> slice_gates(count);
  std::vector<Matrix> slice_unitaries(count);
  std::vector<SliceDiagnostics> diags(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
  for (int j = 0; j < count; ++j) {
    const Slice& s = slices[j];
    slice_gates[j] = trotter_slice(s.mean, s.width, nominal_tau);
    slice_unitaries[j] = trotter_slice_unitary(s.mean, s.width, nominal_tau);
    const Matrix exact = hermitian_expm(basis.decode(s.mean), s.width);
    SliceDiagnostics& dg = diags[j];
    dg.index = j;
    dg.width = s.width;
    dg.norm_cap = cap;
    dg.mean_bound = mean_bound(cap, s.width);
    dg.trotter_defect = spectral_norm(exact - slice_unitaries[j]);
    dg.gate_count = static_cast<long long>(slice_gates[j].gates.size());
  }
  (void)opts;

  SynthesisReport report;
  report.input_digest = schedule_digest(sch);
  report.gates.n = sch.n;
  Matrix u_a = Matrix::Identity(basis.dim(), basis.dim());
  for (int j = 0; j < count; ++j) {
    report.gates.gates.insert(report.gates.gates.end(), slice_gates[j].gates.begin(),
                              slice_gates[j].gates.end());
    u_a = slice_unitaries[j] * u_a;
  }

  ErrorBudget& b = report.budget;
  b.projection = projection_bound(dropped_length, sch.n, w.p);
  for (const auto& dg : diags) {
    b.mean_total += dg.mean_bound;
    b.trotter_total += dg.trotter_defect;
  }
  b.a_priori_total = b.projection + b.mean_total + b.trotter_total;
  b.measured_error = spectral_norm(u_target - u_a);
  b.gate_count = static_cast<long long>(report.gates.gates.size());
  b.n = sch.n;
  b.p = w.p;
  b.delta = delta;
  b.slices = count;
  b.norm_cap = cap;
  b.path_length = d;
  report.slices = std::move(diags);
  return report;
}

long long gate_count_estimate(double d, int n, int k) {
  if (!(d > 0.0)) throw std::invalid_argument("gate_count_estimate: d must be > 0");
  if (n < 1 || k < 1) throw std::invalid_argument("gate_count_estimate: n and k must be >= 1");
  const double delta = 1.0 / (std::pow(static_cast<double>(n), k) * d);
  const long long slices = static_cast<long long>(std::ceil(d / delta - 1e-9));
  const long long reps = inner_steps(delta);
  return slices * two_body_count(n) * reps;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 17);
  out.append(buf, ptr);
}

}  // namespace

std::string schedule_digest(const Schedule& sch) {
  std::string canon = "n=" + std::to_string(sch.n);
  for (const auto& seg : sch.segments) {
    canon += ";dt=";
    append_double(canon, seg.dt);
    for (const auto& [l, v] : seg.h.terms) {
      canon += "," + l.str() + ":";
      append_double(canon, v);
    }
  }
  std::ostringstream os;
  os << std::hex << fnv1a64(canon);
  return os.str();
}

}  // namespace qg3
