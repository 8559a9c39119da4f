#include "qg3/geodesic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace qg3 {

namespace {

const Complex kI(0.0, 1.0);

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// exp(+i theta M) for Hermitian M
Matrix expm_i(const Matrix& m, double theta) { return hermitian_expm(m, -theta); }

}  // namespace

CoefficientVector geodesic_rhs(const CoefficientVector& l, const PenaltyWeights& w) {
  const Basis& basis = Basis::get(l.n);
  Matrix ld = basis.decode(l);
  Matrix hd = basis.decode(apply_metric_inverse(l, w));
  Matrix rhs = kI * commutator(ld, hd);
  return basis.encode(rhs);
}

namespace {

struct DenseRhs {
  const Basis& basis;
  RealVector inv_weight;  // 1 / class_weight per index

  DenseRhs(const Basis& b, const PenaltyWeights& w) : basis(b), inv_weight(b.size()) {
    for (int i = 0; i < b.size(); ++i) inv_weight[i] = 1.0 / w.class_weight(b.body_of(i));
  }

  RealVector h_of(const RealVector& l) const { return inv_weight.cwiseProduct(l); }

  void eval(const RealVector& l, const Matrix& u, RealVector& dl, Matrix& du) const {
    RealVector h = h_of(l);
    Matrix hd = basis.decode_dense(h);
    Matrix ld = basis.decode_dense(l);
    dl = basis.encode_dense(kI * commutator(ld, hd));
    du = -kI * (hd * u);
  }
};

}  // namespace

std::vector<GeodesicState> integrate_geodesic(const CoefficientVector& l0,
                                              const PenaltyWeights& w, double t_f, int steps,
                                              const IntegrateOptions& opts) {
  w.validate();
  if (steps < 1) throw std::invalid_argument("integrate_geodesic: steps must be >= 1");
  if (!(t_f > 0.0)) throw std::invalid_argument("integrate_geodesic: t_f must be > 0");
  const Basis& basis = Basis::get(l0.n);
  const DenseRhs rhs(basis, w);

  RealVector l = basis.to_dense(l0);
  Matrix u = Matrix::Identity(basis.dim(), basis.dim());
  const double h = t_f / steps;

  // conserved metric energy <H, G H> = sum L_i H_i
  auto energy = [&](const RealVector& lv) { return lv.dot(rhs.h_of(lv)); };
  const double e0 = energy(l);

  std::vector<GeodesicState> out;
  out.reserve(steps + 1);
  out.push_back({0.0, l, rhs.h_of(l), u});

  RealVector k1l, k2l, k3l, k4l;
  Matrix k1u, k2u, k3u, k4u;
  for (int step = 0; step < steps; ++step) {
    rhs.eval(l, u, k1l, k1u);
    rhs.eval(l + 0.5 * h * k1l, u + 0.5 * h * k1u, k2l, k2u);
    rhs.eval(l + 0.5 * h * k2l, u + 0.5 * h * k2u, k3l, k3u);
    rhs.eval(l + h * k3l, u + h * k3u, k4l, k4u);
    l += (h / 6.0) * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    const double t = h * (step + 1);
    const double drift = std::abs(energy(l) - e0) / std::max(std::abs(e0), 1e-30);
    if (drift > opts.energy_drift_tol)
      throw validation_error("integrate_geodesic: energy drift " + std::to_string(drift) +
                             " at t=" + std::to_string(t) +
                             "; increase the step count");
    out.push_back({t, l, rhs.h_of(l), u});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structured three-qutrit system

void StqData::validate() const {
  w.validate();
  const Basis& basis = Basis::get(3);
  const Matrix* parts[3] = {&S0, &T0, &Q0};
  const char* names[3] = {"S0", "T0", "Q0"};
  for (int i = 0; i < 3; ++i) {
    const Matrix& m = *parts[i];
    if (m.rows() != basis.dim() || m.cols() != basis.dim())
      throw std::invalid_argument(std::string("StqData: ") + names[i] + " must be 27x27");
    if (hermiticity_defect(m) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw validation_error(std::string("StqData: ") + names[i] + " is not Hermitian");
    if (m.cwiseAbs().maxCoeff() == 0.0) continue;
    CoefficientVector c = basis.encode(m);
    for (const auto& [l, v] : c.terms) {
      if (l.body() != i + 1)
        throw validation_error(std::string("StqData: ") + names[i] +
                               " has a body-weight-" + std::to_string(l.body()) + " component");
    }
  }
}

namespace {

StqState stq_solution_unchecked(const StqData& d, double t) {
  const double ws = d.w.class_weight(1);
  const double wq = d.w.class_weight(3);
  const double a = 1.0 / wq - 1.0 / ws;
  const double b = 1.0 - 1.0 / wq;
  Matrix wrot = expm_i(d.S0, a * t);
  Matrix vrot = expm_i(d.S0 + d.Q0, b * t);
  StqState out;
  out.t = t;
  out.S = d.S0;
  out.T = wrot * vrot * d.T0 * vrot.adjoint() * wrot.adjoint();
  out.Q = wrot * d.Q0 * wrot.adjoint();
  return out;
}

}  // namespace

StqState stq_solution(const StqData& d, double t) {
  d.validate();
  return stq_solution_unchecked(d, t);
}

StqState stq_ode_rhs(const StqData& d, const StqState& y) {
  const double ws = d.w.class_weight(1);
  const double wq = d.w.class_weight(3);
  StqState out;
  out.t = y.t;
  out.S = Matrix::Zero(y.S.rows(), y.S.cols());
  out.T = kI * commutator((1.0 - 1.0 / ws) * y.S + (1.0 - 1.0 / wq) * y.Q, y.T);
  out.Q = kI * (1.0 / wq - 1.0 / ws) * commutator(y.S, y.Q);
  return out;
}

std::vector<StqState> integrate_stq(const StqData& d, double t_f, int steps) {
  d.validate();
  if (steps < 1) throw std::invalid_argument("integrate_stq: steps must be >= 1");
  const double h = t_f / steps;
  StqState y{0.0, d.S0, d.T0, d.Q0};
  std::vector<StqState> out;
  out.reserve(steps + 1);
  out.push_back(y);
  auto axpy = [](const StqState& y0, double c, const StqState& k) {
    StqState r;
    r.S = y0.S + c * k.S;
    r.T = y0.T + c * k.T;
    r.Q = y0.Q + c * k.Q;
    return r;
  };
  for (int step = 0; step < steps; ++step) {
    StqState k1 = stq_ode_rhs(d, y);
    StqState k2 = stq_ode_rhs(d, axpy(y, 0.5 * h, k1));
    StqState k3 = stq_ode_rhs(d, axpy(y, 0.5 * h, k2));
    StqState k4 = stq_ode_rhs(d, axpy(y, h, k3));
    y.S += (h / 6.0) * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S);
    y.T += (h / 6.0) * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
    y.Q += (h / 6.0) * (k1.Q + 2.0 * k2.Q + 2.0 * k3.Q + k4.Q);
    y.t = h * (step + 1);
    out.push_back(y);
  }
  return out;
}

Matrix structured_evolution(const StqData& d, double t_f, int steps) {
  d.validate();
  if (steps < 1) throw std::invalid_argument("structured_evolution: steps must be >= 1");
  const double ws = d.w.class_weight(1);
  const double wq = d.w.class_weight(3);
  auto hamiltonian = [&](double t) {
    StqState y = stq_solution_unchecked(d, t);
    return Matrix(y.S / ws + y.T + y.Q / wq);
  };
  Matrix u = Matrix::Identity(d.S0.rows(), d.S0.cols());
  const double h = t_f / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    Matrix k1 = -kI * (hamiltonian(t) * u);
    Matrix k2 = -kI * (hamiltonian(t + 0.5 * h) * (u + 0.5 * h * k1));
    Matrix k3 = -kI * (hamiltonian(t + 0.5 * h) * (u + 0.5 * h * k2));
    Matrix k4 = -kI * (hamiltonian(t + h) * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

Matrix approx_hamiltonian(const StqData& d, double t) {
  d.validate();
  const double ws = d.w.class_weight(1);
  Matrix srot = expm_i(d.S0, -t / ws);            // e^{-it S0/wS}
  Matrix sq = expm_i(d.S0 + d.Q0, t);             // e^{+it (S0+Q0)}
  return d.S0 / ws + srot * sq * d.T0 * sq.adjoint() * srot.adjoint();
}

Matrix approx_unitary(const StqData& d, double t) {
  d.validate();
  const double ws = d.w.class_weight(1);
  Matrix f1 = expm_i(d.S0, -t / ws);
  Matrix f2 = expm_i(d.S0 + d.Q0, t);
  Matrix f3 = expm_i(d.S0 + d.T0 + d.Q0, -t);
  return f1 * f2 * f3;
}

Matrix perturbative_unitary(const StqData& d, double t) {
  d.validate();
  const double ws = d.w.class_weight(1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.S0 + d.Q0);
  double min_gap = std::numeric_limits<double>::infinity();
  int gap_at = 0;
  for (int i = 0; i + 1 < es.eigenvalues().size(); ++i) {
    const double gap = es.eigenvalues()(i + 1) - es.eigenvalues()(i);
    if (gap < min_gap) {
      min_gap = gap;
      gap_at = i;
    }
  }
  if (!(min_gap > 1e-8))
    throw validation_error("perturbative_unitary: S0+Q0 spectrum is degenerate (gap " +
                           std::to_string(min_gap) + " between levels " + std::to_string(gap_at) +
                           " and " + std::to_string(gap_at + 1) + ")");
  const Matrix& v = es.eigenvectors();
  Matrix in_basis = v.adjoint() * d.T0 * v;
  Matrix restricted = v * in_basis.diagonal().asDiagonal() * v.adjoint();
  return expm_i(d.S0, -t / ws) * hermitian_expm(restricted, t);
}

Matrix evolve_schedule(const Schedule& sch) {
  sch.validate();
  const Basis& basis = Basis::get(sch.n);
  Matrix u = Matrix::Identity(basis.dim(), basis.dim());
  for (const auto& seg : sch.segments) u = hermitian_expm(basis.decode(seg.h), seg.dt) * u;
  return u;
}

// ---------------------------------------------------------------------------
// Random instances

CoefficientVector random_coefficient_vector(int n, Rng& rng, int max_body) {
  CoefficientVector c(n);
  for (const auto& l : enumerate_basis(n, max_body)) c.add(l, rng.gaussian());
  return c;
}

CoefficientVector random_normalized_hamiltonian(int n, Rng& rng, const PenaltyWeights& w,
                                                int max_body) {
  CoefficientVector c = random_coefficient_vector(n, rng, max_body);
  const double f = cost(c, w);
  c *= 1.0 / f;
  return c;
}

StqData random_stq_data(Rng& rng, const PenaltyWeights& w) {
  const Basis& basis = Basis::get(3);
  CoefficientVector h = random_normalized_hamiltonian(3, rng, w);
  BodySplit parts = split_stq(apply_metric(h, w));
  StqData d;
  d.w = w;
  d.S0 = basis.decode(parts.S);
  d.T0 = basis.decode(parts.T);
  d.Q0 = basis.decode(parts.Q);
  return d;
}

Schedule random_schedule(int n, int segments, Rng& rng, const PenaltyWeights& w, bool normalized,
                         int max_body) {
  Schedule sch;
  sch.n = n;
  sch.segments.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    Segment seg;
    seg.dt = rng.uniform(0.1, 0.4);
    seg.h = normalized ? random_normalized_hamiltonian(n, rng, w, max_body)
                       : random_coefficient_vector(n, rng, max_body);
    sch.segments.push_back(std::move(seg));
  }
  return sch;
}

}  // namespace qg3
