#include "qg3/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qg3 {

double spectral_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_norm: matrix must be square");
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

double hermitian_part_max_eig(const Matrix& m, double theta) {
  const Complex phase(std::cos(theta), std::sin(theta));
  Matrix h = 0.5 * (phase * m + std::conj(phase) * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

double expectation_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expectation_norm: matrix must be square");
  if (m.rows() == 0) return 0.0;
  constexpr int kSamples = 64;
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double f = hermitian_part_max_eig(m, kTwoPi * i / kSamples);
    if (f > best) {
      best = f;
      best_i = i;
    }
  }
  // Golden-section refinement around the best sample.
  double lo = kTwoPi * (best_i - 1) / kSamples;
  double hi = kTwoPi * (best_i + 1) / kSamples;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = hermitian_part_max_eig(m, x1);
  double f2 = hermitian_part_max_eig(m, x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = hermitian_part_max_eig(m, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = hermitian_part_max_eig(m, x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

Matrix hermitian_expm(const Matrix& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_expm: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTol * scale)
    throw validation_error("hermitian_expm: input is not Hermitian (defect " +
                           std::to_string(defect) + ")");
  if (t == 0.0) return Matrix::Identity(h.rows(), h.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    const double a = -es.eigenvalues()(i) * t;
    phases(i) = Complex(std::cos(a), std::sin(a));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

PowerGap unitary_power_gap(const Matrix& a, const Matrix& b, int n) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("unitary_power_gap: dimension mismatch");
  if (n < 1) throw std::invalid_argument("unitary_power_gap: N must be >= 1");
  if (unitarity_defect(a) > 1e-8 || unitarity_defect(b) > 1e-8)
    throw validation_error("unitary_power_gap: operands must be unitary");
  Matrix an = a;
  Matrix bn = b;
  for (int i = 1; i < n; ++i) {
    an = a * an;
    bn = b * bn;
  }
  PowerGap g;
  g.lhs = spectral_norm(an - bn);
  g.rhs = n * spectral_norm(a - b);
  return g;
}

Matrix random_hermitian_traceless(int dim, Rng& rng) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Matrix h = 0.5 * (m + m.adjoint());
  h -= (h.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  return h;
}

Matrix random_unitary(int dim, Rng& rng) {
  return hermitian_expm(random_hermitian_traceless(dim, rng), 1.0);
}

}  // namespace qg3
