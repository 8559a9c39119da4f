#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qg3 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when input data fails a documented validation check
/// (non-Hermitian operator, malformed schedule, degenerate spectrum, ...).
/// Precondition misuse (bad index, mismatched sizes) throws std::invalid_argument.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kCoeffPruneTol = 1e-14;

inline int pow3(int n) {
  int r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

inline long long pow9(int n) {
  long long r = 1;
  for (int i = 0; i < n; ++i) r *= 9;
  return r;
}

// max_ij |M_ij - (M†)_ij|
double hermiticity_defect(const Matrix& m);
// max_ij |(U†U - I)_ij|
double unitarity_defect(const Matrix& u);

}  // namespace qg3
