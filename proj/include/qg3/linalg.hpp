#pragma once

#include "qg3/common.hpp"
#include "qg3/rng.hpp"

namespace qg3 {

/// Largest singular value (operator norm), relative accuracy ~1e-10.
double spectral_norm(const Matrix& m);

/// Numerical-range radius max_{|psi|=1} |<psi|M|psi>|, computed as the
/// maximum over rotations e^{i theta} M of the largest eigenvalue of the
/// Hermitian part (64 samples, then golden-section refinement). Accuracy 1e-8.
/// Not unitarily invariant; equals spectral_norm for Hermitian or unitary M.
double expectation_norm(const Matrix& m);

/// exp(-i H t) for Hermitian H via eigendecomposition. Validates Hermiticity
/// (tolerance 1e-10 relative to the largest entry); throws validation_error.
Matrix hermitian_expm(const Matrix& h, double t);

struct PowerGap {
  double lhs = 0.0;  // |A^N - B^N|
  double rhs = 0.0;  // N |A - B|
};

/// Both sides of the unitary power inequality |A^N - B^N| <= N |A - B|.
PowerGap unitary_power_gap(const Matrix& a, const Matrix& b, int n);

Matrix random_hermitian_traceless(int dim, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);

}  // namespace qg3
