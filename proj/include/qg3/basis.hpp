#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "qg3/common.hpp"

namespace qg3 {

/// Label of one su(3^n) basis element: an ordered product of Gell-Mann
/// matrices acting on distinct sites, identity elsewhere.
/// Canonical form: sites strictly increasing, 1 <= site <= n, 1 <= gm <= 8.
struct BasisLabel {
  int n = 0;
  std::vector<std::pair<int, int>> factors;  // (site, gm)

  BasisLabel() = default;
  BasisLabel(int n_sites, std::vector<std::pair<int, int>> f)
      : n(n_sites), factors(std::move(f)) {}

  int body() const { return static_cast<int>(factors.size()); }

  /// Throws std::invalid_argument unless canonical.
  void validate() const;

  bool operator==(const BasisLabel& o) const { return n == o.n && factors == o.factors; }

  /// Canonical order: body weight, then site tuple, then gm tuple.
  bool operator<(const BasisLabel& o) const;

  std::string str() const;
};

/// Sparse real coefficient map over basis labels; zero coefficients are
/// never stored. The iteration order of `terms` is the canonical label order.
struct CoefficientVector {
  int n = 0;
  std::map<BasisLabel, double> terms;

  CoefficientVector() = default;
  explicit CoefficientVector(int n_sites) : n(n_sites) {}

  bool empty() const { return terms.empty(); }
  double coeff(const BasisLabel& l) const;
  void add(const BasisLabel& l, double v);
  void prune(double tol);

  CoefficientVector& operator+=(const CoefficientVector& o);
  CoefficientVector& operator-=(const CoefficientVector& o);
  CoefficientVector& operator*=(double a);

  double norm2() const;     // plain Euclidean norm of the coefficients
  int max_body() const;     // 0 when empty
  /// Restriction to body weights in [lo, hi].
  CoefficientVector body_filter(int lo, int hi) const;
};

CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b);
CoefficientVector operator-(CoefficientVector a, const CoefficientVector& b);
CoefficientVector operator*(double a, CoefficientVector c);

/// The eight Gell-Mann matrices, 1-indexed.
Matrix gell_mann(int k);

/// Variant rescaled to unit operator norm (only lambda_8 changes).
Matrix gell_mann_unit_norm(int k);

/// Plain Kronecker product of the label's Gell-Mann factors with identity on
/// unlisted sites. No normalization factor is applied here; see Basis for the
/// trace-orthonormal elements backing the coefficient space.
Matrix build_operator(const BasisLabel& label);

/// All canonical labels for n sites with body weight <= max_body
/// (max_body <= 0 means unbounded). Deterministic canonical order.
/// Counts: 9^n - 1 unbounded, 32 n^2 - 24 n for max_body = 2.
std::vector<BasisLabel> enumerate_basis(int n, int max_body = 0);

/// Cached per-n basis table. The dense realization of a label carries the
/// factor (3/2)^((s-1)/2) for an s-body label so that
///   tr(Λ_a Λ_b) = 2 * 3^(n-1) * δ_ab,
/// i.e. the elements are orthonormal under <A,B> = tr(A†B) / (2 * 3^(n-1)).
/// Plain products only achieve this for s = 1 (tr I² = 3 but tr λ² = 2);
/// the body-weight factor restores a uniform trace norm.
class Basis {
 public:
  explicit Basis(int n);

  /// Thread-safe memoized accessor.
  static const Basis& get(int n);

  int sites() const { return n_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(labels_.size()); }  // 9^n - 1
  const std::vector<BasisLabel>& labels() const { return labels_; }
  int index_of(const BasisLabel& l) const;  // -1 when absent

  /// Trace-normalization factor for an s-body element: (3/2)^((s-1)/2).
  static double scale(int body);

  /// Dense normalized element.
  Matrix element(int index) const;

  Matrix decode(const CoefficientVector& c) const;
  /// Validates Hermiticity and tracelessness (throws validation_error with
  /// the measured violation), then projects onto the basis via the trace
  /// pairing.
  CoefficientVector encode(const Matrix& h, double tol = kHermitianTol) const;

  // Dense-coefficient interface used by the integrators.
  RealVector to_dense(const CoefficientVector& c) const;
  CoefficientVector from_dense(const RealVector& v, double prune_tol = 0.0) const;
  Matrix decode_dense(const RealVector& v) const;
  RealVector encode_dense(const Matrix& h) const;

  int body_of(int index) const { return labels_[index].body(); }

 private:
  struct SparseOp {
    std::vector<std::tuple<int, int, Complex>> entries;  // (row, col, value)
  };

  int n_ = 0;
  int dim_ = 0;
  std::vector<BasisLabel> labels_;
  std::map<BasisLabel, int> index_;
  std::vector<SparseOp> ops_;  // normalized elements, sparse triplets
};

/// Coefficients c with [Λ_a, Λ_b] = i · Σ c_σ Λ_σ (real, exact to 1e-12).
/// Labels on disjoint sites commute (empty result).
CoefficientVector commutator_expand(const BasisLabel& a, const BasisLabel& b);

/// Bilinear extensions of the same bracket.
CoefficientVector bracket(const CoefficientVector& a, const BasisLabel& b);
CoefficientVector bracket(const CoefficientVector& a, const CoefficientVector& b);

struct ClosureReport {
  int achieved_rank = 0;
  int target_rank = 0;
  int depth_used = 0;
};

/// Iteratively closes the real span of the <= generator_max_body generators
/// under the Lie bracket until the rank stabilizes (pivoted orthogonalization,
/// threshold 1e-9). OpenMP-parallel candidate generation.
ClosureReport bracket_closure(int n, int generator_max_body = 2);

/// Serial reference implementation (modified Gram-Schmidt); kept for testing
/// and benchmarked against the parallel kernel.
ClosureReport bracket_closure_serial(int n, int generator_max_body = 2);

}  // namespace qg3
