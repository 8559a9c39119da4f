#include "qg3/basis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qg3 {

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& u) {
  Matrix g = u.adjoint() * u;
  g -= Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Labels

void BasisLabel::validate() const {
  if (n < 1) throw std::invalid_argument("BasisLabel: n must be >= 1");
  if (factors.empty() || static_cast<int>(factors.size()) > n)
    throw std::invalid_argument("BasisLabel: body weight must be in 1..n");
  int prev = 0;
  for (const auto& [site, gm] : factors) {
    if (site <= prev || site > n)
      throw std::invalid_argument("BasisLabel: sites must be strictly increasing in 1..n");
    if (gm < 1 || gm > 8)
      throw std::invalid_argument("BasisLabel: Gell-Mann index must be in 1..8");
    prev = site;
  }
}

bool BasisLabel::operator<(const BasisLabel& o) const {
  if (n != o.n) return n < o.n;
  if (factors.size() != o.factors.size()) return factors.size() < o.factors.size();
  for (size_t i = 0; i < factors.size(); ++i)
    if (factors[i].first != o.factors[i].first) return factors[i].first < o.factors[i].first;
  for (size_t i = 0; i < factors.size(); ++i)
    if (factors[i].second != o.factors[i].second) return factors[i].second < o.factors[i].second;
  return false;
}

std::string BasisLabel::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) os << ".";
    os << "l" << factors[i].second << "@" << factors[i].first;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Coefficient vectors

double CoefficientVector::coeff(const BasisLabel& l) const {
  auto it = terms.find(l);
  return it == terms.end() ? 0.0 : it->second;
}

void CoefficientVector::add(const BasisLabel& l, double v) {
  if (v == 0.0) return;
  auto [it, inserted] = terms.try_emplace(l, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0.0) terms.erase(it);
  }
}

void CoefficientVector::prune(double tol) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) <= tol)
      it = terms.erase(it);
    else
      ++it;
  }
}

CoefficientVector& CoefficientVector::operator+=(const CoefficientVector& o) {
  for (const auto& [l, v] : o.terms) add(l, v);
  return *this;
}

CoefficientVector& CoefficientVector::operator-=(const CoefficientVector& o) {
  for (const auto& [l, v] : o.terms) add(l, -v);
  return *this;
}

CoefficientVector& CoefficientVector::operator*=(double a) {
  if (a == 0.0) {
    terms.clear();
    return *this;
  }
  for (auto& [l, v] : terms) v *= a;
  return *this;
}

double CoefficientVector::norm2() const {
  double s = 0.0;
  for (const auto& [l, v] : terms) s += v * v;
  return std::sqrt(s);
}

int CoefficientVector::max_body() const {
  int m = 0;
  for (const auto& [l, v] : terms) m = std::max(m, l.body());
  return m;
}

CoefficientVector CoefficientVector::body_filter(int lo, int hi) const {
  CoefficientVector out(n);
  for (const auto& [l, v] : terms)
    if (l.body() >= lo && l.body() <= hi) out.terms.emplace(l, v);
  return out;
}

CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b) { return a += b; }
CoefficientVector operator-(CoefficientVector a, const CoefficientVector& b) { return a -= b; }
CoefficientVector operator*(double a, CoefficientVector c) { return c *= a; }

// ---------------------------------------------------------------------------
// Gell-Mann matrices

Matrix gell_mann(int k) {
  if (k < 1 || k > 8) throw std::invalid_argument("gell_mann: index must be in 1..8");
  Matrix m = Matrix::Zero(3, 3);
  const Complex i(0.0, 1.0);
  switch (k) {
    case 1: m(0, 1) = 1; m(1, 0) = 1; break;
    case 2: m(0, 1) = -i; m(1, 0) = i; break;
    case 3: m(0, 0) = 1; m(1, 1) = -1; break;
    case 4: m(0, 2) = 1; m(2, 0) = 1; break;
    case 5: m(0, 2) = -i; m(2, 0) = i; break;
    case 6: m(1, 2) = 1; m(2, 1) = 1; break;
    case 7: m(1, 2) = -i; m(2, 1) = i; break;
    case 8: {
      const double r = 1.0 / std::sqrt(3.0);
      m(0, 0) = r; m(1, 1) = r; m(2, 2) = -2.0 * r;
      break;
    }
  }
  return m;
}

Matrix gell_mann_unit_norm(int k) {
  Matrix m = gell_mann(k);
  if (k == 8) m *= std::sqrt(3.0) / 2.0;
  return m;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Matrix build_operator(const BasisLabel& label) {
  label.validate();
  Matrix out = Matrix::Identity(1, 1);
  size_t next = 0;
  for (int site = 1; site <= label.n; ++site) {
    if (next < label.factors.size() && label.factors[next].first == site) {
      out = kron(out, gell_mann(label.factors[next].second));
      ++next;
    } else {
      out = kron(out, Matrix::Identity(3, 3));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

void site_combinations(int n, int s, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(s);
  // iterative lexicographic combinations of {1..n} choose s
  for (int i = 0; i < s; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = s - 1;
    while (i >= 0 && cur[i] == n - (s - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

std::vector<BasisLabel> enumerate_basis(int n, int max_body) {
  if (n < 1) throw std::invalid_argument("enumerate_basis: n must be >= 1");
  const int cap = (max_body <= 0) ? n : std::min(max_body, n);
  std::vector<BasisLabel> out;
  for (int s = 1; s <= cap; ++s) {
    std::vector<std::vector<int>> combos;
    site_combinations(n, s, combos);
    for (const auto& sites : combos) {
      std::vector<int> gm(s, 1);
      while (true) {
        BasisLabel l;
        l.n = n;
        l.factors.reserve(s);
        for (int i = 0; i < s; ++i) l.factors.emplace_back(sites[i], gm[i]);
        out.push_back(std::move(l));
        int i = s - 1;
        while (i >= 0 && gm[i] == 8) { gm[i] = 1; --i; }
        if (i < 0) break;
        ++gm[i];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basis table

double Basis::scale(int body) {
  return std::pow(1.5, 0.5 * (body - 1));
}

Basis::Basis(int n) : n_(n), dim_(pow3(n)) {
  if (n < 1) throw std::invalid_argument("Basis: n must be >= 1");
  labels_ = enumerate_basis(n);
  ops_.resize(labels_.size());
  for (size_t idx = 0; idx < labels_.size(); ++idx) {
    index_.emplace(labels_[idx], static_cast<int>(idx));
    // sparse per-site Kronecker expansion
    const BasisLabel& l = labels_[idx];
    std::vector<std::tuple<int, int, Complex>> cur = {{0, 0, Complex(scale(l.body()), 0.0)}};
    size_t next = 0;
    for (int site = 1; site <= n; ++site) {
      std::vector<std::tuple<int, int, Complex>> grown;
      if (next < l.factors.size() && l.factors[next].first == site) {
        Matrix g = gell_mann(l.factors[next].second);
        ++next;
        for (const auto& [r, c, v] : cur)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              if (g(i, j) != Complex(0.0, 0.0))
                grown.emplace_back(r * 3 + i, c * 3 + j, v * g(i, j));
      } else {
        for (const auto& [r, c, v] : cur)
          for (int i = 0; i < 3; ++i) grown.emplace_back(r * 3 + i, c * 3 + i, v);
      }
      cur = std::move(grown);
    }
    ops_[idx].entries = std::move(cur);
  }
}

const Basis& Basis::get(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Basis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Basis>(n)).first;
  return *it->second;
}

int Basis::index_of(const BasisLabel& l) const {
  auto it = index_.find(l);
  return it == index_.end() ? -1 : it->second;
}

Matrix Basis::element(int index) const {
  Matrix m = Matrix::Zero(dim_, dim_);
  for (const auto& [r, c, v] : ops_[index].entries) m(r, c) += v;
  return m;
}

Matrix Basis::decode(const CoefficientVector& c) const {
  if (c.n != n_) throw std::invalid_argument("decode: site count mismatch");
  Matrix m = Matrix::Zero(dim_, dim_);
  for (const auto& [l, v] : c.terms) {
    int idx = index_of(l);
    if (idx < 0) throw std::invalid_argument("decode: unknown label " + l.str());
    for (const auto& [r, col, e] : ops_[idx].entries) m(r, col) += v * e;
  }
  return m;
}

CoefficientVector Basis::encode(const Matrix& h, double tol) const {
  if (h.rows() != dim_ || h.cols() != dim_)
    throw std::invalid_argument("encode: operator dimension mismatch");
  const double scale_ref = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double herm = hermiticity_defect(h);
  if (herm > tol * scale_ref)
    throw validation_error("encode: operator is not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr = std::abs(h.trace());
  if (tr > tol * scale_ref * dim_)
    throw validation_error("encode: operator is not traceless (|trace| " + std::to_string(tr) + ")");
  RealVector v = encode_dense(h);
  return from_dense(v, kCoeffPruneTol);
}

RealVector Basis::to_dense(const CoefficientVector& c) const {
  if (c.n != n_) throw std::invalid_argument("to_dense: site count mismatch");
  RealVector v = RealVector::Zero(size());
  for (const auto& [l, x] : c.terms) {
    int idx = index_of(l);
    if (idx < 0) throw std::invalid_argument("to_dense: unknown label " + l.str());
    v[idx] = x;
  }
  return v;
}

CoefficientVector Basis::from_dense(const RealVector& v, double prune_tol) const {
  if (v.size() != size()) throw std::invalid_argument("from_dense: length mismatch");
  CoefficientVector c(n_);
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > prune_tol) c.terms.emplace(labels_[i], v[i]);
  return c;
}

Matrix Basis::decode_dense(const RealVector& v) const {
  Matrix m = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    for (const auto& [r, c, e] : ops_[i].entries) m(r, c) += v[i] * e;
  }
  return m;
}

RealVector Basis::encode_dense(const Matrix& h) const {
  const double norm = 1.0 / (2.0 * pow3(n_ - 1));
  RealVector v(size());
  for (int i = 0; i < size(); ++i) {
    // tr(Λ H) over the sparse triplets of Λ
    Complex acc(0.0, 0.0);
    for (const auto& [r, c, e] : ops_[i].entries) acc += e * h(c, r);
    v[i] = acc.real() * norm;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Structure constants and bracket expansion

namespace {

// Product expansion lambda_a lambda_b = c0 I + sum_k c[k] lambda_k,
// with c0 = tr(lambda_a lambda_b)/3 and c[k] = tr(lambda_a lambda_b lambda_k)/2
// (the basis satisfies tr(lambda_a lambda_b) = 2 delta_ab).
struct ProductTable {
  Complex c0[9][9];
  Complex c[9][9][9];

  ProductTable() {
    Matrix g[9];
    for (int k = 1; k <= 8; ++k) g[k] = gell_mann(k);
    for (int a = 1; a <= 8; ++a)
      for (int b = 1; b <= 8; ++b) {
        Matrix prod = g[a] * g[b];
        c0[a][b] = prod.trace() / 3.0;
        for (int k = 1; k <= 8; ++k) {
          Complex v = (prod * g[k]).trace() / 2.0;
          if (std::abs(v) < 1e-15) v = Complex(0.0, 0.0);
          c[a][b][k] = v;
        }
      }
  }
};

const ProductTable& product_table() {
  static const ProductTable table;
  return table;
}

struct SlotBoth { int site; int a; int b; };

// One addend of an expanded ordered product: complex weight and the chosen
// gm index per "both" slot (0 = identity branch).
struct Partial {
  Complex w;
  std::vector<int> choice;
};

void expand_choices(const std::vector<SlotBoth>& slots, bool reversed, std::vector<Partial>& out) {
  const ProductTable& tab = product_table();
  out.clear();
  out.push_back({Complex(1.0, 0.0), {}});
  for (const auto& slot : slots) {
    const int a = reversed ? slot.b : slot.a;
    const int b = reversed ? slot.a : slot.b;
    std::vector<Partial> grown;
    grown.reserve(out.size() * 4);
    for (const auto& p : out) {
      if (tab.c0[a][b] != Complex(0.0, 0.0)) {
        Partial q = p;
        q.w *= tab.c0[a][b];
        q.choice.push_back(0);
        grown.push_back(std::move(q));
      }
      for (int k = 1; k <= 8; ++k) {
        if (tab.c[a][b][k] == Complex(0.0, 0.0)) continue;
        Partial q = p;
        q.w *= tab.c[a][b][k];
        q.choice.push_back(k);
        grown.push_back(std::move(q));
      }
    }
    out = std::move(grown);
  }
}

}  // namespace

CoefficientVector commutator_expand(const BasisLabel& a, const BasisLabel& b) {
  if (a.n != b.n) throw std::invalid_argument("commutator_expand: site count mismatch");
  a.validate();
  b.validate();
  CoefficientVector out(a.n);

  // Fixed factors (single-operand sites) and shared sites.
  std::vector<std::pair<int, int>> fixed;
  std::vector<SlotBoth> both;
  size_t ia = 0, ib = 0;
  while (ia < a.factors.size() || ib < b.factors.size()) {
    if (ib == b.factors.size() ||
        (ia < a.factors.size() && a.factors[ia].first < b.factors[ib].first)) {
      fixed.push_back(a.factors[ia]);
      ++ia;
    } else if (ia == a.factors.size() || b.factors[ib].first < a.factors[ia].first) {
      fixed.push_back(b.factors[ib]);
      ++ib;
    } else {
      both.push_back({a.factors[ia].first, a.factors[ia].second, b.factors[ib].second});
      ++ia;
      ++ib;
    }
  }
  if (both.empty()) return out;  // disjoint supports commute

  std::vector<Partial> fwd, rev;
  expand_choices(both, false, fwd);
  expand_choices(both, true, rev);

  // Collect weight differences keyed by the choice tuple.
  std::map<std::vector<int>, Complex> diff;
  for (const auto& p : fwd) diff[p.choice] += p.w;
  for (const auto& p : rev) diff[p.choice] -= p.w;

  const double sa = Basis::scale(a.body());
  const double sb = Basis::scale(b.body());
  for (const auto& [choice, w] : diff) {
    if (std::abs(w) <= kCoeffPruneTol) continue;
    std::vector<std::pair<int, int>> factors = fixed;
    for (size_t i = 0; i < choice.size(); ++i)
      if (choice[i] != 0) factors.emplace_back(both[i].site, choice[i]);
    if (factors.empty()) continue;  // identity component cancels exactly
    std::sort(factors.begin(), factors.end());
    BasisLabel l(a.n, std::move(factors));
    // [Λ_a, Λ_b] = i c Λ_l with Hermitian operands: the expansion weight is
    // purely imaginary; rescale raw products to the normalized elements.
    const double resc = sa * sb / Basis::scale(l.body());
    const Complex scaled = w * resc;
    out.add(l, scaled.imag());
  }
  out.prune(kCoeffPruneTol);
  return out;
}

CoefficientVector bracket(const CoefficientVector& a, const BasisLabel& b) {
  CoefficientVector out(a.n);
  for (const auto& [l, v] : a.terms) {
    CoefficientVector part = commutator_expand(l, b);
    part *= v;
    out += part;
  }
  out.prune(kCoeffPruneTol);
  return out;
}

CoefficientVector bracket(const CoefficientVector& a, const CoefficientVector& b) {
  CoefficientVector out(a.n);
  for (const auto& [l, v] : b.terms) {
    CoefficientVector part = bracket(a, l);
    part *= v;
    out += part;
  }
  out.prune(kCoeffPruneTol);
  return out;
}

// ---------------------------------------------------------------------------
// Bracket closure

namespace {

constexpr double kClosureThreshold = 1e-9;

// Batched span builder. Per batch, the candidates are projected against the
// basis snapshot by blocked matrix products (column strips split across
// threads), then fixed up sequentially against the rows accepted within the
// batch. Acceptance decisions follow the candidate order, so the result does
// not depend on the thread count.
ClosureReport run_closure(int n, int generator_max_body, bool parallel) {
  const Basis& basis = Basis::get(n);
  const int target = basis.size();
  const std::vector<BasisLabel> generators = enumerate_basis(n, generator_max_body);

  Eigen::MatrixXd q(target, target);  // accepted orthonormal columns [0, rank)
  int rank = 0;
  std::vector<CoefficientVector> frontier;
  frontier.reserve(generators.size());
  for (const auto& g : generators) {
    q.col(rank).setZero();
    q(basis.index_of(g), rank) = 1.0;  // generators are orthonormal already
    ++rank;
    CoefficientVector c(n);
    c.add(g, 1.0);
    frontier.push_back(std::move(c));
  }

  ClosureReport report{rank, target, 0};
  int depth = 0;
  while (rank < target && !frontier.empty()) {
    ++depth;
    std::vector<CoefficientVector> next;
    const std::size_t total = frontier.size() * generators.size();
    const std::size_t batch_size = 256;
    bool full = false;
    for (std::size_t start = 0; start < total && !full; start += batch_size) {
      const std::size_t stop = std::min(start + batch_size, total);
      const int m = static_cast<int>(stop - start);
      const int snapshot = rank;
      std::vector<CoefficientVector> cand(m);
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(target, m);
      Eigen::VectorXd orig(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
#endif
      for (int c = 0; c < m; ++c) {
        const std::size_t idx = start + static_cast<std::size_t>(c);
        cand[c] = bracket(frontier[idx / generators.size()], generators[idx % generators.size()]);
        for (const auto& [l, x] : cand[c].terms) v(basis.index_of(l), c) = x;
        orig(c) = v.col(c).norm();
      }
      {
        // two classical Gram-Schmidt passes against the snapshot, in column
        // strips; each strip is one thread's contiguous block product
        const auto qs = q.leftCols(snapshot);
#ifdef _OPENMP
#pragma omp parallel if (parallel)
        {
          const int threads = omp_get_num_threads();
          const int tid = omp_get_thread_num();
          const int per = (m + threads - 1) / threads;
          const int lo = std::min(tid * per, m);
          const int hi = std::min(lo + per, m);
          if (hi > lo) {
            auto strip = v.middleCols(lo, hi - lo);
            strip -= qs * (qs.transpose() * strip).eval();
            strip -= qs * (qs.transpose() * strip).eval();
          }
        }
#else
        v -= qs * (qs.transpose() * v).eval();
        v -= qs * (qs.transpose() * v).eval();
#endif
      }
      (void)parallel;
      for (int c = 0; c < m && !full; ++c) {
        if (orig(c) <= 0.0) continue;
        // fix up against rows accepted within this batch
        if (rank > snapshot) {
          const auto qb = q.middleCols(snapshot, rank - snapshot);
          v.col(c) -= qb * (qb.transpose() * v.col(c)).eval();
          v.col(c) -= qb * (qb.transpose() * v.col(c)).eval();
        }
        const double res = v.col(c).norm();
        if (res <= kClosureThreshold * orig(c)) continue;
        q.col(rank) = v.col(c) / res;
        ++rank;
        report.achieved_rank = rank;
        report.depth_used = depth;
        next.push_back(std::move(cand[c]));
        if (rank >= target) full = true;
      }
    }
    if (next.empty()) break;  // stabilized below full rank
    frontier = std::move(next);
  }
  report.achieved_rank = rank;
  return report;
}

ClosureReport run_closure_serial(int n, int generator_max_body) {
  // Straight modified Gram-Schmidt, no batching.
  const Basis& basis = Basis::get(n);
  const int target = basis.size();
  const std::vector<BasisLabel> generators = enumerate_basis(n, generator_max_body);

  std::vector<std::vector<double>> rows;
  auto try_add = [&](std::vector<double> v) {
    double orig = 0.0;
    for (double x : v) orig += x * x;
    orig = std::sqrt(orig);
    if (orig <= 0.0) return false;
    for (const auto& r : rows) {
      double d = 0.0;
      for (size_t j = 0; j < v.size(); ++j) d += r[j] * v[j];
      for (size_t j = 0; j < v.size(); ++j) v[j] -= d * r[j];
    }
    double res = 0.0;
    for (double x : v) res += x * x;
    res = std::sqrt(res);
    if (res <= kClosureThreshold * orig) return false;
    for (double& x : v) x /= res;
    rows.push_back(std::move(v));
    return true;
  };

  std::vector<CoefficientVector> frontier;
  for (const auto& g : generators) {
    std::vector<double> unit(target, 0.0);
    unit[basis.index_of(g)] = 1.0;
    try_add(std::move(unit));
    CoefficientVector c(n);
    c.add(g, 1.0);
    frontier.push_back(std::move(c));
  }

  ClosureReport report{static_cast<int>(rows.size()), target, 0};
  int depth = 0;
  while (report.achieved_rank < target && !frontier.empty()) {
    ++depth;
    std::vector<CoefficientVector> next;
    for (const auto& f : frontier) {
      for (const auto& g : generators) {
        CoefficientVector c = bracket(f, g);
        if (c.empty()) continue;
        std::vector<double> dense(target, 0.0);
        for (const auto& [l, v] : c.terms) dense[basis.index_of(l)] = v;
        if (try_add(std::move(dense))) {
          report.achieved_rank = static_cast<int>(rows.size());
          report.depth_used = depth;
          next.push_back(std::move(c));
          if (report.achieved_rank >= target) break;
        }
      }
      if (report.achieved_rank >= target) break;
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  report.achieved_rank = static_cast<int>(rows.size());
  return report;
}

}  // namespace

ClosureReport bracket_closure(int n, int generator_max_body) {
  return run_closure(n, generator_max_body, true);
}

ClosureReport bracket_closure_serial(int n, int generator_max_body) {
  return run_closure_serial(n, generator_max_body);
}

}  // namespace qg3
