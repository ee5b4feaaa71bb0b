#include "mixdisc/structure.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace mixdisc {

namespace {

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return out;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void require_psd_members(const MatrixTuple& t, const Tolerances& tol) {
  if (t.dim() > kSubsetScanLimit) {
    throw DimensionTooLarge("subset scan accepts n <= " + std::to_string(kSubsetScanLimit));
  }
  for (int i = 0; i < t.dim(); ++i) {
    const auto e = eig_hermitian(t[i]);
    const double top = std::max(1.0, std::abs(e.values(0)));
    if (e.values(e.values.size() - 1) < -tol.psd_tol * top) {
      throw PreconditionViolated("member " + std::to_string(i) + " is not positive semidefinite");
    }
  }
}

int subset_rank(const MatrixTuple& t, const std::vector<int>& s, const Tolerances& tol) {
  CMatrix sum = CMatrix::Zero(t.dim(), t.dim());
  for (int i : s) sum += t[i].matrix();
  return rank_psd(HermitianMatrix(sum), tol);
}

/// First subset (by size from 1 to max_size, then lexicographic) for which
/// `bad(rank, size)` is true. Each size level is scanned in parallel; the
/// lowest-ordered hit wins.
RankCondition scan(const MatrixTuple& t, int max_size, const Tolerances& tol,
                   const std::function<bool(int, int)>& bad) {
  const int n = t.dim();
  for (int k = 1; k <= max_size; ++k) {
    const auto subsets = combinations(n, k);
    const auto count = static_cast<long>(subsets.size());
    long first = count;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first)
    for (long s = 0; s < count; ++s) {
      if (s >= first) continue;
      if (bad(subset_rank(t, subsets[static_cast<std::size_t>(s)], tol), k)) first = std::min(first, s);
    }
    if (first < count) return {false, subsets[static_cast<std::size_t>(first)]};
  }
  return {true, {}};
}

struct Piece {
  std::vector<int> indices;
  CMatrix basis;
  MatrixTuple tuple;
};

/// Restriction of the given slots to the columns of `basis`.
MatrixTuple restrict(const MatrixTuple& t, const std::vector<int>& slots, const CMatrix& basis) {
  std::vector<HermitianMatrix> mats;
  for (int i : slots) mats.emplace_back(CMatrix(basis.adjoint() * t[i].matrix() * basis));
  return MatrixTuple(std::move(mats));
}

void split(const Piece& piece, const Tolerances& tol, std::vector<Piece>& out) {
  const MatrixTuple& t = piece.tuple;
  const int m = t.dim();
  if (m == 1) {
    out.push_back(piece);
    return;
  }
  const RankCondition r = scan(t, m - 1, tol, [](int rank, int k) { return rank <= k; });
  if (r.holds) {
    out.push_back(piece);
    return;
  }
  const std::vector<int>& s = r.witness;
  std::vector<int> rest;
  for (int i = 0; i < m; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) rest.push_back(i);

  // the subset sum is a rank-|S| projector; its image carries S, the
  // complement carries the other slots
  CMatrix proj = CMatrix::Zero(m, m);
  for (int i : s) proj += t[i].matrix();
  const auto e = eig_hermitian(HermitianMatrix(proj));
  const int k = static_cast<int>(s.size());
  const CMatrix image = e.vectors.leftCols(k);
  const CMatrix complement = e.vectors.rightCols(m - k);

  auto child = [&](const std::vector<int>& slots, const CMatrix& local) {
    Piece p;
    for (int i : slots) p.indices.push_back(piece.indices[static_cast<std::size_t>(i)]);
    p.basis = piece.basis * local;
    p.tuple = restrict(t, slots, local);
    return p;
  };
  split(child(s, image), tol, out);
  split(child(rest, complement), tol, out);
}

}  // namespace

RankCondition is_indecomposable(const MatrixTuple& t, const Tolerances& tol) {
  require_psd_members(t, tol);
  return scan(t, t.dim() - 1, tol, [](int rank, int k) { return rank <= k; });
}

RankCondition positivity_rank_test(const MatrixTuple& t, const Tolerances& tol) {
  require_psd_members(t, tol);
  return scan(t, t.dim(), tol, [](int rank, int k) { return rank < k; });
}

DecompositionResult decompose(const MatrixTuple& t, const Tolerances& tol) {
  if (t.dim() > kSubsetScanLimit) {
    throw DimensionTooLarge("decompose accepts n <= " + std::to_string(kSubsetScanLimit));
  }
  const DsTupleReport ds = check_doubly_stochastic(t, tol);
  if (!ds.is_doubly_stochastic) {
    throw NotDoublyStochastic("psd " + num(ds.psd_violation) + ", trace " +
                              num(ds.trace_violation) + ", sum " + num(ds.sum_violation));
  }
  const int n = t.dim();
  Piece root;
  for (int i = 0; i < n; ++i) root.indices.push_back(i);
  root.basis = CMatrix::Identity(n, n);
  root.tuple = t;

  std::vector<Piece> pieces;
  split(root, tol, pieces);
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.indices.front() < b.indices.front(); });

  DecompositionResult result;
  result.value = eval_polarized(t);
  double product = 1.0;
  for (auto& p : pieces) {
    // restore ascending index order inside the part
    std::vector<std::size_t> order(p.indices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.indices[a] < p.indices[b]; });
    DecompositionPart part;
    std::vector<HermitianMatrix> mats;
    for (std::size_t i : order) {
      part.indices.push_back(p.indices[i]);
      mats.push_back(p.tuple[static_cast<int>(i)]);
    }
    part.basis = p.basis;
    part.tuple = MatrixTuple(std::move(mats));
    product *= eval_polarized(part.tuple);
    result.parts.push_back(std::move(part));
  }
  result.product_check = std::abs(result.value - product);
  if (result.product_check > 1e-8 * (1.0 + std::abs(result.value))) {
    throw DecompositionInconsistent("D = " + num(result.value) + " but product of parts = " +
                                    num(product));
  }
  return result;
}

RMatrix m_matrix(const MatrixTuple& t, const CMatrix& w) {
  const int n = t.dim();
  if (w.rows() != n || w.cols() != n) throw DimensionMismatch("W must be n x n");
  const double defect = unitarity_defect(w);
  if (defect > 1e-9) throw NotUnitary("unitarity defect " + num(defect));
  RMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    const CMatrix aw = t[j].matrix() * w;
    for (int i = 0; i < n; ++i) m(i, j) = w.col(i).dot(aw.col(i)).real();
  }
  return m;
}

namespace {

/// Kuhn's augmenting-path matching on the support with one row and one column
/// optionally removed; returns the matching size.
int matching_size(const std::vector<std::vector<int>>& adj, int n, int skip_row, int skip_col) {
  std::vector<int> match_col(static_cast<std::size_t>(n), -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int r) {
    for (int c : adj[static_cast<std::size_t>(r)]) {
      if (c == skip_col || seen[static_cast<std::size_t>(c)]) continue;
      seen[static_cast<std::size_t>(c)] = 1;
      const int other = match_col[static_cast<std::size_t>(c)];
      if (other < 0 || augment(other)) {
        match_col[static_cast<std::size_t>(c)] = r;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int r = 0; r < n; ++r) {
    if (r == skip_row) continue;
    seen.assign(static_cast<std::size_t>(n), 0);
    if (augment(r)) ++size;
  }
  return size;
}

}  // namespace

bool is_fully_indecomposable(const RMatrix& m, double threshold) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DimensionMismatch("square matrix required");
  if (n == 0) return false;
  if (n == 1) return m(0, 0) > threshold;
  // fully indecomposable iff every (i, j) minor has a perfect matching on the
  // support (Frobenius-Koenig)
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m(i, j) > threshold) adj[static_cast<std::size_t>(i)].push_back(j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (matching_size(adj, n, i, j) < n - 1) return false;
  return true;
}

}  // namespace mixdisc
