#pragma once

// Rank conditions on subset sums, splitting of doubly stochastic tuples into
// indecomposable parts, and the quadratic-form matrices M(A, W).

#include <vector>

#include "mixdisc/discriminant.hpp"

namespace mixdisc {

/// Largest n accepted by the 2^n subset scans.
inline constexpr int kSubsetScanLimit = 16;

struct RankCondition {
  bool holds = false;
  std::vector<int> witness;  // violating subset (0-based, ascending) when !holds
};

/// rank(sum_{i in S} A_i) > |S| for every nonempty proper subset S.
/// Subsets are scanned by ascending size, then lexicographically; the witness
/// is the first violation in that order.
RankCondition is_indecomposable(const MatrixTuple& t, const Tolerances& tol = kDefaultTolerances);

/// rank(sum_{i in S} A_i) >= |S| for every nonempty subset S. For PSD tuples
/// this holds iff D(t) > 0.
RankCondition positivity_rank_test(const MatrixTuple& t, const Tolerances& tol = kDefaultTolerances);

struct DecompositionPart {
  std::vector<int> indices;  // C_s, 0-based ascending
  CMatrix basis;             // n x |C_s|, orthonormal columns
  MatrixTuple tuple;         // basis^* A_i basis for i in C_s
};

struct DecompositionResult {
  std::vector<DecompositionPart> parts;  // ordered by smallest index
  double value = 0.0;                    // D(t)
  double product_check = 0.0;            // |D(t) - prod_s D(part_s)|
};

/// Splits a doubly stochastic tuple into indecomposable parts on mutually
/// orthogonal subspaces.
DecompositionResult decompose(const MatrixTuple& t, const Tolerances& tol = kDefaultTolerances);

/// M(i, j) = <A_j w_i, w_i> with w_i the i-th column of W.
RMatrix m_matrix(const MatrixTuple& t, const CMatrix& w);

/// No k x (n-k) zero submatrix under any row and column permutation. Entries
/// at or below `threshold` count as zero.
bool is_fully_indecomposable(const RMatrix& m, double threshold);

}  // namespace mixdisc
