#pragma once

// Exponential-cost inner loops. Each kernel has a serial reference in
// `kernels::serial`, written as the literal formula in the most obvious
// enumeration order, and an OpenMP implementation in `kernels::parallel`
// used by the library. The parallel kernels split their index range into a
// fixed number of blocks independent of the thread count and reduce the
// block partials in block order, so their results are bit-identical for any
// OMP_NUM_THREADS.

#include <numeric>
#include <span>
#include <vector>

#include "mixdisc/core.hpp"

namespace mixdisc::kernels {

/// Visits every permutation of {0, ..., n-1} in Steinhaus-Johnson-Trotter
/// (adjacent transposition) order. `visit(perm, sign)` receives the current
/// permutation as a span and its sign as +1 / -1.
template <typename Visit>
void for_each_permutation(int n, Visit&& visit) {
  std::vector<int> perm(n), pos(n), dir(n, -1);
  std::iota(perm.begin(), perm.end(), 0);
  std::iota(pos.begin(), pos.end(), 0);
  int sign = 1;
  visit(std::span<const int>(perm), sign);
  if (n <= 1) return;
  while (true) {
    // largest mobile element
    int mobile = -1;
    for (int v = n - 1; v >= 0; --v) {
      const int p = pos[v];
      const int q = p + dir[v];
      if (q >= 0 && q < n && perm[q] < v) {
        mobile = v;
        break;
      }
    }
    if (mobile < 0) return;
    const int p = pos[mobile];
    const int q = p + dir[mobile];
    const int other = perm[q];
    std::swap(perm[p], perm[q]);
    pos[mobile] = q;
    pos[other] = p;
    sign = -sign;
    for (int v = mobile + 1; v < n; ++v) dir[v] = -dir[v];
    visit(std::span<const int>(perm), sign);
  }
}

namespace serial {

/// Sum over subsets S of (-1)^(n-|S|) det(sum_{i in S} A_i), subsets in
/// natural bitmask order, each partial sum rebuilt from scratch.
Complex mixed_discriminant_subsets(std::span<const CMatrix> mats);

/// Ryser's formula, subsets in natural bitmask order with row sums rebuilt
/// per subset.
Complex permanent_ryser(const CMatrix& c);

}  // namespace serial

namespace parallel {

/// Polarization about the base point -(A_1 + ... + A_n)/2:
///   D = 2^(1-n) * sum over sign vectors e with e_1 = +1 of
///       (e_1 ... e_n) det(e_1 A_1 + ... + e_n A_n).
/// Same multilinear coefficient as the subset formula with half the terms and
/// much smaller cancellation. Sign vectors are walked in Gray-code order
/// inside each block.
Complex mixed_discriminant_centered(std::span<const CMatrix> mats);

/// Ryser's formula with Gray-code row-sum updates inside each block.
Complex permanent_ryser(const CMatrix& c);

}  // namespace parallel

}  // namespace mixdisc::kernels
