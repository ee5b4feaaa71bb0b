#pragma once

// Block matrices rho = (A_{i,j}) of n x n blocks and the 4-dimensional
// Pascal determinant QP(rho), block doubly stochasticity, and samplers for
// separable and general block doubly stochastic matrices.

#include <cstdint>
#include <utility>
#include <vector>

#include "mixdisc/discriminant.hpp"

namespace mixdisc {

/// n^2 x n^2 complex matrix viewed as an n x n grid of n x n blocks.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  /// Throws DimensionMismatch unless `full` is n^2 x n^2 for some n >= 1.
  explicit BlockMatrix(CMatrix full);
  /// blocks[i][j] = A_{i,j}
  static BlockMatrix from_blocks(const std::vector<std::vector<CMatrix>>& blocks);
  /// Block-diagonal with A_{i,i} = t[i].
  static BlockMatrix block_diagonal(const MatrixTuple& t);

  int n() const { return n_; }
  const CMatrix& full() const { return full_; }
  CMatrix block(int i, int j) const { return full_.block(i * n_, j * n_, n_, n_); }
  /// rho(i1, i2, i3, i4) = A_{i1,i3}(i2, i4)
  Complex tensor(int i1, int i2, int i3, int i4) const { return full_(i1 * n_ + i2, i3 * n_ + i4); }

 private:
  int n_ = 0;
  CMatrix full_;
};

/// sum_s sgn(s) D(A_{1,s(1)}, ..., A_{n,s(n)}), n <= 6.
double qp_block(const BlockMatrix& rho);

/// (1/n!) sum over four permutations of the product of tensor entries,
/// n <= 4.
double qp_tensor(const BlockMatrix& rho);

struct BlockDsReport {
  double hermitian_defect = 0.0;
  double psd_violation = 0.0;    // max(0, -lambda_min(rho))
  double sum_violation = 0.0;    // |sum_i A_{i,i} - I|_max
  double trace_violation = 0.0;  // |{tr A_{i,j}} - I|_max
  bool is_block_ds = false;
};

BlockDsReport check_block_ds(const BlockMatrix& rho, const Tolerances& tol = kDefaultTolerances);

struct SeparableSpec {
  std::vector<std::pair<HermitianMatrix, HermitianMatrix>> terms;  // (P_k, Q_k)
};

/// sum_k P_k (x) Q_k; throws TermNotPsd if a factor is not PSD.
BlockMatrix assemble_separable(const SeparableSpec& spec, const Tolerances& tol = kDefaultTolerances);

struct BlockScaling {
  BlockMatrix rho;
  double defect = 0.0;  // sum_violation + trace_violation
  long iterations = 0;
  bool converged = false;
};

/// Alternates rho <- (I (x) S) rho (I (x) S)^* with S = (sum_i A_ii)^{-1/2}
/// and rho <- (R (x) I) rho (R (x) I)^* with R = {tr A_ij}^{-1/2}. Both
/// steps map P (x) Q to (RPR^*) (x) (SQS^*), so separability is preserved.
BlockScaling scale_block_ds(const BlockMatrix& rho, const Tolerances& tol = kDefaultTolerances,
                            long max_iter = 10000);

/// Separable block doubly stochastic sample: k <= n^2 Wishart product terms,
/// then scale_block_ds. Non-converging draws are redrawn; throws
/// SamplerExhausted after 100.
BlockMatrix random_separable_ds(int n, Rng& rng);

/// General (possibly entangled) block doubly stochastic sample from G G^*
/// with G of random rank between n and n^2.
BlockMatrix random_block_ds(int n, Rng& rng);

struct QpExperiment {
  int n = 0;
  long draws = 0;
  double min_qp = 0.0;
  double bound = 0.0;  // n! / n^n
  bool below_bound = false;  // min_qp < bound - 1e-6
};

/// Minimum of QP over separable block doubly stochastic samples.
QpExperiment separable_qp_experiment(int n, long draws, std::uint64_t seed);

}  // namespace mixdisc
