#pragma once

// Repeated tuples A^(alpha) for integer weight vectors, the log-concavity
// inequalities for capacity and mixed discriminant over convex combinations
// of weight vectors, and the B = I + J permanent experiment.

#include <string>
#include <vector>

#include "mixdisc/capacity.hpp"
#include "mixdisc/discriminant.hpp"

namespace mixdisc {

/// Nonnegative integer vector whose entries sum to its length.
class WeightVector {
 public:
  WeightVector() = default;
  /// Throws InvalidWeight on negative entries or a wrong total.
  explicit WeightVector(std::vector<int> alpha);
  static WeightVector ones(int n);

  int dim() const { return static_cast<int>(alpha_.size()); }
  int operator[](int i) const { return alpha_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return alpha_; }
  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<int> alpha_;
};

/// target = sum_i weights_i * vectors_i with weights on the simplex.
struct ConvexCombination {
  std::vector<double> weights;
  std::vector<WeightVector> vectors;
  WeightVector target;

  /// Throws InvalidWeight unless weights are nonnegative, sum to one, and
  /// reproduce the target within 1e-12.
  void validate() const;
};

/// A_i repeated alpha_i times, in index order.
MatrixTuple expand_tuple(const MatrixTuple& t, const WeightVector& alpha);

/// Columns of c repeated alpha_j times.
RMatrix expand_columns(const RMatrix& c, const WeightVector& alpha);

/// D(A^(alpha))
double m_alpha(const MatrixTuple& t, const WeightVector& alpha);

struct LogConcavityCheck {
  double cap_slack = 0.0;  // log Cap^(a) - sum g_i log Cap^(a_i)
  double m_slack = 0.0;    // log M^(a) - sum g_i log M^(a_i) + log(n^n / n!)
  bool holds = false;      // both slacks >= -1e-6
  bool skipped = false;    // some capacity or mixed discriminant was zero
  std::string skip_reason;
};

LogConcavityCheck check_log_concavity(const MatrixTuple& t, const ConvexCombination& comb,
                               const CapacityOptions& options = {});

/// Uniform draw from the weight vectors of length n.
WeightVector random_weight(int n, Rng& rng);

/// target +- d_k pairs with random integer d_k summing to zero; at most
/// `pairs` pairs (fewer if the target admits no move).
ConvexCombination random_combination(int n, int pairs, Rng& rng);

/// (1,..,1) as the average of (2,0,1,..,1) and (0,2,1,..,1).
ConvexCombination classical_af_combination(int n);

struct AfExperiment {
  int n = 0;
  WeightVector alpha1;  // (2,0,2,0,...)
  WeightVector alpha2;  // (0,2,0,2,...)
  double per_e = 0.0;
  double per_alpha1 = 0.0;
  double per_alpha2 = 0.0;
  double ratio = 0.0;        // per_e / sqrt(per_alpha1 per_alpha2)
  double log_deficit = 0.0;  // -log ratio
};

/// B = I + cyclic shift (B(i, i+1 mod N) = 1), even N <= 20.
RMatrix af_matrix(int n);
AfExperiment af_lower_bound_experiment(int n);

}  // namespace mixdisc
