#pragma once

// Determinantal hyperbolic polynomials p(x) = det(sum x_i B_i) with respect to
// a direction e, their roots, tr_e, e-doubly stochastic vector tuples and the
// p-mixed value.

#include <cstdint>
#include <optional>
#include <vector>

#include "mixdisc/discriminant.hpp"

namespace mixdisc {

class HyperbolicPencil {
 public:
  HyperbolicPencil() = default;
  /// Throws DimensionMismatch on inconsistent sizes and NotPositiveDefinite
  /// unless sum e_i B_i is positive definite.
  HyperbolicPencil(std::vector<HermitianMatrix> b, RVector e, const Tolerances& tol = kDefaultTolerances);
  /// B_i = t[i], e = (1, ..., 1).
  static HyperbolicPencil from_tuple(const MatrixTuple& t, const Tolerances& tol = kDefaultTolerances);

  int m() const { return static_cast<int>(b_.size()); }
  int n() const { return b_.empty() ? 0 : b_.front().dim(); }
  const std::vector<HermitianMatrix>& matrices() const { return b_; }
  const RVector& e() const { return e_; }

  HermitianMatrix at(const RVector& x) const;  // sum x_i B_i
  double p(const RVector& x) const;
  double p_e() const { return p_e_; }
  /// (sum e_i B_i)^{-1/2}
  const HermitianMatrix& whitening() const { return whiten_; }

 private:
  std::vector<HermitianMatrix> b_;
  RVector e_;
  HermitianMatrix whiten_;
  double p_e_ = 0.0;
};

struct RootVector {
  RVector lambda;          // descending roots of t -> p(x - t e)
  double residual = 0.0;   // |p(e) prod lambda - p(x)| relative to the larger side
};

RootVector roots(const HyperbolicPencil& pencil, const RVector& x);
double trace_e(const HyperbolicPencil& pencil, const RVector& x);
bool is_e_nonnegative(const HyperbolicPencil& pencil, const RVector& x, double tol = kDefaultTolerances.psd_tol);

/// sum over subsets S of [n] of (-1)^{n-|S|} p(sum_{i in S} x_i); x.size() == n.
double mixed_value(const HyperbolicPencil& pencil, const std::vector<RVector>& x);

struct HdReport {
  double min_root = 0.0;          // min_i lambda_n(x_i)
  double trace_violation = 0.0;   // max_i |tr_e(x_i) - 1|
  double sum_violation = 0.0;     // |sum x_i - e|_max
  bool is_member = false;
};

HdReport check_hd_membership(const HyperbolicPencil& pencil, const std::vector<RVector>& x,
                             double tol = kDefaultTolerances.ds_tol);

/// Unit vectors e_1, ..., e_m.
std::vector<RVector> axis_vectors(int m);

struct HdSample {
  HyperbolicPencil pencil;
  std::vector<RVector> x;
  long rejections = 0;
};

/// Doubly stochastic tuple as the pencil (e = ones), axis vectors mixed by a
/// random convex combination of permutation matrices; redrawn while the
/// membership check fails, SamplerExhausted after 100.
HdSample random_hd_member(int n, Rng& rng);

struct HdExperiment {
  int n = 0;
  long draws = 0;
  long rejections = 0;
  double min_ratio = 0.0;  // min M_p(X) / p(e)
  double bound = 0.0;      // n! / n^n
  bool below_bound = false;  // min_ratio < bound - 1e-6
  std::optional<HdSample> worst;  // sample attaining min_ratio
};

HdExperiment hd_lower_bound_experiment(int n, long draws, std::uint64_t seed);

}  // namespace mixdisc
