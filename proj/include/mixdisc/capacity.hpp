#pragma once

// Capacity Cap(A) = inf { det(sum x_i A_i) : x_i > 0, prod x_i = 1 } and
// operator scaling of a tuple to doubly stochastic form.

#include <vector>

#include "mixdisc/discriminant.hpp"

namespace mixdisc {

struct CapacityOptions {
  Tolerances tol = kDefaultTolerances;
  long max_iter = 10000;
  bool throw_on_nonconvergence = false;
};

struct CapacityResult {
  double value = 0.0;
  RVector minimizer_x;  // prod = 1
  double gradient_norm = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Projected gradient descent on f(y) = log det(sum e^{y_i} A_i) over
/// sum y_i = 0 with Barzilai-Borwein trial steps and Armijo backtracking.
/// Throws SingularPencil if the pencil determinant drops below 1e-300.
CapacityResult capacity(const MatrixTuple& t, const CapacityOptions& options = {});

/// log det of a Hermitian positive definite matrix by Cholesky; throws
/// SingularPencil when the matrix is not numerically positive definite or
/// its determinant is below 1e-300.
double log_det_pd(const CMatrix& m);

struct ScalingOptions {
  Tolerances tol = kDefaultTolerances;
  long max_iter = 10000;
  bool require_indecomposable = true;
  bool throw_on_nonconvergence = true;
};

struct ScalingResult {
  MatrixTuple scaled;          // trace_scalars_i * X A_i X^*
  RVector alpha;               // prod = 1
  CMatrix transform_x;         // accumulated left factor X
  RVector trace_scalars;       // accumulated per-slot scalars c_i
  HermitianMatrix s;           // positive definite S with B_i = alpha_i S A_i S
  MatrixTuple canonical;       // B_i = alpha_i S A_i S
  double ds_defect = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> defect_history;  // ds_defect after each iteration
};

/// Alternating normalization: A_i <- L A_i L with L = (sum A_i)^{-1/2}, then
/// A_i <- A_i / tr A_i, until trace plus sum violation falls below ds_tol.
ScalingResult scale_to_doubly_stochastic(const MatrixTuple& t, const ScalingOptions& options = {});

/// Trace violation plus sum violation.
double ds_defect(const MatrixTuple& t);

/// 1 / (|det X|^2 prod c_i) for a converged scaling, which equals det(S)^{-2}.
double capacity_via_scaling(const ScalingResult& r);
double capacity_via_scaling(const MatrixTuple& t, const ScalingOptions& options = {});

struct CapacityBoundReport {
  double capacity = 0.0;
  double discriminant = 0.0;
  double ratio = 0.0;
  double upper = 0.0;  // n^n / n!
  bool within_bounds = false;
};

/// Cap(t) / D(t) against [1, n^n / n!] with 1e-6 slack on both ends.
CapacityBoundReport capacity_bound_report(const MatrixTuple& t, const CapacityOptions& options = {});

}  // namespace mixdisc
