#pragma once

// Mixed discriminant D(A_1, ..., A_n): the coefficient of t_1 t_2 ... t_n in
// det(t_1 A_1 + ... + t_n A_n). Five evaluators are provided. The polarized
// one is the production path; the other four are exact re-expressions kept as
// independent oracles behind hard dimension gates.

#include <span>
#include <string_view>
#include <vector>

#include "mixdisc/core.hpp"

namespace mixdisc {

/// Ordered n-tuple of n x n Hermitian matrices.
class MatrixTuple {
 public:
  MatrixTuple() = default;
  /// Throws DimensionMismatch unless every member is n x n with n = count.
  explicit MatrixTuple(std::vector<HermitianMatrix> mats);

  /// (I/n, ..., I/n)
  static MatrixTuple uniform(int n);
  /// Slot j is diag(column j of c).
  static MatrixTuple diagonal_from_columns(const RMatrix& c);
  /// Slot i is e_i e_i^*.
  static MatrixTuple diagonal_permutation(int n);

  int dim() const { return static_cast<int>(mats_.size()); }
  const HermitianMatrix& operator[](int i) const { return mats_[static_cast<std::size_t>(i)]; }
  const std::vector<HermitianMatrix>& members() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  MatrixTuple with_slot(int i, HermitianMatrix x) const;
  HermitianMatrix sum() const;
  std::vector<CMatrix> dense() const;

 private:
  std::vector<HermitianMatrix> mats_;
};

enum class Algorithm { Polarized, SigmaDet, DoublePerm, SignedPermanent, Tensor };

/// Largest n each evaluator accepts.
int dimension_gate(Algorithm algorithm);
std::string_view algorithm_name(Algorithm algorithm);
/// Inverse of algorithm_name; throws PreconditionViolated on unknown names.
Algorithm parse_algorithm(std::string_view name);

/// Sum over permutations s of det(A_s), column i of A_s taken from A_{s(i)}.
double eval_sigma_det(const MatrixTuple& t);
/// Double sum over (s, u) of sgn(s u) prod_i A_i(s(i), u(i)).
double eval_double_perm(const MatrixTuple& t);
/// Sum over s of sgn(s) per(B_s), B_s(k, l) = A_l(k, s(k)).
double eval_signed_permanent(const MatrixTuple& t);
/// <(A_1 x ... x A_n) V, V> with V the antisymmetrizer vector.
double eval_tensor(const MatrixTuple& t);
/// Polarization of det(t_1 A_1 + ... + t_n A_n).
double eval_polarized(const MatrixTuple& t);

double evaluate(const MatrixTuple& t, Algorithm algorithm);

/// The production evaluator.
inline double mixed_discriminant(const MatrixTuple& t) { return eval_polarized(t); }

/// Mixed discriminant of arbitrary (not necessarily Hermitian) square
/// matrices; used for non-Hermitian slots such as off-diagonal blocks.
Complex mixed_discriminant_complex(std::span<const CMatrix> mats);

/// Permanent by Ryser's inclusion-exclusion, n <= 20.
Complex permanent(const CMatrix& c);
double permanent(const RMatrix& c);

struct DiscriminantGradient {
  std::vector<HermitianMatrix> q;  // D(..., X in slot i, ...) = tr(X q[i])
  double value = 0.0;              // D(t)
};

/// Q_i on the real basis of Hermitian matrix units, n^2 linear-functional
/// evaluations per slot.
DiscriminantGradient gradient(const MatrixTuple& t);

/// |sum_i A_i Q_i - D I|_max
double euler_identity_residual(const MatrixTuple& t);
double euler_identity_residual(const MatrixTuple& t, const DiscriminantGradient& g);
/// |sum_i <A_i Q_i w, w> - D <w, w>|
double euler_quadratic_residual(const MatrixTuple& t, const DiscriminantGradient& g, const CVector& w);

struct DsTupleReport {
  double psd_violation = 0.0;    // max_i max(0, -lambda_min(A_i))
  double trace_violation = 0.0;  // max_i |tr A_i - 1|
  double sum_violation = 0.0;    // |sum_i A_i - I|_max
  bool is_doubly_stochastic = false;
};

DsTupleReport check_doubly_stochastic(const MatrixTuple& t, const Tolerances& tol = kDefaultTolerances);

struct ExchangeValues {
  double d_ij = 0.0;  // slot j replaced by A_i, evaluated directly
  double d_ji = 0.0;
  double trace_ij = 0.0;  // tr(A_i Q_j)
  double trace_ji = 0.0;
};

/// D(A^{i,j}) and D(A^{j,i}) computed directly and through the gradient.
/// Throws InvariantBreach if the two routes disagree beyond 1e-8 relative.
ExchangeValues exchange_value(const MatrixTuple& t, int i, int j);

/// Ensures a complex mixed-discriminant value is real to 1e-9 (1 + |v|).
double real_part_checked(Complex v, std::string_view where);

}  // namespace mixdisc
