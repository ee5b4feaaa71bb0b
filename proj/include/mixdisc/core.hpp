#pragma once

// Dense complex linear algebra shared by every module: Hermitian matrices,
// determinants, the Hermitian Jacobi eigensolver, PSD helpers, compensated
// summation and the seeded counter-based generator.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "mixdisc/errors.hpp"

namespace mixdisc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Largest supported matrix dimension.
inline constexpr int kMaxDimension = 32;

struct Tolerances {
  double hermitian_tol = 1e-10;
  double psd_tol = 1e-9;
  double rank_tol = 1e-9;
  double ds_tol = 1e-8;
  double opt_tol = 1e-9;

  /// Throws PreconditionViolated unless every field lies in [0, 1).
  void validate() const;
};

inline const Tolerances kDefaultTolerances{};

// ---------------------------------------------------------------------------
// Compensated summation

/// Neumaier's variant of Kahan summation. Works for double and Complex
/// (the real and imaginary parts are compensated independently).
template <typename T>
class NeumaierSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, Complex>) {
      add_component(sum_re_, comp_re_, x.real());
      add_component(sum_im_, comp_im_, x.imag());
    } else {
      add_component(sum_re_, comp_re_, x);
    }
  }

  NeumaierSum& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const {
    if constexpr (std::is_same_v<T, Complex>) {
      return {sum_re_ + comp_re_, sum_im_ + comp_im_};
    } else {
      return sum_re_ + comp_re_;
    }
  }

 private:
  static void add_component(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double sum_re_ = 0.0, comp_re_ = 0.0;
  double sum_im_ = 0.0, comp_im_ = 0.0;
};

// ---------------------------------------------------------------------------
// Randomness

/// Counter-based generator: output k of stream (seed, stream) is a pure
/// function of (seed, stream, k). Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Independent child generator; children of distinct keys never overlap.
  Rng split(std::uint64_t key) const;

  double uniform();                  // [0, 1)
  double uniform(double lo, double hi);
  double normal();                   // standard normal
  Complex complex_normal();          // E|z|^2 = 1

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Hermitian matrices

class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Rejects grids whose Hermitian defect exceeds tol * max(1, max|entry|),
  /// then symmetrizes exactly by averaging with the conjugate transpose.
  explicit HermitianMatrix(const CMatrix& grid, double tol = kDefaultTolerances.hermitian_tol);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(std::span<const double> d);
  /// x x^*
  static HermitianMatrix outer(const CVector& x);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

  /// X H X^*, symmetrized.
  HermitianMatrix congruence(const CMatrix& x) const;

 private:
  CMatrix m_;
};

/// Max-entry norm |A|_max.
double max_abs(const CMatrix& a);
/// max |A - A^*|.
double hermitian_defect(const CMatrix& a);

// ---------------------------------------------------------------------------
// Factorizations

/// Determinant by LU with partial pivoting.
Complex det(const CMatrix& a);
/// Same, overwriting `a` with its LU factors.
Complex det_in_place(CMatrix& a);
/// Real determinant of a Hermitian matrix (imaginary round-off dropped).
double det_hermitian(const HermitianMatrix& a);

struct EigenDecomposition {
  RVector values;   // descending
  CMatrix vectors;  // unitary, column k pairs with values(k)
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices, at most 100 sweeps.
/// Throws NonConvergence past the cap.
EigenDecomposition eig_hermitian(const HermitianMatrix& a);

/// Smallest eigenvalue.
double min_eigenvalue(const HermitianMatrix& a);

/// L with L A L = I. Requires every eigenvalue > psd_tol * largest.
HermitianMatrix inv_sqrt_psd(const HermitianMatrix& a, const Tolerances& tol = kDefaultTolerances);

/// Principal square root of a PSD matrix (negative round-off eigenvalues clipped).
HermitianMatrix sqrt_psd(const HermitianMatrix& a);

/// Number of eigenvalues above rank_tol * largest eigenvalue.
int rank_psd(const HermitianMatrix& a, const Tolerances& tol = kDefaultTolerances);

/// G G^* with G an n x n matrix of independent standard complex Gaussians.
HermitianMatrix random_psd(int n, std::uint64_t seed);
HermitianMatrix random_psd(int n, Rng& rng);

/// Random Hermitian with i.i.d. complex Gaussian off-diagonal entries.
HermitianMatrix random_hermitian(int n, Rng& rng);

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
CMatrix random_unitary(int n, Rng& rng);

/// |U^* U - I|_max
double unitarity_defect(const CMatrix& u);

}  // namespace mixdisc
