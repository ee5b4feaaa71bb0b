#include "mixdisc/core.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <string>

namespace mixdisc {

void Tolerances::validate() const {
  for (double t : {hermitian_tol, psd_tol, rank_tol, ds_tol, opt_tol}) {
    if (!(t >= 0.0 && t < 1.0)) {
      throw PreconditionViolated("tolerances must lie in [0, 1), got " + num(t));
    }
  }
}

// ---------------------------------------------------------------------------
// Rng

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::result_type Rng::operator()() {
  const std::uint64_t key = mix64(seed_ + kGolden * (stream_ + 1));
  return mix64(key + kGolden * ++counter_);
}

Rng Rng::split(std::uint64_t key) const {
  return Rng(seed_, mix64(stream_ ^ mix64(key + 0xD1B54A32D192ED03ULL)));
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; one draw per call keeps the generator free of cached state.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double s = std::numbers::sqrt2 / 2.0;
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

// ---------------------------------------------------------------------------
// HermitianMatrix

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermitian_defect(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const CMatrix& grid, double tol) {
  if (grid.rows() != grid.cols()) {
    throw DimensionMismatch("matrix is " + std::to_string(grid.rows()) + "x" +
                            std::to_string(grid.cols()));
  }
  if (!grid.allFinite()) throw NotHermitian("non-finite entry");
  const double defect = hermitian_defect(grid);
  if (defect > tol * std::max(1.0, max_abs(grid))) {
    throw NotHermitian("Hermitian defect " + num(defect));
  }
  m_ = (grid + grid.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) { return HermitianMatrix(CMatrix::Zero(n, n)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::outer(const CVector& x) { return HermitianMatrix(x * x.adjoint()); }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(CMatrix(m_ + o.m_));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(CMatrix(m_ - o.m_));
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(CMatrix(m_ * s)); }

HermitianMatrix HermitianMatrix::congruence(const CMatrix& x) const {
  return HermitianMatrix(CMatrix(x * m_ * x.adjoint()));
}

// ---------------------------------------------------------------------------
// Determinant

Complex det(const CMatrix& a) {
  CMatrix lu = a;
  return det_in_place(lu);
}

Complex det_in_place(CMatrix& lu) {
  if (lu.rows() != lu.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const Eigen::Index n = lu.rows();
  if (n == 0) return 1.0;
  Complex result = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(lu(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      result = -result;
    }
    const Complex p = lu(k, k);
    result *= p;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / p;
      if (f == Complex{}) continue;
      for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return result;
}

double det_hermitian(const HermitianMatrix& a) { return det(a.matrix()).real(); }

// ---------------------------------------------------------------------------
// Hermitian Jacobi

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
  constexpr int kMaxSweeps = 100;
  const int n = h.dim();
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);

  const double frob = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();
  auto off_norm2 = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
    return s;
  };

  int sweep = 0;
  bool converged = false;
  for (; sweep <= kMaxSweeps; ++sweep) {
    if (off_norm2() <= (eps * frob) * (eps * frob)) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double b = std::abs(a(p, q));
        if (b == 0.0) continue;
        const Complex phase = a(p, q) / b;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * b);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ph_conj = std::conj(phase);

        // A <- A U with U = [[c, s], [-s conj(phase), c conj(phase)]]
        for (int k = 0; k < n; ++k) {
          const Complex ap = a(k, p), aq = a(k, q);
          a(k, p) = c * ap - s * ph_conj * aq;
          a(k, q) = s * ap + c * ph_conj * aq;
          const Complex vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp - s * ph_conj * vq;
          v(k, q) = s * vp + c * ph_conj * vq;
        }
        // A <- U^* A
        for (int k = 0; k < n; ++k) {
          const Complex ap = a(p, k), aq = a(q, k);
          a(p, k) = c * ap - s * phase * aq;
          a(q, k) = s * ap + c * phase * aq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    throw NonConvergence("Hermitian Jacobi exceeded 100 sweeps", sweep, std::sqrt(off_norm2()));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

double min_eigenvalue(const HermitianMatrix& a) {
  const auto e = eig_hermitian(a);
  return e.values(e.values.size() - 1);
}

HermitianMatrix inv_sqrt_psd(const HermitianMatrix& a, const Tolerances& tol) {
  const auto e = eig_hermitian(a);
  const int n = a.dim();
  const double top = e.values(0);
  const double bottom = e.values(n - 1);
  if (!(top > 0.0) || !(bottom > tol.psd_tol * top)) {
    throw NotPositiveDefinite("eigenvalue range [" + num(bottom) + ", " +
                              num(top) + "]");
  }
  RVector d = e.values.array().rsqrt();
  return HermitianMatrix(CMatrix(e.vectors * d.asDiagonal() * e.vectors.adjoint()));
}

HermitianMatrix sqrt_psd(const HermitianMatrix& a) {
  const auto e = eig_hermitian(a);
  RVector d = e.values.cwiseMax(0.0).cwiseSqrt();
  return HermitianMatrix(CMatrix(e.vectors * d.asDiagonal() * e.vectors.adjoint()));
}

int rank_psd(const HermitianMatrix& a, const Tolerances& tol) {
  const auto e = eig_hermitian(a);
  const double top = e.values(0);
  if (!(top > 0.0)) return 0;
  return static_cast<int>((e.values.array() > tol.rank_tol * top).count());
}

HermitianMatrix random_psd(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_psd(n, rng);
}

HermitianMatrix random_psd(int n, Rng& rng) {
  if (n < 1) throw PreconditionViolated("random_psd needs n >= 1");
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  return HermitianMatrix(CMatrix(g * g.adjoint()));
}

HermitianMatrix random_hermitian(int n, Rng& rng) {
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  return HermitianMatrix(CMatrix((g + g.adjoint()) * 0.5));
}

CMatrix random_unitary(int n, Rng& rng) {
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())));
}

}  // namespace mixdisc
