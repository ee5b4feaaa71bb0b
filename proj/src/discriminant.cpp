#include "mixdisc/discriminant.hpp"

#include <algorithm>
#include <string>

#include "mixdisc/kernels.hpp"

namespace mixdisc {

namespace {

constexpr int kPermanentGate = 20;

void require_gate(int n, Algorithm algorithm) {
  if (n > dimension_gate(algorithm)) {
    throw DimensionTooLarge(std::string(algorithm_name(algorithm)) + " accepts n <= " +
                            std::to_string(dimension_gate(algorithm)) + ", got " +
                            std::to_string(n));
  }
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixTuple

MatrixTuple::MatrixTuple(std::vector<HermitianMatrix> mats) : mats_(std::move(mats)) {
  const int n = dim();
  if (n == 0) throw DimensionMismatch("empty tuple");
  if (n > kMaxDimension) throw DimensionTooLarge("tuple size " + std::to_string(n));
  for (const auto& m : mats_) {
    if (m.dim() != n) {
      throw DimensionMismatch("tuple of " + std::to_string(n) + " matrices has a member of dimension " +
                              std::to_string(m.dim()));
    }
  }
}

MatrixTuple MatrixTuple::uniform(int n) {
  const HermitianMatrix j = HermitianMatrix::identity(n) * (1.0 / n);
  return MatrixTuple(std::vector<HermitianMatrix>(static_cast<std::size_t>(n), j));
}

MatrixTuple MatrixTuple::diagonal_from_columns(const RMatrix& c) {
  if (c.rows() != c.cols()) throw DimensionMismatch("diagonal tuple needs a square matrix");
  std::vector<HermitianMatrix> mats;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    std::vector<double> d(c.col(j).data(), c.col(j).data() + c.rows());
    mats.push_back(HermitianMatrix::diagonal(d));
  }
  return MatrixTuple(std::move(mats));
}

MatrixTuple MatrixTuple::diagonal_permutation(int n) {
  return diagonal_from_columns(RMatrix::Identity(n, n));
}

MatrixTuple MatrixTuple::with_slot(int i, HermitianMatrix x) const {
  std::vector<HermitianMatrix> mats = mats_;
  mats.at(static_cast<std::size_t>(i)) = std::move(x);
  return MatrixTuple(std::move(mats));
}

HermitianMatrix MatrixTuple::sum() const {
  CMatrix s = CMatrix::Zero(dim(), dim());
  for (const auto& m : mats_) s += m.matrix();
  return HermitianMatrix(s);
}

std::vector<CMatrix> MatrixTuple::dense() const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(m.matrix());
  return out;
}

// ---------------------------------------------------------------------------
// Algorithm metadata

int dimension_gate(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Polarized: return 20;
    case Algorithm::SigmaDet: return 10;
    case Algorithm::DoublePerm: return 6;
    case Algorithm::SignedPermanent: return 7;
    case Algorithm::Tensor: return 6;
  }
  return 0;
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Polarized: return "polarized";
    case Algorithm::SigmaDet: return "sigma-det";
    case Algorithm::DoublePerm: return "double-perm";
    case Algorithm::SignedPermanent: return "signed-perm";
    case Algorithm::Tensor: return "tensor";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::Polarized, Algorithm::SigmaDet, Algorithm::DoublePerm,
                      Algorithm::SignedPermanent, Algorithm::Tensor}) {
    if (algorithm_name(a) == name) return a;
  }
  throw PreconditionViolated("unknown algorithm '" + std::string(name) + "'");
}

double real_part_checked(Complex v, std::string_view where) {
  if (std::abs(v.imag()) >= 1e-9 * (1.0 + std::abs(v))) {
    throw InvariantBreach(std::string(where) + ": imaginary residue " + num(v.imag()) +
                          " on a Hermitian input");
  }
  return v.real();
}

// ---------------------------------------------------------------------------
// Evaluators

double eval_sigma_det(const MatrixTuple& t) {
  const int n = t.dim();
  require_gate(n, Algorithm::SigmaDet);
  NeumaierSum<Complex> total;
  CMatrix assembled(n, n);
  kernels::for_each_permutation(n, [&](std::span<const int> sigma, int) {
    for (int i = 0; i < n; ++i) assembled.col(i) = t[sigma[i]].matrix().col(i);
    total.add(det_in_place(assembled));
  });
  return real_part_checked(total.value(), "sigma-det");
}

double eval_double_perm(const MatrixTuple& t) {
  const int n = t.dim();
  require_gate(n, Algorithm::DoublePerm);
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
  kernels::for_each_permutation(n, [&](std::span<const int> p, int s) {
    perms.emplace_back(p.begin(), p.end());
    signs.push_back(s);
  });
  NeumaierSum<Complex> total;
  for (std::size_t a = 0; a < perms.size(); ++a) {
    for (std::size_t b = 0; b < perms.size(); ++b) {
      Complex prod = static_cast<double>(signs[a] * signs[b]);
      for (int i = 0; i < n && prod != Complex{}; ++i) prod *= t[i](perms[a][i], perms[b][i]);
      total.add(prod);
    }
  }
  return real_part_checked(total.value(), "double-perm");
}

double eval_signed_permanent(const MatrixTuple& t) {
  const int n = t.dim();
  require_gate(n, Algorithm::SignedPermanent);
  NeumaierSum<Complex> total;
  CMatrix b(n, n);
  kernels::for_each_permutation(n, [&](std::span<const int> sigma, int sign) {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) b(k, l) = t[l](k, sigma[k]);
    const Complex p = kernels::parallel::permanent_ryser(b);
    total.add(sign > 0 ? p : -p);
  });
  return real_part_checked(total.value(), "signed-perm");
}

double eval_tensor(const MatrixTuple& t) {
  const int n = t.dim();
  require_gate(n, Algorithm::Tensor);
  // Index word (i_1, ..., i_n) flattened with i_1 most significant.
  std::size_t len = 1;
  for (int k = 0; k < n; ++k) len *= static_cast<std::size_t>(n);
  std::vector<Complex> v(len, 0.0);
  kernels::for_each_permutation(n, [&](std::span<const int> tau, int sign) {
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(tau[k]);
    v[idx] = static_cast<double>(sign);
  });

  // w = (A_1 x ... x A_n) v, one mode at a time
  std::vector<Complex> w = v;
  std::vector<Complex> fiber(static_cast<std::size_t>(n));
  std::size_t stride = len;
  for (int k = 0; k < n; ++k) {
    stride /= static_cast<std::size_t>(n);
    const CMatrix& a = t[k].matrix();
    for (std::size_t base = 0; base < len; ++base) {
      if ((base / stride) % static_cast<std::size_t>(n) != 0) continue;
      for (int r = 0; r < n; ++r) fiber[static_cast<std::size_t>(r)] = w[base + static_cast<std::size_t>(r) * stride];
      for (int r = 0; r < n; ++r) {
        Complex s = 0.0;
        for (int c = 0; c < n; ++c) s += a(r, c) * fiber[static_cast<std::size_t>(c)];
        w[base + static_cast<std::size_t>(r) * stride] = s;
      }
    }
  }

  NeumaierSum<Complex> total;
  for (std::size_t i = 0; i < len; ++i)
    if (v[i] != Complex{}) total.add(w[i] * std::conj(v[i]));
  return real_part_checked(total.value(), "tensor");
}

double eval_polarized(const MatrixTuple& t) {
  require_gate(t.dim(), Algorithm::Polarized);
  const auto dense = t.dense();
  return real_part_checked(kernels::parallel::mixed_discriminant_centered(dense), "polarized");
}

double evaluate(const MatrixTuple& t, Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Polarized: return eval_polarized(t);
    case Algorithm::SigmaDet: return eval_sigma_det(t);
    case Algorithm::DoublePerm: return eval_double_perm(t);
    case Algorithm::SignedPermanent: return eval_signed_permanent(t);
    case Algorithm::Tensor: return eval_tensor(t);
  }
  return 0.0;
}

Complex mixed_discriminant_complex(std::span<const CMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  if (n > dimension_gate(Algorithm::Polarized)) {
    throw DimensionTooLarge("mixed discriminant of " + std::to_string(n) + " matrices");
  }
  for (const auto& m : mats) {
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch("tuple members must be n x n");
  }
  return kernels::parallel::mixed_discriminant_centered(mats);
}

Complex permanent(const CMatrix& c) {
  if (c.rows() != c.cols()) throw DimensionMismatch("permanent of a non-square matrix");
  if (c.rows() > kPermanentGate) {
    throw DimensionTooLarge("permanent accepts n <= 20, got " + std::to_string(c.rows()));
  }
  return kernels::parallel::permanent_ryser(c);
}

double permanent(const RMatrix& c) { return permanent(CMatrix(c.cast<Complex>())).real(); }

// ---------------------------------------------------------------------------
// Gradient and identities

DiscriminantGradient gradient(const MatrixTuple& t) {
  const int n = t.dim();
  require_gate(n, Algorithm::Polarized);
  std::vector<CMatrix> slots = t.dense();
  const Complex i_unit(0.0, 1.0);

  DiscriminantGradient g;
  g.value = eval_polarized(t);
  g.q.reserve(static_cast<std::size_t>(n));
  for (int slot = 0; slot < n; ++slot) {
    const CMatrix saved = slots[static_cast<std::size_t>(slot)];
    CMatrix& x = slots[static_cast<std::size_t>(slot)];
    auto functional = [&] { return mixed_discriminant_complex(slots).real(); };

    CMatrix q = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      x.setZero();
      x(k, k) = 1.0;
      q(k, k) = functional();
      for (int l = k + 1; l < n; ++l) {
        x.setZero();
        x(k, l) = x(l, k) = 1.0;
        const double sym = functional();  // 2 Re Q_kl
        x.setZero();
        x(k, l) = i_unit;
        x(l, k) = -i_unit;
        const double anti = functional();  // 2 Im Q_kl
        q(k, l) = Complex(0.5 * sym, 0.5 * anti);
        q(l, k) = std::conj(q(k, l));
      }
    }
    x = saved;
    g.q.emplace_back(q);
  }
  return g;
}

double euler_identity_residual(const MatrixTuple& t) { return euler_identity_residual(t, gradient(t)); }

double euler_identity_residual(const MatrixTuple& t, const DiscriminantGradient& g) {
  const int n = t.dim();
  CMatrix s = -g.value * CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) s += t[i].matrix() * g.q[static_cast<std::size_t>(i)].matrix();
  return max_abs(s);
}

double euler_quadratic_residual(const MatrixTuple& t, const DiscriminantGradient& g, const CVector& w) {
  const int n = t.dim();
  if (w.size() != n) throw DimensionMismatch("vector length differs from tuple dimension");
  Complex s = -g.value * w.squaredNorm();
  for (int i = 0; i < n; ++i) {
    s += w.dot(t[i].matrix() * (g.q[static_cast<std::size_t>(i)].matrix() * w));
  }
  return std::abs(s);
}

DsTupleReport check_doubly_stochastic(const MatrixTuple& t, const Tolerances& tol) {
  DsTupleReport r;
  const int n = t.dim();
  CMatrix s = -CMatrix::Identity(n, n);
  for (const auto& a : t) {
    r.psd_violation = std::max(r.psd_violation, std::max(0.0, -min_eigenvalue(a)));
    r.trace_violation = std::max(r.trace_violation, std::abs(a.trace() - 1.0));
    s += a.matrix();
  }
  r.sum_violation = max_abs(s);
  r.is_doubly_stochastic = r.psd_violation <= tol.ds_tol && r.trace_violation <= tol.ds_tol &&
                           r.sum_violation <= tol.ds_tol;
  return r;
}

ExchangeValues exchange_value(const MatrixTuple& t, int i, int j) {
  const int n = t.dim();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw PreconditionViolated("exchange needs distinct slots in range");
  }
  ExchangeValues e;
  e.d_ij = eval_polarized(t.with_slot(j, t[i]));
  e.d_ji = eval_polarized(t.with_slot(i, t[j]));
  const auto g = gradient(t);
  e.trace_ij = (t[i].matrix() * g.q[static_cast<std::size_t>(j)].matrix()).trace().real();
  e.trace_ji = (t[j].matrix() * g.q[static_cast<std::size_t>(i)].matrix()).trace().real();
  if (relative_gap(e.d_ij, e.trace_ij) > 1e-8 || relative_gap(e.d_ji, e.trace_ji) > 1e-8) {
    throw InvariantBreach("exchange values disagree between direct and trace forms");
  }
  return e;
}

}  // namespace mixdisc
