#include "mixdisc/pascal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixdisc/kernels.hpp"

namespace mixdisc {

namespace {

constexpr int kBlockGate = 6;
constexpr int kTensorGate = 4;

struct Permutation {
  std::vector<int> p;
  int sign;
};

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  kernels::for_each_permutation(n, [&](std::span<const int> p, int sign) {
    out.push_back({std::vector<int>(p.begin(), p.end()), sign});
  });
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix diagonal_block_sum(const BlockMatrix& rho) {
  CMatrix s = CMatrix::Zero(rho.n(), rho.n());
  for (int i = 0; i < rho.n(); ++i) s += rho.block(i, i);
  return s;
}

CMatrix trace_matrix(const BlockMatrix& rho) {
  CMatrix t(rho.n(), rho.n());
  for (int i = 0; i < rho.n(); ++i)
    for (int j = 0; j < rho.n(); ++j) t(i, j) = rho.block(i, j).trace();
  return t;
}

double block_defect(const BlockMatrix& rho) {
  const CMatrix id = CMatrix::Identity(rho.n(), rho.n());
  return max_abs(CMatrix(diagonal_block_sum(rho) - id)) + max_abs(CMatrix(trace_matrix(rho) - id));
}

}  // namespace

BlockMatrix::BlockMatrix(CMatrix full) : full_(std::move(full)) {
  const auto rows = full_.rows();
  n_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
  if (rows == 0 || full_.cols() != rows || static_cast<Eigen::Index>(n_) * n_ != rows) {
    throw DimensionMismatch("block matrix must be n^2 x n^2, got " + std::to_string(rows) + "x" +
                            std::to_string(full_.cols()));
  }
  if (n_ > kMaxDimension) throw DimensionTooLarge("block grid size " + std::to_string(n_));
}

BlockMatrix BlockMatrix::from_blocks(const std::vector<std::vector<CMatrix>>& blocks) {
  const int n = static_cast<int>(blocks.size());
  if (n == 0) throw DimensionMismatch("empty block grid");
  CMatrix full(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(blocks[static_cast<std::size_t>(i)].size()) != n) throw DimensionMismatch("ragged block grid");
    for (int j = 0; j < n; ++j) {
      const CMatrix& b = blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (b.rows() != n || b.cols() != n) throw DimensionMismatch("blocks must be n x n");
      full.block(i * n, j * n, n, n) = b;
    }
  }
  return BlockMatrix(std::move(full));
}

BlockMatrix BlockMatrix::block_diagonal(const MatrixTuple& t) {
  const int n = t.dim();
  CMatrix full = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) full.block(i * n, i * n, n, n) = t[i].matrix();
  return BlockMatrix(std::move(full));
}

double qp_block(const BlockMatrix& rho) {
  const int n = rho.n();
  if (n > kBlockGate) throw DimensionTooLarge("qp_block accepts n <= " + std::to_string(kBlockGate));
  NeumaierSum<Complex> total;
  std::vector<CMatrix> slots(static_cast<std::size_t>(n));
  kernels::for_each_permutation(n, [&](std::span<const int> p, int sign) {
    for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = rho.block(i, p[static_cast<std::size_t>(i)]);
    total.add(static_cast<double>(sign) * mixed_discriminant_complex(slots));
  });
  return real_part_checked(total.value(), "qp_block");
}

double qp_tensor(const BlockMatrix& rho) {
  const int n = rho.n();
  if (n > kTensorGate) throw DimensionTooLarge("qp_tensor accepts n <= " + std::to_string(kTensorGate));
  const auto perms = all_permutations(n);
  const auto count = static_cast<long>(perms.size());
  std::vector<Complex> partial(perms.size());
#pragma omp parallel for schedule(static)
  for (long a = 0; a < count; ++a) {
    const auto& t1 = perms[static_cast<std::size_t>(a)];
    NeumaierSum<Complex> sum;
    for (const auto& t2 : perms)
      for (const auto& t3 : perms)
        for (const auto& t4 : perms) {
          Complex prod = static_cast<double>(t1.sign * t2.sign * t3.sign * t4.sign);
          for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            prod *= rho.tensor(t1.p[k], t2.p[k], t3.p[k], t4.p[k]);
          }
          sum.add(prod);
        }
    partial[static_cast<std::size_t>(a)] = sum.value();
  }
  NeumaierSum<Complex> total;
  for (const auto& v : partial) total.add(v);
  return real_part_checked(total.value() / static_cast<double>(count), "qp_tensor");
}

BlockDsReport check_block_ds(const BlockMatrix& rho, const Tolerances& tol) {
  BlockDsReport r;
  const CMatrix& full = rho.full();
  r.hermitian_defect = hermitian_defect(full);
  const CMatrix sym = 0.5 * (full + full.adjoint());
  r.psd_violation = std::max(0.0, -min_eigenvalue(HermitianMatrix(sym)));
  const CMatrix id = CMatrix::Identity(rho.n(), rho.n());
  r.sum_violation = max_abs(CMatrix(diagonal_block_sum(rho) - id));
  r.trace_violation = max_abs(CMatrix(trace_matrix(rho) - id));
  r.is_block_ds = r.hermitian_defect <= tol.hermitian_tol * std::max(1.0, max_abs(full)) &&
                  r.psd_violation <= tol.ds_tol && r.sum_violation <= tol.ds_tol && r.trace_violation <= tol.ds_tol;
  return r;
}

BlockMatrix assemble_separable(const SeparableSpec& spec, const Tolerances& tol) {
  if (spec.terms.empty()) throw DimensionMismatch("separable spec has no terms");
  const int n = spec.terms.front().first.dim();
  CMatrix full = CMatrix::Zero(n * n, n * n);
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    const auto& [p, q] = spec.terms[k];
    if (p.dim() != n || q.dim() != n) throw DimensionMismatch("separable factors must all be n x n");
    for (const HermitianMatrix* f : {&p, &q}) {
      const auto e = eig_hermitian(*f);
      if (e.values(n - 1) < -tol.psd_tol * std::max(1.0, e.values(0))) {
        throw TermNotPsd("term " + std::to_string(k) + " has eigenvalue " + num(e.values(n - 1)));
      }
    }
    full += kron(p.matrix(), q.matrix());
  }
  return BlockMatrix(std::move(full));
}

BlockScaling scale_block_ds(const BlockMatrix& rho, const Tolerances& tol, long max_iter) {
  const int n = rho.n();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix full = rho.full();
  BlockScaling r;
  r.defect = block_defect(rho);
  while (r.defect >= tol.ds_tol && r.iterations < max_iter) {
    const CMatrix s = inv_sqrt_psd(HermitianMatrix(diagonal_block_sum(BlockMatrix(full))), tol).matrix();
    CMatrix k = kron(id, s);
    full = k * full * k.adjoint();
    full = 0.5 * (full + full.adjoint()).eval();
    const CMatrix t = trace_matrix(BlockMatrix(full));
    const CMatrix rr = inv_sqrt_psd(HermitianMatrix(CMatrix(0.5 * (t + t.adjoint()))), tol).matrix();
    k = kron(rr, id);
    full = k * full * k.adjoint();
    full = 0.5 * (full + full.adjoint()).eval();
    ++r.iterations;
    r.defect = block_defect(BlockMatrix(full));
  }
  r.rho = BlockMatrix(std::move(full));
  r.converged = r.defect < tol.ds_tol;
  return r;
}

namespace {

template <typename Draw>
BlockMatrix sample_block_ds(Draw&& draw) {
  Tolerances tight = kDefaultTolerances;
  tight.ds_tol = 1e-12;
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      const BlockScaling s = scale_block_ds(draw(), tight);
      if (s.converged && check_block_ds(s.rho).is_block_ds) return s.rho;
    } catch (const NotPositiveDefinite&) {
    }
  }
  throw SamplerExhausted("no block doubly stochastic sample after 100 draws");
}

}  // namespace

BlockMatrix random_separable_ds(int n, Rng& rng) {
  if (n < 1) throw PreconditionViolated("sampler needs n >= 1");
  return sample_block_ds([&] {
    SeparableSpec spec;
    const int k = 1 + static_cast<int>(rng.uniform() * n * n);
    for (int i = 0; i < k; ++i) spec.terms.emplace_back(random_psd(n, rng), random_psd(n, rng));
    return assemble_separable(spec);
  });
}

BlockMatrix random_block_ds(int n, Rng& rng) {
  if (n < 1) throw PreconditionViolated("sampler needs n >= 1");
  return sample_block_ds([&] {
    const int rank = n + static_cast<int>(rng.uniform() * (n * n - n + 1));
    CMatrix g(n * n, rank);
    for (int j = 0; j < rank; ++j)
      for (int i = 0; i < n * n; ++i) g(i, j) = rng.complex_normal();
    return BlockMatrix(CMatrix(g * g.adjoint()));
  });
}

QpExperiment separable_qp_experiment(int n, long draws, std::uint64_t seed) {
  if (n < 1 || n > kBlockGate) throw DimensionTooLarge("experiment accepts n <= " + std::to_string(kBlockGate));
  if (draws < 1) throw PreconditionViolated("experiment needs at least one draw");
  std::vector<double> values(static_cast<std::size_t>(draws));
  const Rng base(seed);
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k < draws; ++k) {
    Rng rng = base.split(static_cast<std::uint64_t>(k));
    values[static_cast<std::size_t>(k)] = qp_block(random_separable_ds(n, rng));
  }
  QpExperiment r;
  r.n = n;
  r.draws = draws;
  r.min_qp = *std::min_element(values.begin(), values.end());
  r.bound = 1.0;
  for (int k = 1; k <= n; ++k) r.bound *= static_cast<double>(k) / n;
  r.below_bound = r.min_qp < r.bound - 1e-6;
  return r;
}

}  // namespace mixdisc
