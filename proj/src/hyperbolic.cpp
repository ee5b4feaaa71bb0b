#include "mixdisc/hyperbolic.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "mixdisc/extremal.hpp"

namespace mixdisc {

namespace {

constexpr int kMixedGate = 20;
constexpr long kBlock = 64;

void check_point(const HyperbolicPencil& pencil, const RVector& x) {
  if (x.size() != pencil.m()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, pencil has " +
                            std::to_string(pencil.m()));
  }
}

}  // namespace

HyperbolicPencil::HyperbolicPencil(std::vector<HermitianMatrix> b, RVector e, const Tolerances& tol)
    : b_(std::move(b)), e_(std::move(e)) {
  if (b_.empty()) throw DimensionMismatch("pencil needs at least one matrix");
  const int n = b_.front().dim();
  for (const auto& m : b_)
    if (m.dim() != n) throw DimensionMismatch("pencil matrices differ in size");
  if (e_.size() != m()) throw DimensionMismatch("direction length differs from pencil size");
  const HermitianMatrix pe = at(e_);
  const auto eig = eig_hermitian(pe);
  if (!(eig.values(n - 1) > tol.psd_tol * std::max(1.0, eig.values(0)))) {
    throw NotPositiveDefinite("sum e_i B_i has smallest eigenvalue " + num(eig.values(n - 1)));
  }
  whiten_ = inv_sqrt_psd(pe, tol);
  p_e_ = det_hermitian(pe);
}

HyperbolicPencil HyperbolicPencil::from_tuple(const MatrixTuple& t, const Tolerances& tol) {
  return HyperbolicPencil(std::vector<HermitianMatrix>(t.begin(), t.end()), RVector::Ones(t.dim()), tol);
}

HermitianMatrix HyperbolicPencil::at(const RVector& x) const {
  check_point(*this, x);
  CMatrix s = CMatrix::Zero(n(), n());
  for (int i = 0; i < m(); ++i) s += x(i) * b_[static_cast<std::size_t>(i)].matrix();
  return HermitianMatrix(s);
}

double HyperbolicPencil::p(const RVector& x) const { return det_hermitian(at(x)); }

RootVector roots(const HyperbolicPencil& pencil, const RVector& x) {
  const HermitianMatrix px = pencil.at(x);
  const CMatrix& l = pencil.whitening().matrix();
  const CMatrix reduced = l * px.matrix() * l;
  RootVector r;
  r.lambda = eig_hermitian(HermitianMatrix(CMatrix(0.5 * (reduced + reduced.adjoint())))).values;
  double prod = pencil.p_e(), scale = pencil.p_e();
  for (Eigen::Index i = 0; i < r.lambda.size(); ++i) {
    prod *= r.lambda(i);
    scale *= std::abs(r.lambda(i));
  }
  const double px_det = det_hermitian(px);
  const double denom = std::max(scale, std::abs(px_det));
  r.residual = denom > 0.0 ? std::abs(prod - px_det) / denom : 0.0;
  return r;
}

double trace_e(const HyperbolicPencil& pencil, const RVector& x) { return roots(pencil, x).lambda.sum(); }

bool is_e_nonnegative(const HyperbolicPencil& pencil, const RVector& x, double tol) {
  const RVector lambda = roots(pencil, x).lambda;
  return lambda(lambda.size() - 1) >= -tol;
}

double mixed_value(const HyperbolicPencil& pencil, const std::vector<RVector>& x) {
  const int n = pencil.n();
  if (static_cast<int>(x.size()) != n) {
    throw DimensionMismatch("mixed value needs " + std::to_string(n) + " vectors, got " + std::to_string(x.size()));
  }
  if (n > kMixedGate) throw DimensionTooLarge("mixed value accepts degree <= " + std::to_string(kMixedGate));
  for (const auto& v : x) check_point(pencil, v);
  const long total = 1L << n;
  const long blocks = (total + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic, 4)
  for (long b = 0; b < blocks; ++b) {
    NeumaierSum<double> sum;
    const long end = std::min(total, (b + 1) * kBlock);
    for (long mask = std::max(1L, b * kBlock); mask < end; ++mask) {
      RVector y = RVector::Zero(pencil.m());
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) y += x[static_cast<std::size_t>(i)];
      const int size = std::popcount(static_cast<unsigned long>(mask));
      const double v = pencil.p(y);
      sum.add((n - size) % 2 == 0 ? v : -v);
    }
    partial[static_cast<std::size_t>(b)] = sum.value();
  }
  NeumaierSum<double> total_sum;
  for (double v : partial) total_sum.add(v);
  return total_sum.value();
}

HdReport check_hd_membership(const HyperbolicPencil& pencil, const std::vector<RVector>& x, double tol) {
  HdReport r;
  if (x.empty()) return r;
  r.min_root = std::numeric_limits<double>::infinity();
  RVector sum = RVector::Zero(pencil.m());
  for (const auto& v : x) {
    check_point(pencil, v);
    const RVector lambda = roots(pencil, v).lambda;
    r.min_root = std::min(r.min_root, lambda(lambda.size() - 1));
    r.trace_violation = std::max(r.trace_violation, std::abs(lambda.sum() - 1.0));
    sum += v;
  }
  r.sum_violation = (sum - pencil.e()).cwiseAbs().maxCoeff();
  r.is_member = r.min_root >= -tol && r.trace_violation <= tol && r.sum_violation <= tol;
  return r;
}

std::vector<RVector> axis_vectors(int m) {
  std::vector<RVector> out;
  for (int i = 0; i < m; ++i) out.push_back(RVector::Unit(m, i));
  return out;
}

HdSample random_hd_member(int n, Rng& rng) {
  HdSample s;
  for (int attempt = 0; attempt < 100; ++attempt) {
    s.pencil = HyperbolicPencil::from_tuple(random_ds_tuple(n, rng));
    // M = convex combination of up to n permutation matrices
    RMatrix mix = RMatrix::Zero(n, n);
    const int terms = 1 + static_cast<int>(rng.uniform() * n);
    std::vector<double> w(static_cast<std::size_t>(terms));
    for (auto& v : w) v = -std::log(1.0 - rng.uniform());
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < terms; ++k) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i) mix(i, perm[static_cast<std::size_t>(i)]) += w[static_cast<std::size_t>(k)] / wsum;
    }
    s.x.assign(static_cast<std::size_t>(n), RVector::Zero(n));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) s.x[static_cast<std::size_t>(j)](i) = mix(i, j);
    if (check_hd_membership(s.pencil, s.x).is_member) return s;
    ++s.rejections;
  }
  throw SamplerExhausted("no e-doubly stochastic sample after 100 draws");
}

HdExperiment hd_lower_bound_experiment(int n, long draws, std::uint64_t seed) {
  if (n < 1 || n > 6) throw DimensionTooLarge("experiment accepts 1 <= n <= 6");
  if (draws < 1) throw PreconditionViolated("experiment needs at least one draw");
  std::vector<double> ratios(static_cast<std::size_t>(draws));
  std::vector<long> rejections(static_cast<std::size_t>(draws));
  const Rng base(seed);
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k < draws; ++k) {
    Rng rng = base.split(static_cast<std::uint64_t>(k));
    const HdSample s = random_hd_member(n, rng);
    ratios[static_cast<std::size_t>(k)] = mixed_value(s.pencil, s.x) / s.pencil.p_e();
    rejections[static_cast<std::size_t>(k)] = s.rejections;
  }
  HdExperiment r;
  r.n = n;
  r.draws = draws;
  r.rejections = std::accumulate(rejections.begin(), rejections.end(), 0L);
  const auto it = std::min_element(ratios.begin(), ratios.end());
  r.min_ratio = *it;
  r.bound = 1.0;
  for (int k = 1; k <= n; ++k) r.bound *= static_cast<double>(k) / n;
  r.below_bound = r.min_ratio < r.bound - 1e-6;
  // replay the minimizing draw from its own stream
  Rng replay = base.split(static_cast<std::uint64_t>(it - ratios.begin()));
  r.worst = random_hd_member(n, replay);
  return r;
}

}  // namespace mixdisc
