#include "mixdisc/genaf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mixdisc {

namespace {

constexpr double kLogFloor = 1e-300;

double log_upper(int n) {
  double v = 0.0;
  for (int k = 1; k <= n; ++k) v += std::log(static_cast<double>(n) / k);
  return v;
}

}  // namespace

WeightVector::WeightVector(std::vector<int> alpha) : alpha_(std::move(alpha)) {
  const int n = dim();
  if (n == 0) throw InvalidWeight("empty weight vector");
  int total = 0;
  for (int a : alpha_) {
    if (a < 0) throw InvalidWeight("negative entry " + std::to_string(a));
    total += a;
  }
  if (total != n) throw InvalidWeight("entries sum to " + std::to_string(total) + ", expected " + std::to_string(n));
}

WeightVector WeightVector::ones(int n) { return WeightVector(std::vector<int>(static_cast<std::size_t>(n), 1)); }

void ConvexCombination::validate() const {
  const int n = target.dim();
  if (weights.empty() || weights.size() != vectors.size()) throw InvalidWeight("weights and vectors differ in count");
  double total = 0.0;
  std::vector<double> mix(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] >= 0.0)) throw InvalidWeight("negative combination weight");
    if (vectors[k].dim() != n) throw InvalidWeight("weight vectors differ in length");
    total += weights[k];
    for (int i = 0; i < n; ++i) mix[static_cast<std::size_t>(i)] += weights[k] * vectors[k][i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidWeight("combination weights sum to " + num(total));
  for (int i = 0; i < n; ++i) {
    if (std::abs(mix[static_cast<std::size_t>(i)] - target[i]) > 1e-12) {
      throw InvalidWeight("combination misses the target at entry " + std::to_string(i));
    }
  }
}

MatrixTuple expand_tuple(const MatrixTuple& t, const WeightVector& alpha) {
  if (alpha.dim() != t.dim()) throw InvalidWeight("weight length differs from tuple size");
  std::vector<HermitianMatrix> mats;
  for (int i = 0; i < t.dim(); ++i)
    for (int r = 0; r < alpha[i]; ++r) mats.push_back(t[i]);
  return MatrixTuple(std::move(mats));
}

RMatrix expand_columns(const RMatrix& c, const WeightVector& alpha) {
  if (alpha.dim() != c.cols()) throw InvalidWeight("weight length differs from column count");
  RMatrix out(c.rows(), c.cols());
  int col = 0;
  for (int j = 0; j < alpha.dim(); ++j)
    for (int r = 0; r < alpha[j]; ++r) out.col(col++) = c.col(j);
  return out;
}

double m_alpha(const MatrixTuple& t, const WeightVector& alpha) { return eval_polarized(expand_tuple(t, alpha)); }

LogConcavityCheck check_log_concavity(const MatrixTuple& t, const ConvexCombination& comb, const CapacityOptions& options) {
  comb.validate();
  if (comb.target.dim() != t.dim()) throw InvalidWeight("combination length differs from tuple size");
  LogConcavityCheck r;

  auto log_cap = [&](const WeightVector& a, double& out) {
    try {
      const double v = capacity(expand_tuple(t, a), options).value;
      if (!(v > kLogFloor)) return false;
      out = std::log(v);
      return true;
    } catch (const SingularPencil&) {
      return false;
    }
  };
  auto log_m = [&](const WeightVector& a, double& out) {
    const double v = m_alpha(t, a);
    if (!(v > kLogFloor)) return false;
    out = std::log(v);
    return true;
  };

  double cap_target = 0.0, m_target = 0.0;
  if (!log_cap(comb.target, cap_target) || !log_m(comb.target, m_target)) {
    r.skipped = true;
    r.skip_reason = "target tuple has zero capacity";
    return r;
  }
  double cap_mix = 0.0, m_mix = 0.0;
  for (std::size_t k = 0; k < comb.vectors.size(); ++k) {
    double lc = 0.0, lm = 0.0;
    if (!log_cap(comb.vectors[k], lc) || !log_m(comb.vectors[k], lm)) {
      r.skipped = true;
      r.skip_reason = "vector " + std::to_string(k) + " has zero capacity";
      return r;
    }
    cap_mix += comb.weights[k] * lc;
    m_mix += comb.weights[k] * lm;
  }
  r.cap_slack = cap_target - cap_mix;
  r.m_slack = m_target - m_mix + log_upper(t.dim());
  r.holds = r.cap_slack >= -1e-6 && r.m_slack >= -1e-6;
  return r;
}

WeightVector random_weight(int n, Rng& rng) {
  // stars and bars: choose n - 1 bar positions among 2n - 1 slots
  std::vector<int> slots(static_cast<std::size_t>(2 * n - 1));
  std::iota(slots.begin(), slots.end(), 0);
  for (int i = 0; i < n - 1; ++i) {
    const int j = i + static_cast<int>(rng.uniform() * (2 * n - 1 - i));
    std::swap(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
  }
  std::vector<int> bars(slots.begin(), slots.begin() + (n - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<int> alpha;
  int prev = -1;
  for (int b : bars) {
    alpha.push_back(b - prev - 1);
    prev = b;
  }
  alpha.push_back(2 * n - 1 - prev - 1);
  return WeightVector(std::move(alpha));
}

ConvexCombination random_combination(int n, int pairs, Rng& rng) {
  ConvexCombination c;
  c.target = random_weight(n, rng);
  std::vector<double> raw;
  for (int p = 0; p < pairs; ++p) {
    // d moves up to min(alpha_j, alpha_k) units between two coordinates so
    // that both target + d and target - d stay nonnegative
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    const int j = static_cast<int>(rng.uniform() * n), k = static_cast<int>(rng.uniform() * n);
    const int room = std::min(c.target[j], c.target[k]);
    if (j == k || room == 0) continue;
    const int step = 1 + static_cast<int>(rng.uniform() * room);
    d[static_cast<std::size_t>(j)] = step;
    d[static_cast<std::size_t>(k)] = -step;
    std::vector<int> up = c.target.values(), down = c.target.values();
    for (int i = 0; i < n; ++i) {
      up[static_cast<std::size_t>(i)] += d[static_cast<std::size_t>(i)];
      down[static_cast<std::size_t>(i)] -= d[static_cast<std::size_t>(i)];
    }
    const double w = rng.uniform(0.1, 1.0);
    c.vectors.emplace_back(std::move(up));
    c.vectors.emplace_back(std::move(down));
    raw.push_back(w);
    raw.push_back(w);
  }
  if (c.vectors.empty()) {
    c.vectors.push_back(c.target);
    raw.push_back(1.0);
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double w : raw) c.weights.push_back(w / total);
  return c;
}

ConvexCombination classical_af_combination(int n) {
  if (n < 2) throw InvalidWeight("classical combination needs n >= 2");
  std::vector<int> a1(static_cast<std::size_t>(n), 1), a2(static_cast<std::size_t>(n), 1);
  a1[0] = 2;
  a1[1] = 0;
  a2[0] = 0;
  a2[1] = 2;
  ConvexCombination c;
  c.weights = {0.5, 0.5};
  c.vectors = {WeightVector(a1), WeightVector(a2)};
  c.target = WeightVector::ones(n);
  return c;
}

RMatrix af_matrix(int n) {
  RMatrix b = RMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) b(i, (i + 1) % n) += 1.0;
  return b;
}

AfExperiment af_lower_bound_experiment(int n) {
  if (n < 2 || n % 2 != 0 || n > 20) throw PreconditionViolated("experiment needs even N in [2, 20]");
  AfExperiment r;
  r.n = n;
  std::vector<int> a1(static_cast<std::size_t>(n), 0), a2(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) (i % 2 == 0 ? a1 : a2)[static_cast<std::size_t>(i)] = 2;
  r.alpha1 = WeightVector(a1);
  r.alpha2 = WeightVector(a2);
  const RMatrix b = af_matrix(n);
  r.per_e = permanent(b);
  r.per_alpha1 = permanent(expand_columns(b, r.alpha1));
  r.per_alpha2 = permanent(expand_columns(b, r.alpha2));
  r.ratio = r.per_e / std::sqrt(r.per_alpha1 * r.per_alpha2);
  r.log_deficit = -std::log(r.ratio);
  return r;
}

}  // namespace mixdisc
