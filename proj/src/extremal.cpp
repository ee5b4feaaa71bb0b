#include "mixdisc/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixdisc {

double bapat_bound(int n) {
  if (n < 1) throw PreconditionViolated("bapat_bound needs n >= 1");
  double v = 1.0;
  for (int k = 1; k <= n; ++k) v *= static_cast<double>(k) / n;
  return v;
}

MatrixTuple random_ds_tuple(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_ds_tuple(n, rng);
}

MatrixTuple random_ds_tuple(int n, Rng& rng) {
  if (n < 1) throw PreconditionViolated("random_ds_tuple needs n >= 1");
  ScalingOptions options;
  // well inside ds_tol so derived quantities (M(A, W) row sums, restricted
  // tuples) stay doubly stochastic at ds_tol as well
  options.tol.ds_tol = 1e-12;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<HermitianMatrix> mats;
    for (int i = 0; i < n; ++i) mats.push_back(random_psd(n, rng));
    try {
      auto r = scale_to_doubly_stochastic(MatrixTuple(std::move(mats)), options);
      if (check_doubly_stochastic(r.scaled).is_doubly_stochastic) return r.scaled;
    } catch (const NotIndecomposable&) {
    } catch (const NonConvergence&) {
    } catch (const NotPositiveDefinite&) {
    }
  }
  throw SamplerExhausted("no doubly stochastic tuple after 100 draws");
}

MatrixTuple average_pair(const MatrixTuple& t, int i, int j) {
  const HermitianMatrix avg = (t[i] + t[j]) * 0.5;
  return t.with_slot(i, avg).with_slot(j, avg);
}

MatrixTuple averaging_sweep(const MatrixTuple& t, int sweeps) {
  MatrixTuple cur = t;
  for (int s = 0; s < sweeps; ++s)
    for (int k = 0; k + 1 < t.dim(); ++k) cur = average_pair(cur, k, k + 1);
  return cur;
}

double distance_to_uniform(const MatrixTuple& t) {
  const int n = t.dim();
  double d = 0.0;
  for (const auto& a : t) d = std::max(d, max_abs(CMatrix(a.matrix() - CMatrix::Identity(n, n) / n)));
  return d;
}

PairDeviationFamily pair_deviation_family(int n, const HermitianMatrix& a1, const Tolerances& tol) {
  if (n < 2 || a1.dim() != n) throw PreconditionViolated("pair_deviation_family needs n >= 2 and an n x n A1");
  const auto e = eig_hermitian(a1);
  if (e.values(n - 1) < -tol.psd_tol) throw PreconditionViolated("A1 is not PSD");
  if (e.values(0) > 2.0 / n + tol.psd_tol) throw PreconditionViolated("A1 exceeds (2/n) I");
  if (std::abs(a1.trace() - 1.0) > tol.ds_tol) throw PreconditionViolated("A1 must have unit trace");

  const HermitianMatrix uniform = HermitianMatrix::identity(n) * (1.0 / n);
  std::vector<HermitianMatrix> mats{a1, uniform * 2.0 - a1};
  for (int i = 2; i < n; ++i) mats.push_back(uniform);

  PairDeviationFamily f;
  f.tuple = MatrixTuple(std::move(mats));
  const CMatrix dev = a1.matrix() - uniform.matrix();
  double coeff = 1.0;  // (n-2)! / n^(n-2)
  for (int k = 1; k <= n - 2; ++k) coeff *= static_cast<double>(k) / n;
  f.predicted = bapat_bound(n) + coeff * (dev * dev.adjoint()).trace().real();
  f.actual = eval_polarized(f.tuple);
  return f;
}

double dnp_family_value(const HermitianMatrix& p, const Tolerances& tol) {
  const int n = p.dim();
  if (std::abs(p.trace() - n) > tol.ds_tol * n) throw PreconditionViolated("P must have trace n");
  const auto e = eig_hermitian(p);
  if (!(e.values(n - 1) > tol.psd_tol * e.values(0))) throw PreconditionViolated("P must be positive definite");
  const double value =
      eval_polarized(MatrixTuple(std::vector<HermitianMatrix>(static_cast<std::size_t>(n), p * (1.0 / n))));
  const double want = bapat_bound(n) * det_hermitian(p);
  if (std::abs(value - want) > 1e-9 * std::abs(want)) {
    throw InvariantBreach("D(P/n,...,P/n) = " + num(value) + " but (n!/n^n) det P = " +
                          num(want));
  }
  return value;
}

namespace {

/// Random direction with zero trace per slot and zero sum over slots, unit
/// Frobenius norm overall.
std::vector<CMatrix> tangent_direction(int n, Rng& rng) {
  std::vector<CMatrix> h;
  CMatrix mean = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    CMatrix g = random_hermitian(n, rng).matrix();
    g -= (g.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
    mean += g / static_cast<double>(n);
    h.push_back(g);
  }
  double norm2 = 0.0;
  for (auto& g : h) {
    g -= mean;
    norm2 += g.squaredNorm();
  }
  const double norm = std::sqrt(norm2);
  if (norm > 0)
    for (auto& g : h) g /= norm;
  return h;
}

struct TrialOutcome {
  double value = 0.0;
  MatrixTuple tuple;
  std::vector<double> trajectory;
};

TrialOutcome descend(int n, Rng& rng, const SearchOptions& options) {
  TrialOutcome out;
  out.tuple = random_ds_tuple(n, rng);
  out.value = eval_polarized(out.tuple);
  out.trajectory.push_back(out.value);
  if (n == 1) return out;
  for (int restart = 0; restart < options.restarts; ++restart) {
    double h = options.initial_step;
    int rejections = 0;
    while (rejections < options.max_rejections) {
      const auto dir = tangent_direction(n, rng);
      std::vector<HermitianMatrix> mats;
      bool feasible = true;
      for (int i = 0; i < n && feasible; ++i) {
        HermitianMatrix m(CMatrix(out.tuple[i].matrix() + h * dir[static_cast<std::size_t>(i)]));
        feasible = min_eigenvalue(m) >= 0.0;
        mats.push_back(std::move(m));
      }
      if (feasible) {
        MatrixTuple cand(std::move(mats));
        const double v = eval_polarized(cand);
        if (v < out.value) {
          out.value = v;
          out.tuple = std::move(cand);
          if (options.keep_trajectories) out.trajectory.push_back(v);
          continue;
        }
      }
      h *= 0.5;
      ++rejections;
    }
  }
  return out;
}

}  // namespace

SearchRecord minimize_search(int n, long trials, std::uint64_t seed, const SearchOptions& options) {
  if (n < 1 || n > 6) throw DimensionTooLarge("minimize_search accepts 1 <= n <= 6");
  if (trials < 1) throw PreconditionViolated("minimize_search needs at least one trial");
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  const Rng base(seed);
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < trials; ++k) {
    Rng rng = base.split(static_cast<std::uint64_t>(k));
    outcomes[static_cast<std::size_t>(k)] = descend(n, rng, options);
  }

  SearchRecord r;
  r.n = n;
  r.trials = trials;
  r.seed = seed;
  r.bound = bapat_bound(n);
  std::size_t best = 0;
  for (std::size_t k = 1; k < outcomes.size(); ++k)
    if (outcomes[k].value < outcomes[best].value) best = k;
  r.best_value = outcomes[best].value;
  r.best_tuple = outcomes[best].tuple;
  r.below_bound = r.best_value < r.bound - 1e-7;
  if (r.best_value - r.bound < 1e-5) r.distance_to_uniform = distance_to_uniform(r.best_tuple);
  if (options.keep_trajectories)
    for (auto& o : outcomes) r.trajectories.push_back(std::move(o.trajectory));
  return r;
}

}  // namespace mixdisc
