#pragma once

// The minimum of D over doubly stochastic tuples: the n!/n^n bound, a sampler
// for doubly stochastic tuples, pair averaging, closed-form families near the
// minimizer, and a randomized local search that tries to go below the bound.

#include <cstdint>
#include <vector>

#include "mixdisc/capacity.hpp"
#include "mixdisc/discriminant.hpp"

namespace mixdisc {

/// n! / n^n
double bapat_bound(int n);

/// Random PSD draws scaled to doubly stochastic form. Decomposable or
/// non-converging draws are redrawn; throws SamplerExhausted after 100.
MatrixTuple random_ds_tuple(int n, std::uint64_t seed);
MatrixTuple random_ds_tuple(int n, Rng& rng);

/// Replaces slots i and j by their average.
MatrixTuple average_pair(const MatrixTuple& t, int i, int j);

/// Applies average_pair(k, k+1) for k = 0..n-2, `sweeps` times.
MatrixTuple averaging_sweep(const MatrixTuple& t, int sweeps);

/// max_i |A_i - I/n|_max
double distance_to_uniform(const MatrixTuple& t);

struct PairDeviationFamily {
  MatrixTuple tuple;  // (A1, 2I/n - A1, I/n, ..., I/n)
  double predicted = 0.0;
  double actual = 0.0;
};

/// Throws PreconditionViolated unless A1 is PSD with unit trace and
/// A1 <= (2/n) I.
PairDeviationFamily pair_deviation_family(int n, const HermitianMatrix& a1, const Tolerances& tol = kDefaultTolerances);

/// D(P/n, ..., P/n) for positive definite P with trace n. Throws
/// InvariantBreach if it differs from (n!/n^n) det P by more than 1e-9
/// relative.
double dnp_family_value(const HermitianMatrix& p, const Tolerances& tol = kDefaultTolerances);

struct SearchOptions {
  int restarts = 3;
  int max_rejections = 40;
  double initial_step = 0.1;
  bool keep_trajectories = false;
};

struct SearchRecord {
  int n = 0;
  double best_value = 0.0;
  MatrixTuple best_tuple;
  long trials = 0;
  std::uint64_t seed = 0;
  bool below_bound = false;
  double bound = 0.0;
  double distance_to_uniform = -1.0;  // set when best_value is within 1e-5 of the bound
  std::vector<std::vector<double>> trajectories;  // per trial, D after each accepted move
};

/// Samples doubly stochastic tuples and descends along random tangent
/// directions (zero trace per slot, zero slot sum), accepting strict
/// decreases that keep every slot PSD.
SearchRecord minimize_search(int n, long trials, std::uint64_t seed, const SearchOptions& options = {});

}  // namespace mixdisc
