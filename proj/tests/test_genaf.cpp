#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mixdisc/genaf.hpp"
#include "oracles.hpp"

using namespace mixdisc;
using namespace mixdisc::testing;

namespace {

double log_upper(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::log(std::pow(n, n) / f);
}

}  // namespace

TEST(WeightVector, Validation) {
  EXPECT_NO_THROW(WeightVector({2, 0, 1}));
  EXPECT_THROW(WeightVector({2, 0, 0}), InvalidWeight);
  EXPECT_THROW(WeightVector({3, -1, 1}), InvalidWeight);
  EXPECT_THROW(WeightVector(std::vector<int>{}), InvalidWeight);
}

TEST(Expand, Examples) {
  Rng rng(81);
  const MatrixTuple t = random_psd_tuple(3, rng);
  const MatrixTuple same = expand_tuple(t, WeightVector::ones(3));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(max_abs(CMatrix(same[i].matrix() - t[i].matrix())), 0.0);

  const MatrixTuple e = expand_tuple(t, WeightVector({2, 0, 1}));
  EXPECT_EQ(max_abs(CMatrix(e[0].matrix() - t[0].matrix())), 0.0);
  EXPECT_EQ(max_abs(CMatrix(e[1].matrix() - t[0].matrix())), 0.0);
  EXPECT_EQ(max_abs(CMatrix(e[2].matrix() - t[2].matrix())), 0.0);

  const MatrixTuple p = random_psd_tuple(2, rng);
  const MatrixTuple pp = expand_tuple(p, WeightVector({2, 0}));
  EXPECT_EQ(max_abs(CMatrix(pp[1].matrix() - p[0].matrix())), 0.0);

  EXPECT_THROW(expand_tuple(t, WeightVector({1, 1})), InvalidWeight);
}

TEST(MAlpha, ConcentratedWeightIsScaledDeterminant) {
  Rng rng(82);
  for (int n = 1; n <= 6; ++n) {
    const MatrixTuple t = random_psd_tuple(n, rng);
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    a[0] = n;
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    EXPECT_LE(rel_err(m_alpha(t, WeightVector(a)), fact * det_hermitian(t[0])), 1e-10);
  }
}

TEST(MAlpha, DiagonalTupleIsPermanentOfRepeatedColumns) {
  Rng rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const RMatrix b = random_nonnegative(n, rng);
    const WeightVector a = random_weight(n, rng);
    RMatrix repeated(n, n);
    int col = 0;
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < a[j]; ++r) repeated.col(col++) = b.col(j);
    const double want = brute_permanent(repeated);
    EXPECT_LE(std::abs(m_alpha(MatrixTuple::diagonal_from_columns(b), a) - want), 1e-10 * (1 + want));
    EXPECT_LE(std::abs(permanent(expand_columns(b, a)) - want), 1e-12 * (1 + want));
  }
}

TEST(MAlpha, UniformTupleWithOnes) {
  EXPECT_LE(rel_err(m_alpha(MatrixTuple::uniform(5), WeightVector::ones(5)), 120.0 / 3125.0), 1e-12);
}

TEST(MAlpha, SymmetricUnderJointPermutation) {
  Rng rng(84);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const WeightVector a = random_weight(n, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<HermitianMatrix> mats;
    std::vector<int> pa;
    for (int i : perm) {
      mats.push_back(t[i]);
      pa.push_back(a[i]);
    }
    EXPECT_LE(rel_err(m_alpha(MatrixTuple(mats), WeightVector(pa)), m_alpha(t, a)), 1e-10);
  }
}

TEST(RandomWeight, ValidAndCoversSimplex) {
  Rng rng(85);
  std::set<std::vector<int>> seen;
  for (int k = 0; k < 2000; ++k) seen.insert(random_weight(3, rng).values());
  EXPECT_EQ(seen.size(), 10u);  // C(5, 2)
}

TEST(LogConcavity, TrivialCombination) {
  Rng rng(86);
  const MatrixTuple t = random_psd_tuple(4, rng);
  ConvexCombination c;
  c.target = random_weight(4, rng);
  c.vectors = {c.target};
  c.weights = {1.0};
  const auto r = check_log_concavity(t, c);
  EXPECT_FALSE(r.skipped);
  EXPECT_NEAR(r.cap_slack, 0.0, 1e-12);
  EXPECT_NEAR(r.m_slack, log_upper(4), 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(LogConcavity, ClassicalAlexandrovFenchel) {
  Rng rng(87);
  for (int n = 2; n <= 5; ++n) {
    const auto r = check_log_concavity(random_psd_tuple(n, rng), classical_af_combination(n));
    EXPECT_TRUE(r.holds);
    // plain AF already gives log D >= (log D12 + log D21) / 2
    EXPECT_GE(r.m_slack, log_upper(n) - 1e-9);
  }
}

TEST(LogConcavity, RandomCombinationsHold) {
  Rng rng(88);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const ConvexCombination c = random_combination(n, 1 + trial % 3, rng);
    EXPECT_NO_THROW(c.validate());
    const auto r = check_log_concavity(t, c);
    if (r.skipped) continue;
    ++checked;
    EXPECT_TRUE(r.holds) << r.cap_slack << " " << r.m_slack;
  }
  EXPECT_GT(checked, 50);
}

TEST(LogConcavity, SingularVertexIsSkipped) {
  std::vector<double> d0{1, 0}, d1{0, 1};
  const MatrixTuple t({HermitianMatrix::diagonal(d0), HermitianMatrix::diagonal(d1)});
  ConvexCombination c;
  c.target = WeightVector({1, 1});
  c.vectors = {WeightVector({2, 0}), WeightVector({0, 2})};
  c.weights = {0.5, 0.5};
  const auto r = check_log_concavity(t, c);
  EXPECT_TRUE(r.skipped);
}

TEST(Combination, ValidationRejectsMismatch) {
  ConvexCombination c;
  c.target = WeightVector({1, 1});
  c.vectors = {WeightVector({2, 0})};
  c.weights = {1.0};
  EXPECT_THROW(c.validate(), InvalidWeight);
  c.vectors = {WeightVector({2, 0}), WeightVector({0, 2})};
  c.weights = {0.6, 0.6};
  EXPECT_THROW(c.validate(), InvalidWeight);
}

TEST(AfExperiment, PermanentValues) {
  for (int n = 4; n <= 12; n += 2) {
    const auto r = af_lower_bound_experiment(n);
    EXPECT_EQ(r.per_e, 2.0);
    EXPECT_EQ(r.per_alpha1, std::ldexp(1.0, n / 2));
    EXPECT_EQ(r.per_alpha2, std::ldexp(1.0, n / 2));
    EXPECT_NEAR(r.log_deficit, (n / 2 - 1) * std::log(2.0), 1e-12);
    EXPECT_LE(r.log_deficit, log_upper(n) + 1e-9);
  }
  const auto r8 = af_lower_bound_experiment(8);
  EXPECT_DOUBLE_EQ(r8.ratio, 0.125);
  EXPECT_NEAR(r8.log_deficit, 3 * std::log(2.0), 1e-12);
}

TEST(AfExperiment, PermanentsByBruteForce) {
  for (int n = 4; n <= 8; n += 2) {
    const RMatrix b = af_matrix(n);
    const auto r = af_lower_bound_experiment(n);
    EXPECT_EQ(brute_permanent(b), r.per_e);
    EXPECT_EQ(brute_permanent(expand_columns(b, r.alpha1)), r.per_alpha1);
  }
}

TEST(AfExperiment, BlockWeightsGiveZeroPermanent) {
  // (2,..,2,0,..,0) leaves rows k+1..N-1 uncovered once N >= 4
  for (int n = 4; n <= 10; n += 2) {
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n / 2; ++i) a[static_cast<std::size_t>(i)] = 2;
    EXPECT_EQ(permanent(expand_columns(af_matrix(n), WeightVector(a))), 0.0);
  }
}

TEST(AfExperiment, RejectsOddOrLarge) {
  EXPECT_THROW(af_lower_bound_experiment(7), PreconditionViolated);
  EXPECT_THROW(af_lower_bound_experiment(22), PreconditionViolated);
}
