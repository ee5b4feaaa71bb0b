#include <gtest/gtest.h>
#include <omp.h>

#include <set>

#include "mixdisc/kernels.hpp"
#include "oracles.hpp"

using namespace mixdisc;
using namespace mixdisc::testing;

TEST(Permutations, VisitsEachOnceWithCorrectSign) {
  for (int n = 0; n <= 7; ++n) {
    std::set<std::vector<int>> seen;
    int previous_sign = 0;
    kernels::for_each_permutation(n, [&](std::span<const int> p, int sign) {
      std::vector<int> v(p.begin(), p.end());
      EXPECT_EQ(sign, permutation_sign(v));
      if (previous_sign != 0) EXPECT_EQ(sign, -previous_sign);
      previous_sign = sign;
      EXPECT_TRUE(seen.insert(v).second);
    });
    std::size_t fact = 1;
    for (int k = 2; k <= n; ++k) fact *= static_cast<std::size_t>(k);
    EXPECT_EQ(seen.size(), fact) << "n=" << n;
  }
}

TEST(PermanentKernels, SerialAndParallelMatchBruteForce) {
  Rng rng(4);
  for (int n = 1; n <= 8; ++n) {
    const CMatrix c = random_complex(n, n, rng);
    const Complex want = brute_permanent(c);
    EXPECT_LT(std::abs(kernels::serial::permanent_ryser(c) - want), 1e-11 * (1 + std::abs(want)));
    EXPECT_LT(std::abs(kernels::parallel::permanent_ryser(c) - want), 1e-11 * (1 + std::abs(want)));
  }
}

TEST(PermanentKernels, IntegerInputIsExact) {
  // all-ones n x n has permanent n!
  for (int n = 1; n <= 12; ++n) {
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    const CMatrix ones = CMatrix::Ones(n, n);
    EXPECT_EQ(kernels::parallel::permanent_ryser(ones), Complex(fact));
  }
}

TEST(DiscriminantKernels, CenteredMatchesLiteralSubsetSum) {
  Rng rng(12);
  for (int n = 1; n <= 9; ++n) {
    std::vector<CMatrix> mats;
    for (int i = 0; i < n; ++i) mats.push_back(random_complex(n, n, rng));
    const Complex ref = kernels::serial::mixed_discriminant_subsets(mats);
    const Complex got = kernels::parallel::mixed_discriminant_centered(mats);
    EXPECT_LT(std::abs(got - ref), 1e-9 * (1 + std::abs(ref))) << "n=" << n;
  }
}

TEST(DiscriminantKernels, NEqualsTwoHandExpansion) {
  // D(A, B) = det(A + B) - det(A) - det(B)
  Rng rng(13);
  std::vector<CMatrix> mats{random_complex(2, 2, rng), random_complex(2, 2, rng)};
  const Complex want = det(CMatrix(mats[0] + mats[1])) - det(mats[0]) - det(mats[1]);
  EXPECT_LT(std::abs(kernels::parallel::mixed_discriminant_centered(mats) - want), 1e-13);
  EXPECT_LT(std::abs(kernels::serial::mixed_discriminant_subsets(mats) - want), 1e-13);
}

TEST(DiscriminantKernels, BitStableAcrossThreadCounts) {
  Rng rng(14);
  const int n = 10;
  std::vector<CMatrix> mats;
  for (int i = 0; i < n; ++i) mats.push_back(random_complex(n, n, rng));
  CMatrix c = random_complex(14, 14, rng);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Complex d1 = kernels::parallel::mixed_discriminant_centered(mats);
  const Complex p1 = kernels::parallel::permanent_ryser(c);
  omp_set_num_threads(4);
  const Complex d4 = kernels::parallel::mixed_discriminant_centered(mats);
  const Complex p4 = kernels::parallel::permanent_ryser(c);
  omp_set_num_threads(saved);

  EXPECT_EQ(d1, d4);
  EXPECT_EQ(p1, p4);
}
