#include <gtest/gtest.h>

#include <bit>
#include <numeric>

#include "mixdisc/extremal.hpp"
#include "mixdisc/structure.hpp"
#include "oracles.hpp"

using namespace mixdisc;
using namespace mixdisc::testing;

namespace {

/// Direct sum of two tuples: first block's slots act on the leading
/// coordinates, second block's on the trailing ones.
MatrixTuple direct_sum(const MatrixTuple& a, const MatrixTuple& b) {
  const int n = a.dim() + b.dim();
  std::vector<HermitianMatrix> mats;
  for (const auto& m : a) {
    CMatrix g = CMatrix::Zero(n, n);
    g.topLeftCorner(a.dim(), a.dim()) = m.matrix();
    mats.emplace_back(g);
  }
  for (const auto& m : b) {
    CMatrix g = CMatrix::Zero(n, n);
    g.bottomRightCorner(b.dim(), b.dim()) = m.matrix();
    mats.emplace_back(g);
  }
  return MatrixTuple(std::move(mats));
}

MatrixTuple conjugate(const MatrixTuple& t, const CMatrix& u) {
  std::vector<HermitianMatrix> mats;
  for (const auto& m : t) mats.push_back(m.congruence(u));
  return MatrixTuple(std::move(mats));
}

HermitianMatrix diag(std::vector<double> d) { return HermitianMatrix::diagonal(d); }

/// Oracle: the exact nonnegative-matrix definition, checked over every
/// row subset R and column subset C with |R| + |C| = n.
bool has_zero_block(const RMatrix& m, double threshold) {
  const int n = static_cast<int>(m.rows());
  for (unsigned rows = 1; rows < (1u << n) - 1; ++rows) {
    const int k = std::popcount(rows);
    for (unsigned cols = 1; cols < (1u << n); ++cols) {
      if (std::popcount(cols) != n - k) continue;
      bool zero = true;
      for (int i = 0; i < n && zero; ++i)
        for (int j = 0; j < n && zero; ++j)
          if ((rows >> i & 1u) && (cols >> j & 1u) && m(i, j) > threshold) zero = false;
      if (zero) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Indecomposable, Examples) {
  for (int n = 2; n <= 6; ++n) EXPECT_TRUE(is_indecomposable(MatrixTuple::uniform(n)).holds);

  const MatrixTuple pair({diag({1, 0}), diag({0, 1})});
  const auto r = is_indecomposable(pair);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.witness, std::vector<int>{0});

  const MatrixTuple sum = direct_sum(MatrixTuple::uniform(2), MatrixTuple::uniform(3));
  const auto s = is_indecomposable(sum);
  EXPECT_FALSE(s.holds);
  EXPECT_EQ(s.witness, (std::vector<int>{0, 1}));
}

TEST(Indecomposable, RejectsLargeAndNonPsd) {
  EXPECT_THROW(is_indecomposable(MatrixTuple::uniform(17)), DimensionTooLarge);
  EXPECT_THROW(is_indecomposable(MatrixTuple({diag({1, -1}), diag({1, 1})})), PreconditionViolated);
}

TEST(PositivityRank, ExamplesAgreeWithDiscriminant) {
  const MatrixTuple pair({diag({1, 0}), diag({0, 1})});
  EXPECT_TRUE(positivity_rank_test(pair).holds);
  EXPECT_NEAR(eval_polarized(pair), 1.0, 1e-15);

  const MatrixTuple degenerate({diag({1, 0}), diag({2.5, 0})});
  const auto r = positivity_rank_test(degenerate);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.witness, (std::vector<int>{0, 1}));
  EXPECT_EQ(eval_polarized(degenerate), 0.0);

  EXPECT_TRUE(positivity_rank_test(MatrixTuple::uniform(5)).holds);
}

TEST(PositivityRank, MatchesSignOfDiscriminantOnLowRankTuples) {
  Rng rng(51);
  int zero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<HermitianMatrix> mats;
    // rank-one members along a few shared directions make D vanish often
    std::vector<CVector> dirs;
    for (int k = 0; k < n - 1 + trial % 2; ++k) dirs.push_back(random_complex(n, 1, rng));
    for (int i = 0; i < n; ++i) {
      const auto& x = dirs[static_cast<std::size_t>(rng.uniform() * static_cast<double>(dirs.size()))];
      mats.push_back(HermitianMatrix::outer(x));
    }
    const MatrixTuple t(mats);
    const bool positive = eval_polarized(t) > 1e-10;
    EXPECT_EQ(positivity_rank_test(t).holds, positive) << "trial " << trial;
    zero += !positive;
  }
  EXPECT_GT(zero, 20);
  EXPECT_LT(zero, 200);
}

TEST(Indecomposable, StrictImpliesWeak) {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<HermitianMatrix> mats;
    for (int i = 0; i < n; ++i) {
      const CMatrix g = random_complex(n, 1 + trial % 2, rng);
      mats.emplace_back(CMatrix(g * g.adjoint()));
    }
    const MatrixTuple t(mats);
    if (is_indecomposable(t).holds) EXPECT_TRUE(positivity_rank_test(t).holds);
  }
}

TEST(Decompose, UniformTupleIsOnePart) {
  const auto r = decompose(MatrixTuple::uniform(4));
  ASSERT_EQ(r.parts.size(), 1u);
  EXPECT_EQ(r.parts[0].indices, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Decompose, DiagonalPermutationTupleSplitsIntoSingletons) {
  const int n = 5;
  const auto r = decompose(MatrixTuple::diagonal_permutation(n));
  ASSERT_EQ(r.parts.size(), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(r.parts[static_cast<std::size_t>(i)].indices, std::vector<int>{i});
    EXPECT_NEAR(eval_polarized(r.parts[static_cast<std::size_t>(i)].tuple), 1.0, 1e-14);
  }
  EXPECT_NEAR(r.value, 1.0, 1e-13);
}

TEST(Decompose, DirectSumOfUniformTuples) {
  Rng rng(53);
  const CMatrix u = random_unitary(5, rng);
  const MatrixTuple t = conjugate(direct_sum(MatrixTuple::uniform(2), MatrixTuple::uniform(3)), u);
  const auto r = decompose(t);
  ASSERT_EQ(r.parts.size(), 2u);
  EXPECT_EQ(r.parts[0].indices, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.parts[1].indices, (std::vector<int>{2, 3, 4}));
  const double want = (2.0 / 4.0) * (6.0 / 27.0);
  EXPECT_LE(rel_err(r.value, want), 1e-12);
  EXPECT_LE(rel_err(eval_polarized(r.parts[0].tuple) * eval_polarized(r.parts[1].tuple), want), 1e-12);
}

TEST(Decompose, RandomBlockTuplesSatisfyPartitionAndProduct) {
  Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const int a = 1 + trial % 3, b = 1 + (trial / 3) % 3;
    const int n = a + b;
    const MatrixTuple blocks = direct_sum(random_ds_tuple(a, rng), random_ds_tuple(b, rng));
    const MatrixTuple t = conjugate(blocks, random_unitary(n, rng));
    const auto r = decompose(t);

    std::vector<int> seen;
    CMatrix all(n, 0);
    for (const auto& p : r.parts) {
      EXPECT_EQ(p.basis.cols(), static_cast<Eigen::Index>(p.indices.size()));
      EXPECT_EQ(p.tuple.dim(), static_cast<int>(p.indices.size()));
      seen.insert(seen.end(), p.indices.begin(), p.indices.end());
      CMatrix grown(n, all.cols() + p.basis.cols());
      grown << all, p.basis;
      all = grown;
      // the part acts only on its subspace
      for (std::size_t k = 0; k < p.indices.size(); ++k) {
        const CMatrix& full = t[p.indices[k]].matrix();
        const CMatrix back = p.basis * p.tuple[static_cast<int>(k)].matrix() * p.basis.adjoint();
        EXPECT_LE(max_abs(CMatrix(full - back)), 1e-9);
      }
    }
    std::sort(seen.begin(), seen.end());
    std::vector<int> all_idx(static_cast<std::size_t>(n));
    std::iota(all_idx.begin(), all_idx.end(), 0);
    EXPECT_EQ(seen, all_idx);
    ASSERT_EQ(all.cols(), n);
    EXPECT_LE(unitarity_defect(all), 1e-9);
    EXPECT_LE(r.product_check, 1e-8 * (1 + std::abs(r.value)));
    EXPECT_GE(r.parts.size(), 2u);
  }
}

TEST(Decompose, IndecomposableInputReturnsItself) {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixTuple t = random_ds_tuple(2 + trial % 4, rng);
    const auto r = decompose(t);
    ASSERT_EQ(r.parts.size(), 1u);
    for (int i = 0; i < t.dim(); ++i) {
      EXPECT_EQ(max_abs(CMatrix(r.parts[0].tuple[i].matrix() - t[i].matrix())), 0.0);
    }
  }
}

TEST(Decompose, RejectsNonDoublyStochastic) {
  EXPECT_THROW(decompose(MatrixTuple({diag({2, 1}), diag({1, 2})})), NotDoublyStochastic);
}

TEST(MMatrix, Examples) {
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const CMatrix w = random_unitary(n, rng);
    const RMatrix j = m_matrix(MatrixTuple::uniform(n), w);
    EXPECT_LE((j.array() - 1.0 / n).abs().maxCoeff(), 1e-14);

    const RMatrix m = m_matrix(random_ds_tuple(n, rng), w);
    EXPECT_GE(m.minCoeff(), -1e-10);
    EXPECT_LE((m.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
    EXPECT_LE((m.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);

    const RMatrix p = m_matrix(random_psd_tuple(n, rng), w);
    EXPECT_GE(p.minCoeff(), -1e-10);
  }
  EXPECT_THROW(m_matrix(MatrixTuple::uniform(2), CMatrix::Ones(2, 2)), NotUnitary);
}

TEST(FullIndecomposability, MatchesZeroBlockDefinition) {
  Rng rng(57);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 5;
    RMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.uniform() < 0.45 ? 0.0 : rng.uniform();
    const bool want = n == 1 ? m(0, 0) > 0 : !has_zero_block(m, 0.0);
    EXPECT_EQ(is_fully_indecomposable(m, 0.0), want) << m;
  }
  RMatrix tri(2, 2);
  tri << 1, 1, 0, 1;
  EXPECT_FALSE(is_fully_indecomposable(tri, 0.0));
  EXPECT_TRUE(is_fully_indecomposable(RMatrix::Constant(3, 3, 1.0 / 3), 0.0));
}

TEST(FullIndecomposability, TransfersFromTuplesToMMatrices) {
  Rng rng(58);
  const double threshold = 10 * kDefaultTolerances.ds_tol;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_ds_tuple(n, rng);
    ASSERT_TRUE(is_indecomposable(t).holds);
    for (int k = 0; k < 10; ++k) {
      EXPECT_TRUE(is_fully_indecomposable(m_matrix(t, random_unitary(n, rng)), threshold));
    }
  }
}
